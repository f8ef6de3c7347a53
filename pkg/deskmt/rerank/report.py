'''
Result tables: system rows x test-set columns, cell = mean BLEU over seeds.
Written as TSV and markdown, without timestamps, so that replays are byte-identical.
'''

import os
import collections


class ScoreTable(object):

	def __init__(self, title):
		self.Title = title
		self.Rows = collections.OrderedDict()  # system -> column -> list of values
		self.Columns = []


	def add(self, system, column, value):
		if column not in self.Columns:
			self.Columns.append(column)
		self.Rows.setdefault(system, collections.OrderedDict()).setdefault(column, []).append(float(value))


	def mean(self, system, column):
		values = self.Rows.get(system, {}).get(column)
		if not values:
			return None
		return sum(values) / len(values)


	def _cell(self, system, column):
		m = self.mean(system, column)
		return '-' if m is None else '{:.2f}'.format(m)


	def to_tsv(self):
		lines = ['\t'.join(['system'] + self.Columns)]
		for system in self.Rows:
			lines.append('\t'.join([system] + [self._cell(system, c) for c in self.Columns]))
		return '\n'.join(lines) + '\n'


	def to_markdown(self):
		lines = [
			'### {}'.format(self.Title),
			'',
			'| system | ' + ' | '.join(self.Columns) + ' |',
			'|---|' + '---|' * len(self.Columns),
		]
		for system in self.Rows:
			lines.append('| {} | '.format(system) + ' | '.join(self._cell(system, c) for c in self.Columns) + ' |')
		return '\n'.join(lines) + '\n'


	def write(self, directory, basename):
		os.makedirs(directory, exist_ok=True)
		with open(os.path.join(directory, basename + '.tsv'), 'w', encoding='utf-8') as f:
			f.write(self.to_tsv())
		with open(os.path.join(directory, basename + '.md'), 'w', encoding='utf-8') as f:
			f.write(self.to_markdown())


def bleu_report_lines(result, label=''):
	'''
	One-line textual BLEU report, e.g. for the `eval` command.
	'''
	return "{}{}".format('{}\t'.format(label) if label else '', repr(result))
