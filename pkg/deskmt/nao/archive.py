import os
import logging

from ..exceptions import ArchiveError
from ..exceptions import GenotypeError
from ..seq2seq.genotype import Genotype
from .supernet import PerfRecord

#

L = logging.getLogger(__name__)

#

HEADER = '#genotype\tscore\tseed\tbudget\titeration'


class Archive(object):
	'''
	Evaluated architectures, unique by genotype, optionally backed by a TSV file that every append extends.

	Line format: canonical genotype text, score, seed, budget, iteration (tab separated).
	'''

	def __init__(self, path=None):
		self.Path = path
		self.Records = []
		self._index = {}
		if path is not None and os.path.exists(path):
			self._load(path)


	def _load(self, path):
		with open(path, 'r', encoding='utf-8') as f:
			for line_no, line in enumerate(f, start=1):
				line = line.rstrip('\n')
				if len(line) == 0 or line.startswith('#'):
					continue
				fields = line.split('\t')
				if len(fields) != 5:
					raise ArchiveError("Expected 5 fields, got {}".format(len(fields)), line_no=line_no)
				try:
					record = PerfRecord(
						Genotype.parse(fields[0]).validate(),
						float(fields[1]), int(fields[2]), int(fields[3]), int(fields[4])
					)
				except (ValueError, GenotypeError) as e:
					raise ArchiveError("Malformed record: {}".format(e), line_no=line_no)
				self._add(record)
		L.info("Archive loaded", struct_data={'path': path, 'records': len(self.Records)})


	def _add(self, record):
		key = record.Genotype.text()
		if key in self._index:
			return False
		self._index[key] = record
		self.Records.append(record)
		return True


	def __len__(self):
		return len(self.Records)


	def __contains__(self, genotype):
		return genotype.text() in self._index


	def get(self, genotype):
		return self._index.get(genotype.text())


	def append(self, record):
		'''
		Add a record unless its genotype is already known; returns whether it was added.
		'''
		if not self._add(record):
			return False
		if self.Path is not None:
			new_file = not os.path.exists(self.Path)
			with open(self.Path, 'a', encoding='utf-8') as f:
				if new_file:
					f.write(HEADER + '\n')
				f.write('{}\t{!r}\t{}\t{}\t{}\n'.format(
					record.Genotype.text(), record.Score, record.Seed, record.Budget, record.Iteration
				))
		return True


	def ranked(self):
		'''
		Records by descending score, earlier records first on ties.
		'''
		return [r for _, r in sorted(enumerate(self.Records), key=lambda ir: (-ir[1].Score, ir[0]))]


	def before(self, iteration):
		'''
		In-memory archive of the records of iterations below `iteration`, in their original order.
		'''
		view = Archive()
		for record in self.Records:
			if record.Iteration < iteration:
				view._add(record)
		return view


	def best(self):
		return self.ranked()[0] if len(self.Records) > 0 else None


	def best_by_iteration(self):
		'''
		Best score among the records of iterations 0..k, for every k seen.
		'''
		out = []
		best = None
		for it in sorted(set(r.Iteration for r in self.Records)):
			top = max(r.Score for r in self.Records if r.Iteration == it)
			best = top if best is None else max(best, top)
			out.append((it, best))
		return out
