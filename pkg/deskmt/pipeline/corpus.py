import logging

from ..exceptions import CorpusError

#

L = logging.getLogger(__name__)

#

PROVENANCE = ('bitext', 'bt', 'kd', 'speculation', 'noisy')


class ParallelCorpus(object):
	'''
	Sentence pairs with one provenance tag per pair.

	Sentences are token-id lists or raw strings; transformations keep each pair's tag.
	'''

	def __init__(self, pairs=(), provenance='bitext', tags=None):
		self.Pairs = [(s, t) for s, t in pairs]
		if tags is None:
			tags = [provenance] * len(self.Pairs)
		self.Tags = list(tags)
		if len(self.Tags) != len(self.Pairs):
			raise CorpusError("{} pairs but {} provenance tags".format(len(self.Pairs), len(self.Tags)))


	def __len__(self):
		return len(self.Pairs)


	def __iter__(self):
		return iter(self.Pairs)


	def __getitem__(self, i):
		return self.Pairs[i]


	def __add__(self, other):
		return ParallelCorpus(self.Pairs + other.Pairs, tags=self.Tags + other.Tags)


	@property
	def sources(self):
		return [s for s, _ in self.Pairs]


	@property
	def targets(self):
		return [t for _, t in self.Pairs]


	def tagged(self, *tags):
		return ParallelCorpus(
			[p for p, tag in zip(self.Pairs, self.Tags) if tag in tags],
			tags=[tag for tag in self.Tags if tag in tags]
		)


	def without(self, *tags):
		return ParallelCorpus(
			[p for p, tag in zip(self.Pairs, self.Tags) if tag not in tags],
			tags=[tag for tag in self.Tags if tag not in tags]
		)


	def reversed(self):
		'''
		The opposite translation direction.
		'''
		return ParallelCorpus([(t, s) for s, t in self.Pairs], tags=self.Tags)


	def subset(self, index):
		return ParallelCorpus([self.Pairs[i] for i in index], tags=[self.Tags[i] for i in index])


	def map(self, func):
		'''
		Apply `func` to every sentence of both sides, tags preserved.
		'''
		return ParallelCorpus([(func(s), func(t)) for s, t in self.Pairs], tags=self.Tags)


	def provenance_counts(self):
		counts = {}
		for tag in self.Tags:
			counts[tag] = counts.get(tag, 0) + 1
		return counts


	def write_tsv(self, path, with_tags=False):
		with open(path, 'w', encoding='utf-8') as f:
			for (s, t), tag in zip(self.Pairs, self.Tags):
				fields = [_text(s), _text(t)] + ([tag] if with_tags else [])
				f.write('\t'.join(fields) + '\n')


	@classmethod
	def read_tsv(cls, path, provenance='bitext'):
		'''
		``source<TAB>target[<TAB>tag]`` per line.
		'''
		pairs = []
		tags = []
		with open(path, 'r', encoding='utf-8') as f:
			for line_no, line in enumerate(f, start=1):
				fields = line.rstrip('\n').split('\t')
				if len(fields) not in (2, 3):
					raise CorpusError("'{}' line {}: expected 2 or 3 tab-separated fields".format(path, line_no))
				pairs.append((fields[0], fields[1]))
				tags.append(fields[2] if len(fields) == 3 else provenance)
		return cls(pairs, tags=tags)


	@classmethod
	def read_aligned(cls, source_path, target_path, provenance='bitext'):
		sources = _read_lines(source_path)
		targets = _read_lines(target_path)
		if len(sources) != len(targets):
			raise CorpusError("'{}' has {} lines but '{}' has {}".format(source_path, len(sources), target_path, len(targets)))
		return cls(zip(sources, targets), provenance=provenance)


class MonoCorpus(object):

	def __init__(self, sentences, language):
		if not language:
			raise CorpusError("A monolingual corpus needs a language tag")
		self.Sentences = list(sentences)
		self.Language = language


	def __len__(self):
		return len(self.Sentences)


	def __iter__(self):
		return iter(self.Sentences)


	def __getitem__(self, i):
		return self.Sentences[i]


	def write(self, path):
		with open(path, 'w', encoding='utf-8') as f:
			for s in self.Sentences:
				f.write(_text(s) + '\n')


	@classmethod
	def read(cls, path, language):
		return cls(_read_lines(path), language)


def _text(sentence):
	if isinstance(sentence, str):
		return sentence
	return ' '.join(str(t) for t in sentence)


def _read_lines(path):
	with open(path, 'r', encoding='utf-8') as f:
		return [line.rstrip('\n') for line in f]
