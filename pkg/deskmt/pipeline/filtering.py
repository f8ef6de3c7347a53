import logging
import collections

from ..config import Configurable
from .corpus import ParallelCorpus

#

L = logging.getLogger(__name__)

#

# Evaluation order; a dropped pair reports the first rule that fires
RULES = ('length', 'ratio', 'prefix', 'lowercase', 'printable', 'alignment', 'dedupe')

DroppedPair = collections.namedtuple('DroppedPair', ['line_no', 'rule', 'pair'])


class FilterRuleSet(Configurable):

	ConfigDefaults = {
		'max_ratio': 2.5,
		'prefixes': 'User NGC',
		'lowercase': True,
		'english_side': 'source',  # source, target or both
		'printable': True,
		'dedupe': True,
		'min_length': 1,
		'max_length': 250,
		'alignment': False,  # needs an external score per pair
		'alignment_threshold': 0.05,
	}


	def __init__(self, config_section_name='filter', config=None):
		super().__init__(config_section_name, config=config)
		self.MaxRatio = self.Config.getfloat('max_ratio')
		self.Prefixes = tuple(self.Config.getlist('prefixes'))
		self.Lowercase = self.Config.getboolean('lowercase')
		self.EnglishSide = self.Config['english_side']
		self.Printable = self.Config.getboolean('printable')
		self.Dedupe = self.Config.getboolean('dedupe')
		self.MinLength = self.Config.getint('min_length')
		self.MaxLength = self.Config.getint('max_length')
		self.Alignment = self.Config.getboolean('alignment')
		self.AlignmentThreshold = self.Config.getfloat('alignment_threshold')
		if self.MaxRatio <= 1.0:
			raise ValueError("max_ratio must be greater than 1, got {}".format(self.MaxRatio))
		if self.EnglishSide not in ('source', 'target', 'both'):
			raise ValueError("english_side must be source, target or both")


	def _english(self, source, target):
		if self.EnglishSide == 'source':
			return [source]
		if self.EnglishSide == 'target':
			return [target]
		return [source, target]


	def check(self, source, target, score=None):
		'''
		The first rule that drops the pair, or None. Deduplication is corpus-level and not checked here.
		'''
		ls = len(_words(source))
		lt = len(_words(target))
		if min(ls, lt) < self.MinLength or max(ls, lt) > self.MaxLength:
			return 'length'
		if max(ls, lt) > self.MaxRatio * max(min(ls, lt), 1):
			return 'ratio'
		if len(self.Prefixes) > 0:
			for side in (source, target):
				if isinstance(side, str) and side.lstrip().startswith(self.Prefixes):
					return 'prefix'
		if self.Lowercase:
			for side in self._english(source, target):
				if isinstance(side, str) and not any(c.islower() for c in side):
					return 'lowercase'
		if self.Printable:
			for side in (source, target):
				if isinstance(side, str) and not side.isprintable():
					return 'printable'
		if self.Alignment and score is not None and score < self.AlignmentThreshold:
			return 'alignment'
		return None


def _words(sentence):
	return sentence.split() if isinstance(sentence, str) else list(sentence)


def _key(sentence):
	return sentence if isinstance(sentence, str) else tuple(sentence)


def filter_corpus(corpus, rules=None, scores=None):
	'''
	Returns `(kept corpus, [DroppedPair])`. Kept pairs stay in order with their tags;
	`scores`, when given, holds one alignment score per pair.
	'''
	rules = rules if rules is not None else FilterRuleSet()
	kept_pairs = []
	kept_tags = []
	dropped = []
	seen = set()
	for n, ((s, t), tag) in enumerate(zip(corpus.Pairs, corpus.Tags)):
		rule = rules.check(s, t, scores[n] if scores is not None else None)
		if rule is None and rules.Dedupe:
			key = (_key(s), _key(t))
			if key in seen:
				rule = 'dedupe'
			else:
				seen.add(key)
		if rule is not None:
			dropped.append(DroppedPair(n + 1, rule, (s, t)))
			continue
		kept_pairs.append((s, t))
		kept_tags.append(tag)

	counts = collections.Counter(d.rule for d in dropped)
	L.info("Corpus filtered", struct_data=dict(
		[('kept', len(kept_pairs)), ('dropped', len(dropped))] + [(r, counts[r]) for r in RULES if counts[r] > 0]
	))
	return ParallelCorpus(kept_pairs, tags=kept_tags), dropped


def write_drop_log(path, dropped):
	'''
	TSV: line number, rule id, source ||| target.
	'''
	with open(path, 'w', encoding='utf-8') as f:
		for d in dropped:
			s, t = d.pair
			text = '{} ||| {}'.format(
				s if isinstance(s, str) else ' '.join(map(str, s)),
				t if isinstance(t, str) else ' '.join(map(str, t)),
			)
			f.write('{}\t{}\t{}\n'.format(d.line_no, d.rule, text.replace('\t', ' ')))
