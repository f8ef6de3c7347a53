'''
Synthetic translation tasks for desk-scale experiments.

``copy``: y = x. ``reverse``: y is x reversed. ``number-words``: x spells an integer below 1000 in digits,
y in English words. All sides share one vocabulary.
'''

import logging

from ..numerics import stream
from ..seq2seq.vocabulary import FIRST_CONTENT_ID
from ..seq2seq.vocabulary import Vocabulary
from .corpus import MonoCorpus
from .corpus import ParallelCorpus

#

L = logging.getLogger(__name__)

#

TASKS = ('copy', 'reverse', 'number-words')

ONES = (
	'zero', 'one', 'two', 'three', 'four', 'five', 'six', 'seven', 'eight', 'nine', 'ten',
	'eleven', 'twelve', 'thirteen', 'fourteen', 'fifteen', 'sixteen', 'seventeen', 'eighteen', 'nineteen',
)
TENS = ('', '', 'twenty', 'thirty', 'forty', 'fifty', 'sixty', 'seventy', 'eighty', 'ninety')


def number_words(n):
	if n < 20:
		return [ONES[n]]
	if n < 100:
		return [TENS[n // 10]] + ([ONES[n % 10]] if n % 10 else [])
	return [ONES[n // 100], 'hundred'] + (number_words(n % 100) if n % 100 else [])


class TaskData(object):
	'''
	:ivar Bitext: training pairs; the injected-noise partition carries provenance ``noisy``.
	:ivar MonoSource: source-language sentences independent of the bitext.
	:ivar MonoTarget: target-language sentences independent of the bitext.
	'''

	def __init__(self, name, vocabulary, bitext, mono_source, mono_target, dev, test):
		self.Name = name
		self.Vocabulary = vocabulary
		self.Bitext = bitext
		self.MonoSource = mono_source
		self.MonoTarget = mono_target
		self.Dev = dev
		self.Test = test


class _SymbolTask(object):

	def __init__(self, name, vocab_size, min_len, max_len):
		if vocab_size <= FIRST_CONTENT_ID + 1:
			raise ValueError("vocab_size must leave at least two content tokens")
		if not (1 <= min_len <= max_len):
			raise ValueError("Need 1 <= min_len <= max_len")
		self.Name = name
		self.Vocabulary = Vocabulary(['w{}'.format(i) for i in range(vocab_size - FIRST_CONTENT_ID)])
		self.MinLen = min_len
		self.MaxLen = max_len


	def sample(self, rng):
		n = int(rng.integers(self.MinLen, self.MaxLen + 1))
		x = [int(t) for t in rng.integers(FIRST_CONTENT_ID, len(self.Vocabulary), size=n)]
		return x, (list(x) if self.Name == 'copy' else x[::-1])


class _NumberTask(object):

	def __init__(self):
		self.Name = 'number-words'
		words = [str(d) for d in range(10)] + list(ONES) + [t for t in TENS if t] + ['hundred']
		self.Vocabulary = Vocabulary(words)


	def sample(self, rng):
		n = int(rng.integers(0, 1000))
		return self.Vocabulary.encode(list(str(n))), self.Vocabulary.encode(number_words(n))


def make_task(name, vocab_size=20, min_len=3, max_len=12, bitext=500, mono=5000, dev=100, test=100, noisy=0, seed=0):
	'''
	Sample a task instance; every part has its own random stream so sizes can change independently.
	'''
	if name == 'number-words':
		task = _NumberTask()
	elif name in ('copy', 'reverse'):
		task = _SymbolTask(name, vocab_size, min_len, max_len)
	else:
		raise ValueError("Unknown task '{}', expected one of {}".format(name, ', '.join(TASKS)))

	def draw(part, count):
		rng = stream(seed, 'task', name, part)
		return [task.sample(rng) for _ in range(count)]

	pairs = draw('bitext', bitext)
	corpus = ParallelCorpus(pairs, provenance='bitext')
	if noisy > 0:
		rng = stream(seed, 'task', name, 'noisy')
		sources = draw('noisy.source', noisy)
		targets = draw('noisy.target', noisy)
		order = rng.permutation(noisy)
		corpus = corpus + ParallelCorpus([(sources[i][0], targets[order[i]][1]) for i in range(noisy)], provenance='noisy')

	data = TaskData(
		name, task.Vocabulary, corpus,
		MonoCorpus([x for x, _ in draw('mono.source', mono)], 'src'),
		MonoCorpus([y for _, y in draw('mono.target', mono)], 'tgt'),
		draw('dev', dev),
		draw('test', test),
	)
	L.info("Task sampled", struct_data={'task': name, 'bitext': len(corpus), 'mono': mono, 'dev': dev, 'test': test})
	return data
