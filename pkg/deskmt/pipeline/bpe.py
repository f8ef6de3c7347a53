'''
Byte-pair encoding with an end-of-word marker.

A word is split into characters, the last one carrying ``</w>``; learning repeatedly merges the most
frequent adjacent symbol pair (lexicographically smallest pair on ties). Applying the table to a word
repeatedly merges the adjacent pair with the lowest merge rank until none applies.
'''

import logging
import collections

from ..exceptions import CorpusError
from ..numerics import stream
from ..seq2seq.vocabulary import Vocabulary
from .text import tokenize

#

L = logging.getLogger(__name__)

#

END_OF_WORD = '</w>'
MAGIC = '#deskmt-bpe v1'


def word_symbols(word):
	if len(word) == 0:
		return ()
	return tuple(word[:-1]) + (word[-1] + END_OF_WORD,)


def _merge_word(symbols, pair, joined):
	out = []
	i = 0
	while i < len(symbols):
		if i + 1 < len(symbols) and symbols[i] == pair[0] and symbols[i + 1] == pair[1]:
			out.append(joined)
			i += 2
		else:
			out.append(symbols[i])
			i += 1
	return tuple(out)


def _sentences(corpus):
	for sentence in corpus:
		yield tokenize(sentence) if isinstance(sentence, str) else list(sentence)


class BpeModel(object):
	'''
	Ordered merge table plus the subword vocabulary it produces on its training corpus.
	'''

	def __init__(self, merges, symbols=()):
		self.Merges = [tuple(m) for m in merges]
		self.Ranks = {m: i for i, m in enumerate(self.Merges)}
		self.Vocabulary = Vocabulary()
		for s in symbols:
			self.Vocabulary.add(s)
		for a, b in self.Merges:
			self.Vocabulary.add(a + b)
		self._cache = {}


	def segment_word(self, word):
		cached = self._cache.get(word)
		if cached is not None:
			return cached
		symbols = word_symbols(word)
		while len(symbols) > 1:
			ranked = [
				(self.Ranks[(a, b)], (a, b))
				for a, b in zip(symbols[:-1], symbols[1:])
				if (a, b) in self.Ranks
			]
			if len(ranked) == 0:
				break
			_, pair = min(ranked)
			symbols = _merge_word(symbols, pair, pair[0] + pair[1])
		self._cache[word] = symbols
		return symbols


	def apply(self, sentence):
		'''
		Subword strings of a sentence (text or pre-tokenized words).
		'''
		words = tokenize(sentence) if isinstance(sentence, str) else sentence
		out = []
		for w in words:
			out.extend(self.segment_word(w))
		return out


	def encode(self, sentence):
		'''
		Subword ids; unseen symbols map to UNK.
		'''
		return self.Vocabulary.encode(self.apply(sentence))


	def decode(self, ids):
		return detokenize_subwords(self.Vocabulary.decode(ids))


	def save(self, path):
		with open(path, 'w', encoding='utf-8') as f:
			f.write(MAGIC + '\n')
			for a, b in self.Merges:
				f.write('{} {}\n'.format(a, b))


	@classmethod
	def load(cls, path, vocabulary=None):
		merges = []
		with open(path, 'r', encoding='utf-8') as f:
			first = f.readline().rstrip('\n')
			if first != MAGIC:
				raise CorpusError("'{}' is not a merge table".format(path))
			for line in f:
				parts = line.split()
				if len(parts) != 2:
					raise CorpusError("Malformed merge line {!r} in '{}'".format(line, path))
				merges.append((parts[0], parts[1]))
		model = cls(merges)
		if vocabulary is not None:
			model.Vocabulary = vocabulary
		return model


def detokenize_subwords(symbols):
	'''
	Join subwords back into space-separated words.
	'''
	text = ''.join(symbols)
	return ' '.join(w for w in text.split(END_OF_WORD) if len(w) > 0)


def balance_corpora(corpora, seed=0):
	'''
	Down-sample every corpus to the size of the smallest one.
	'''
	smallest = min(len(c) for c in corpora)
	out = []
	for k, corpus in enumerate(corpora):
		corpus = list(corpus)
		if len(corpus) > smallest:
			index = sorted(stream(seed, 'bpe.balance', k).choice(len(corpus), size=smallest, replace=False))
			corpus = [corpus[i] for i in index]
		out.append(corpus)
	return out


def _learn(corpora, merges):
	freq = collections.Counter()
	for corpus in corpora:
		for words in _sentences(corpus):
			freq.update(words)
	if len(freq) == 0:
		raise CorpusError("Cannot learn BPE from empty corpora")

	words = {w: word_symbols(w) for w in freq}
	symbols = []
	seen = set()
	for w in sorted(words):
		for s in words[w]:
			if s not in seen:
				seen.add(s)
				symbols.append(s)

	table = []
	for _ in range(merges):
		pairs = collections.Counter()
		for w, syms in words.items():
			for pair in zip(syms[:-1], syms[1:]):
				pairs[pair] += freq[w]
		if len(pairs) == 0:
			break
		best = min(pairs.items(), key=lambda kv: (-kv[1], kv[0]))[0]
		joined = best[0] + best[1]
		table.append(best)
		for w, syms in words.items():
			if best[0] in syms:
				words[w] = _merge_word(syms, best, joined)
	return BpeModel(table, symbols)


def learn_bpe(corpora, merges, shared=True, balance=False, seed=0):
	'''
	Learn merge tables from a list of corpora (one per language; sentences as text or word lists).

	With `shared`, one table is learned over the pooled corpora and returned; otherwise a list with one
	table per corpus. `balance` first down-samples the larger corpora to the smallest one.
	'''
	if merges < 0:
		raise ValueError("Number of merges must be nonnegative, got {}".format(merges))
	corpora = [list(c) for c in corpora]
	if len(corpora) == 0 or all(len(c) == 0 for c in corpora):
		raise CorpusError("Cannot learn BPE from empty corpora")
	if balance:
		corpora = balance_corpora(corpora, seed)
	if shared:
		model = _learn(corpora, merges)
		L.info("BPE learned", struct_data={'merges': len(model.Merges), 'vocabulary': len(model.Vocabulary)})
		return model
	return [_learn([c], merges) for c in corpora]


def apply_bpe(model, sentence):
	return model.apply(sentence)
