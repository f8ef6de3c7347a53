import os
import shutil
import tempfile
import unittest

from deskmt.exceptions import CorpusError
from deskmt.numerics import stream
from deskmt.pipeline import BpeModel
from deskmt.pipeline import balance_corpora
from deskmt.pipeline import detokenize_subwords
from deskmt.pipeline import learn_bpe
from deskmt.pipeline import word_symbols
from deskmt.seq2seq import UNK


def reference_segment(merges, word):
	'''
	Every merge of the table applied in rank order, all occurrences at once.
	'''
	symbols = list(word_symbols(word))
	for a, b in merges:
		out = []
		i = 0
		while i < len(symbols):
			if i + 1 < len(symbols) and symbols[i] == a and symbols[i + 1] == b:
				out.append(a + b)
				i += 2
			else:
				out.append(symbols[i])
				i += 1
		symbols = out
	return tuple(symbols)


def reference_learn(corpus, merges):
	'''
	Greedy learner over every running word: most frequent adjacent pair first, ties to the smallest pair.
	'''
	words = [list(word_symbols(w)) for sentence in corpus for w in sentence.split()]
	table = []
	for _ in range(merges):
		counts = {}
		for symbols in words:
			for pair in zip(symbols, symbols[1:]):
				counts[pair] = counts.get(pair, 0) + 1
		if not counts:
			break
		top = max(counts.values())
		best = sorted(p for p, c in counts.items() if c == top)[0]
		table.append(best)
		for k, symbols in enumerate(words):
			merged = []
			for s in symbols:
				if merged and merged[-1] == best[0] and s == best[1]:
					merged[-1] = best[0] + best[1]
				else:
					merged.append(s)
			words[k] = merged
	return table


def random_corpus(seed, sentences=40):
	rng = stream(seed, 'bpe-test')
	letters = 'abcde'
	out = []
	for _ in range(sentences):
		words = []
		for _ in range(int(rng.integers(1, 6))):
			words.append(''.join(letters[int(i)] for i in rng.integers(0, len(letters), size=int(rng.integers(1, 7)))))
		out.append(' '.join(words))
	return out


class BpeTestCase(unittest.TestCase):

	def setUp(self):
		self.tmpdir = tempfile.mkdtemp()


	def tearDown(self):
		shutil.rmtree(self.tmpdir)


	def test_word_symbols(self):
		self.assertEqual(word_symbols('abc'), ('a', 'b', 'c</w>'))
		self.assertEqual(word_symbols(''), ())


	def test_ties_break_lexicographically(self):
		model = learn_bpe([['aaa']], merges=5)
		self.assertEqual(model.Merges, [('a', 'a'), ('aa', 'a</w>')])
		self.assertEqual(model.apply('aaa'), ['aaa</w>'])


	def test_most_frequent_pair_first(self):
		model = learn_bpe([['ab ab ab ac']], merges=1)
		self.assertEqual(model.Merges, [('a', 'b</w>')])
		self.assertEqual(model.apply('ac ab abc'), ['a', 'c</w>', 'ab</w>', 'a', 'b', 'c</w>'])


	def test_merge_tables_match_reference_learner(self):
		for seed in range(10):
			corpus = random_corpus(seed + 10)
			self.assertEqual(learn_bpe([corpus], merges=20).Merges, reference_learn(corpus, 20))


	def test_matches_reference_segmentation(self):
		corpus = random_corpus(0)
		model = learn_bpe([corpus], merges=30)
		self.assertGreater(len(model.Merges), 10)
		for sentence in random_corpus(1, 20):
			for word in sentence.split():
				self.assertEqual(model.segment_word(word), reference_segment(model.Merges, word))


	def test_encode_decode(self):
		model = learn_bpe([random_corpus(2)], merges=20)
		text = random_corpus(3, 1)[0]
		ids = model.encode(text)
		self.assertNotIn(UNK, ids)
		self.assertEqual(model.decode(ids), text)
		self.assertIn(UNK, model.encode('xyz'))


	def test_detokenize(self):
		self.assertEqual(detokenize_subwords(['a', 'b', 'c</w>', 'ab</w>']), 'abc ab')


	def test_save_load(self):
		model = learn_bpe([random_corpus(4)], merges=15)
		path = os.path.join(self.tmpdir, 'merges.txt')
		model.save(path)
		loaded = BpeModel.load(path, vocabulary=model.Vocabulary)
		self.assertEqual(loaded.Merges, model.Merges)
		text = random_corpus(5, 1)[0]
		self.assertEqual(loaded.encode(text), model.encode(text))

		with open(path, 'w') as f:
			f.write('a b\n')
		with self.assertRaises(CorpusError):
			BpeModel.load(path)


	def test_separate_and_balanced_tables(self):
		tables = learn_bpe([random_corpus(6), random_corpus(7, 10)], merges=5, shared=False)
		self.assertEqual(len(tables), 2)
		balanced = balance_corpora([list(range(10)), list(range(4))], seed=0)
		self.assertEqual([len(c) for c in balanced], [4, 4])
		self.assertEqual(balanced[0], sorted(balanced[0]))


	def test_invalid(self):
		with self.assertRaises(CorpusError):
			learn_bpe([[]], merges=5)
		with self.assertRaises(ValueError):
			learn_bpe([['a b']], merges=-1)
