import math
import unittest

from deskmt.exceptions import RerankError
from deskmt.numerics import stream
from deskmt.rerank import bleu_details
from deskmt.rerank import corpus_bleu


def manual_bleu(hypotheses, references):
	'''
	Textbook corpus BLEU with clipped counts, orders without any hypothesis n-gram left out.
	'''
	logs = []
	for n in range(1, 5):
		matched = 0
		total = 0
		for hyp, ref in zip(hypotheses, references):
			grams = [tuple(hyp[i:i + n]) for i in range(len(hyp) - n + 1)]
			ref_grams = [tuple(ref[i:i + n]) for i in range(len(ref) - n + 1)]
			total += len(grams)
			for g in set(grams):
				matched += min(grams.count(g), ref_grams.count(g))
		if total == 0:
			continue
		if matched == 0:
			return 0.0
		logs.append(math.log(matched / total))
	c = sum(len(h) for h in hypotheses)
	r = sum(len(x) for x in references)
	if c == 0 or len(logs) == 0:
		return 0.0
	bp = 1.0 if c > r else math.exp(1.0 - r / c)
	return 100.0 * bp * math.exp(sum(logs) / len(logs))


class BleuTestCase(unittest.TestCase):

	def test_hand_computed(self):
		# Precisions 5/6, 3/5, 2/4, 1/3; equal lengths
		result = bleu_details(['the cat sat on the mat'], ['the cat sat on a mat'])
		self.assertAlmostEqual(result.Score, 100.0 * (1.0 / 12.0) ** 0.25, places=9)
		self.assertEqual(result.Matches, [5, 3, 2, 1])
		self.assertEqual(result.Totals, [6, 5, 4, 3])
		self.assertEqual(result.BrevityPenalty, 1.0)


	def test_random_corpora_match_manual_computation(self):
		for seed in range(20):
			rng = stream(seed, 'bleu-test')
			hyps = []
			refs = []
			for _ in range(int(rng.integers(1, 6))):
				hyps.append([int(t) for t in rng.integers(7, 11, size=int(rng.integers(0, 9)))])
				refs.append([int(t) for t in rng.integers(7, 11, size=int(rng.integers(1, 9)))])
			self.assertAlmostEqual(corpus_bleu(hyps, refs), manual_bleu(hyps, refs), delta=0.01)


	def test_token_lists(self):
		self.assertAlmostEqual(corpus_bleu([[7, 8, 9, 10]], [[7, 8, 9, 10]]), 100.0)


	def test_brevity_penalty(self):
		result = bleu_details(['a b c d'], ['a b c d e f g h'])
		self.assertAlmostEqual(result.BrevityPenalty, math.exp(-1.0))
		self.assertAlmostEqual(result.Score, 100.0 * math.exp(-1.0))


	def test_short_sentences_skip_missing_orders(self):
		self.assertAlmostEqual(corpus_bleu(['a b'], ['a b']), 100.0)
		self.assertEqual(corpus_bleu(['x y'], ['a b']), 0.0)
		self.assertEqual(corpus_bleu([''], ['a b']), 0.0)


	def test_smoothing(self):
		self.assertEqual(corpus_bleu(['a x'], ['a b']), 0.0)
		self.assertAlmostEqual(corpus_bleu(['a x'], ['a b'], smooth=True), 100.0 * (1.0 / 3.0) ** 0.25)


	def test_invalid(self):
		with self.assertRaises(RerankError):
			corpus_bleu(['a'], ['a', 'b'])
		with self.assertRaises(RerankError):
			corpus_bleu([], [])
