import itertools
import unittest

import numpy as np

from deskmt.exceptions import DecodeError
from deskmt.seq2seq import BOS
from deskmt.seq2seq import DecodeConfig
from deskmt.seq2seq import EOS
from deskmt.seq2seq import ModelConfig
from deskmt.seq2seq import NBestList
from deskmt.seq2seq import beam_decode
from deskmt.seq2seq import beam_search
from deskmt.seq2seq import build_model
from deskmt.seq2seq import generable_ids
from deskmt.seq2seq import greedy_decode
from deskmt.seq2seq import logprobs
from deskmt.seq2seq import score_sequence
from deskmt.seq2seq import transformer_genotype
from deskmt.seq2seq import translate

VOCAB = 9


def table_step(prefixes):
	'''
	Fixed pseudo-random next-token distribution per prefix.
	'''
	out = []
	for p in prefixes:
		assert p[0] == BOS
		key = sum((t + 1) * 31 ** i for i, t in enumerate(p))
		x = np.random.default_rng(key).normal(size=VOCAB) * 2.0
		out.append(x - np.log(np.exp(x).sum()))
	return np.array(out)


def brute_force(max_len, length_penalty=1.0, step=table_step, vocab_size=VOCAB):
	'''
	Every finished hypothesis plus every unfinished one of length `max_len`, scored the way the beam scores them.
	'''
	content = [t for t in generable_ids(vocab_size) if t != EOS]
	results = []
	for n in range(max_len + 1):
		for tokens in itertools.product(content, repeat=n):
			lp = 0.0
			prefix = [BOS]
			for t in tokens:
				lp += step([prefix])[0][t]
				prefix = prefix + [t]
			if n < max_len:
				total = lp + step([prefix])[0][EOS]
				results.append((total / (n + 1) ** length_penalty, list(tokens)))
			else:
				results.append((lp / n ** length_penalty, list(tokens)))
	return sorted(results, key=lambda r: -r[0])


def model_step(model, source):
	return lambda prefixes: np.array([logprobs(model, source, p[1:]) for p in prefixes])


def tiny_model(seed=0, vocab_size=10):
	config = ModelConfig(config={
		'vocab_size': vocab_size, 'd_model': 8, 'n_heads': 2, 'd_ffn': 16, 'layers': 1, 'dropout': 0.0, 'max_len': 8,
	})
	return build_model(transformer_genotype(1), config, seed)


class BeamDecodeTestCase(unittest.TestCase):

	def test_exhaustive_beam_matches_brute_force(self):
		for penalty in (0.0, 1.0):
			hyps = beam_decode(table_step, VOCAB, beam_size=100, length_penalty=penalty, max_len=3)
			expected = brute_force(3, penalty)
			self.assertEqual(len(hyps), len(expected))
			self.assertEqual(hyps[0].Tokens, expected[0][1])
			np.testing.assert_allclose([h.Score for h in hyps], [s for s, _ in expected], atol=1e-12)


	def test_beam_never_emits_special_ids(self):
		hyps = beam_decode(table_step, VOCAB, beam_size=4, max_len=5)
		for h in hyps:
			self.assertTrue(all(t >= 7 for t in h.Tokens))


	def test_scores_are_sorted(self):
		hyps = beam_decode(table_step, VOCAB, beam_size=4, max_len=6)
		scores = [h.Score for h in hyps]
		self.assertEqual(scores, sorted(scores, reverse=True))
		self.assertLessEqual(len(hyps), 4)


	def test_invalid_beam(self):
		with self.assertRaises(DecodeError):
			beam_decode(table_step, VOCAB, beam_size=0)
		with self.assertRaises(DecodeError):
			DecodeConfig(config={'beam_size': 0})


class ModelDecodingTestCase(unittest.TestCase):

	def test_beam_search_matches_brute_force_on_random_models(self):
		for seed in range(50):
			model = tiny_model(seed, vocab_size=9)
			source = [7, 8][:1 + seed % 2]
			hyps = beam_search(model, source, beam_size=16, max_len=3)[0].Hypotheses
			expected = brute_force(3, step=model_step(model, source), vocab_size=9)
			self.assertEqual(hyps[0].Tokens, expected[0][1])
			np.testing.assert_allclose([h.Score for h in hyps], [s for s, _ in expected], atol=1e-10)


	def test_beam_of_one_is_greedy(self):
		model = tiny_model()
		for source in ([7, 8, 9], [9], [8, 8, 7, 9]):
			greedy = greedy_decode(model, source)
			beam = beam_search(model, source, beam_size=1).best()
			self.assertEqual(beam.Tokens, greedy.Tokens)
			self.assertAlmostEqual(beam.LogProb, greedy.LogProb, places=10)


	def test_logprob_matches_teacher_forcing(self):
		model = tiny_model(2)
		hyp = beam_search(model, [7, 8], beam_size=3).best()
		if hyp.Finished and len(hyp.Tokens) > 0:
			self.assertAlmostEqual(score_sequence(model, [7, 8], hyp.Tokens), hyp.LogProb, places=8)


	def test_logprobs_is_a_distribution(self):
		model = tiny_model()
		lp = logprobs(model, [7, 8], [9])
		self.assertEqual(lp.shape, (10,))
		self.assertAlmostEqual(float(np.exp(lp).sum()), 1.0, places=10)


	def test_nbest_list(self):
		model = tiny_model()
		nbest = NBestList()
		nbest.extend(beam_search(model, [7], beam_size=2)).extend(beam_search(model, [8], beam_size=2))
		self.assertEqual(len(nbest), 2)
		self.assertEqual(nbest[1].Source, [8])
		with self.assertRaises(DecodeError):
			nbest.Hypotheses


	def test_translate_reverses_right_to_left_output(self):
		model = tiny_model()
		forward = translate(model, [[7, 8, 9]])
		model.Reversed = True
		self.assertEqual(translate(model, [[7, 8, 9]]), [forward[0][::-1]])


	def test_empty_target_cannot_be_scored(self):
		with self.assertRaises(DecodeError):
			score_sequence(tiny_model(), [7], [])
