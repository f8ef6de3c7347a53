import os
import shutil
import tempfile
import unittest

import numpy as np

from deskmt.exceptions import CheckpointError
from deskmt.exceptions import NumericsError
from deskmt.numerics import stream
from deskmt.sca import CausalLM
from deskmt.sca import ScaConfig
from deskmt.sca import ScaLoss
from deskmt.sca import augment_rows
from deskmt.sca import lm_distribution
from deskmt.sca import lm_nll
from deskmt.sca import load_lm
from deskmt.sca import save_lm
from deskmt.sca import sca_loss
from deskmt.sca import soft_embedding
from deskmt.sca import train_lm
from deskmt.seq2seq import ModelConfig
from deskmt.seq2seq import TrainConfig
from deskmt.seq2seq import build_model
from deskmt.seq2seq import save_model
from deskmt.seq2seq import sequence_nll
from deskmt.seq2seq import transformer_genotype


def config(vocab_size=12):
	return ModelConfig(config={
		'vocab_size': vocab_size, 'd_model': 8, 'n_heads': 2, 'd_ffn': 16, 'layers': 1, 'dropout': 0.0, 'max_len': 10,
	})


PAIRS = [([7, 8, 9], [9, 8, 7]), ([10, 11, 7, 8], [8, 7, 11, 10])]


class AugmentTestCase(unittest.TestCase):

	def setUp(self):
		self.model = build_model(transformer_genotype(1), config(), 0)
		self.lm = CausalLM(config(), 1, name='lm')


	def test_gamma_zero_is_the_baseline(self):
		cfg = ScaConfig(config={'gamma': 0.0, 'sides': 'source target'})
		loss = sca_loss(self.model, PAIRS, self.lm, cfg, rng=stream(0))
		self.assertEqual(float(loss.Data), float(sequence_nll(self.model, PAIRS).Data))


	def test_gamma_one_replaces_every_word(self):
		rows = augment_rows([x for x, _ in PAIRS], self.lm, self.model.SourceEmbedding, 1.0, stream(0))
		self.assertEqual(int(rows.Replaced.sum()), 7)
		self.assertFalse(rows.Replaced[3])
		dist = lm_distribution(self.lm, [])
		np.testing.assert_allclose(rows.Embedded.Data[0], dist @ self.model.SourceEmbedding.Data, atol=1e-12)


	def test_target_side_keeps_bos(self):
		rows = augment_rows([y for _, y in PAIRS], self.lm, self.model.TargetEmbedding, 1.0, stream(0), side='target')
		self.assertFalse(rows.Replaced[0])
		self.assertTrue(rows.Replaced[1])


	def test_soft_embedding_of_one_hot_is_the_row(self):
		E = self.model.SourceEmbedding.Data
		one_hot = np.zeros(E.shape[0])
		one_hot[9] = 1.0
		np.testing.assert_allclose(soft_embedding(one_hot, E).Data, E[9])
		with self.assertRaises(NumericsError):
			soft_embedding(np.ones(3) / 3, E)


	def test_vocabulary_mismatch(self):
		lm = CausalLM(config(vocab_size=14), 1)
		with self.assertRaises(NumericsError):
			augment_rows([[7, 8]], lm, self.model.SourceEmbedding, 1.0, stream(0))


	def test_loss_function_counts_replacements(self):
		loss_fn = ScaLoss(self.lm, ScaConfig(config={'gamma': 0.5}), seed=3)
		train = float(loss_fn(self.model, PAIRS, training=True, rng=stream(0)).Data)
		self.assertTrue(np.isfinite(train))
		self.assertEqual(loss_fn.Positions, 9)
		self.assertEqual(float(loss_fn(self.model, PAIRS).Data), float(sequence_nll(self.model, PAIRS).Data))


	def test_invalid_config(self):
		with self.assertRaises(ValueError):
			ScaConfig(config={'gamma': 1.5})
		with self.assertRaises(ValueError):
			ScaConfig(config={'sides': 'both'})
		with self.assertRaises(ValueError):
			ScaConfig(config={'temperature': 0.0})


class LanguageModelTestCase(unittest.TestCase):

	def setUp(self):
		self.tmpdir = tempfile.mkdtemp()


	def tearDown(self):
		shutil.rmtree(self.tmpdir)


	def test_distributions_are_causal(self):
		lm = CausalLM(config(), 2)
		sentence = [7, 8, 9, 10]
		dists = lm.distributions(sentence)
		self.assertEqual(dists.shape, (5, 12))
		np.testing.assert_allclose(dists.sum(axis=1), 1.0)
		for t in range(len(sentence) + 1):
			np.testing.assert_allclose(dists[t], lm_distribution(lm, sentence[:t]), atol=1e-10)


	def test_training_lowers_nll_and_freezes(self):
		corpus = [[7, 8, 9, 10], [7, 8, 9], [7, 8, 9, 10, 11]] * 4
		before = float(lm_nll(CausalLM(config(), 0, name='lm'), corpus).Data)
		lm = train_lm(corpus, config(), TrainConfig(config={'lr': 1e-2, 'batch_size': 4, 'log_every': 0}), seed=0, steps=40)
		self.assertLess(float(lm_nll(lm, corpus).Data), before)
		self.assertFalse(any(t.RequiresGrad for t in lm.parameters()))


	def test_save_load(self):
		lm = CausalLM(config(), 4, name='lm')
		path = os.path.join(self.tmpdir, 'lm.ckpt')
		save_lm(path, lm)
		loaded = load_lm(path)
		np.testing.assert_array_equal(loaded.distributions([7, 8]), lm.distributions([7, 8]))

		other = os.path.join(self.tmpdir, 'model.ckpt')
		save_model(other, build_model(transformer_genotype(1), config(), 0))
		with self.assertRaises(CheckpointError):
			load_lm(other)
