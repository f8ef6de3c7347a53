import os
import shutil
import tempfile
import unittest

import numpy as np

from deskmt.exceptions import CheckpointError
from deskmt.exceptions import CorpusError
from deskmt.numerics import stream
from deskmt.seq2seq import ModelConfig
from deskmt.seq2seq import TrainConfig
from deskmt.seq2seq import Trainer
from deskmt.seq2seq import build_model
from deskmt.seq2seq import iterate_batches
from deskmt.seq2seq import load_model
from deskmt.seq2seq import random_genotype
from deskmt.seq2seq import save_model
from deskmt.seq2seq import sequence_nll
from deskmt.seq2seq import transformer_genotype


def config():
	return ModelConfig(config={
		'vocab_size': 12, 'd_model': 16, 'n_heads': 2, 'd_ffn': 32, 'layers': 1, 'dropout': 0.0, 'max_len': 10,
	})


def copy_pairs(n, seed=0):
	rng = stream(seed, 'copy')
	pairs = []
	for _ in range(n):
		x = [int(t) for t in rng.integers(7, 12, size=int(rng.integers(2, 5)))]
		pairs.append((x, list(x)))
	return pairs


class TrainerTestCase(unittest.TestCase):

	def test_loss_decreases(self):
		model = build_model(transformer_genotype(1), config(), 0)
		pairs = copy_pairs(32)
		before = float(sequence_nll(model, pairs).Data)
		trainer = Trainer(model, TrainConfig(config={'lr': 1e-2, 'batch_size': 8, 'steps': 60, 'log_every': 0}), seed=0)
		self.assertEqual(trainer.train(pairs), 60)
		after = float(sequence_nll(model, pairs).Data)
		self.assertLess(after, before)


	def test_training_is_deterministic(self):
		digests = []
		for _ in range(2):
			model = build_model(transformer_genotype(1), config().replace(dropout=0.1), 4)
			trainer = Trainer(model, TrainConfig(config={'batch_size': 4, 'log_every': 0}), seed=9)
			trainer.train(copy_pairs(10), steps=5)
			digests.append(model.Parameters.digest())
		self.assertEqual(digests[0], digests[1])


	def test_train_epoch_counts_batches(self):
		model = build_model(transformer_genotype(1), config(), 0)
		trainer = Trainer(model, TrainConfig(config={'batch_size': 4, 'log_every': 0}), seed=0)
		self.assertEqual(trainer.train_epoch(copy_pairs(10)), 3)
		self.assertEqual(trainer.EpochNo, 1)


	def test_early_stop(self):
		model = build_model(transformer_genotype(1), config(), 0)
		trainer = Trainer(model, TrainConfig(config={'batch_size': 4, 'eval_every': 2, 'log_every': 0}), seed=0)
		taken = trainer.train(copy_pairs(10), steps=20, evaluate=lambda: 1.0, stop_when=lambda v: v > 0.5)
		self.assertEqual(taken, 2)


	def test_empty_corpus(self):
		model = build_model(transformer_genotype(1), config(), 0)
		with self.assertRaises(CorpusError):
			Trainer(model).train([])
		with self.assertRaises(CorpusError):
			sequence_nll(model, [])


	def test_batches_cover_epoch(self):
		pairs = copy_pairs(10)
		batches = list(iterate_batches(pairs, 3, 0, 0))
		self.assertEqual([len(b) for b in batches], [3, 3, 3, 1])
		self.assertEqual(sorted(map(str, sum(batches, []))), sorted(map(str, pairs)))
		self.assertEqual(batches, list(iterate_batches(pairs, 3, 0, 0)))


class PersistTestCase(unittest.TestCase):

	def setUp(self):
		self.tmpdir = tempfile.mkdtemp()


	def tearDown(self):
		shutil.rmtree(self.tmpdir)


	def test_save_load_reproduces_outputs(self):
		model = build_model(random_genotype(1, stream(1, 'g')), config(), 3, name='fwd')
		model.Reversed = True
		path = os.path.join(self.tmpdir, 'model.ckpt')
		save_model(path, model, role='translation')
		loaded = load_model(path, expected_role='translation')
		self.assertEqual(loaded.Genotype, model.Genotype)
		self.assertEqual(loaded.Name, 'fwd')
		self.assertTrue(loaded.Reversed)
		self.assertEqual(loaded.Parameters.digest(), model.Parameters.digest())
		pairs = copy_pairs(3)
		np.testing.assert_array_equal(sequence_nll(loaded, pairs).Data, sequence_nll(model, pairs).Data)


	def test_role_mismatch(self):
		model = build_model(transformer_genotype(1), config(), 0)
		path = os.path.join(self.tmpdir, 'lm.ckpt')
		save_model(path, model, role='lm')
		with self.assertRaises(CheckpointError):
			load_model(path, expected_role='translation')
