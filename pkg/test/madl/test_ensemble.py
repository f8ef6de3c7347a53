import os
import shutil
import tempfile
import unittest

import numpy as np

from deskmt.exceptions import EnsembleError
from deskmt.exceptions import WeightsError
from deskmt.madl import AgentEnsemble
from deskmt.madl import combined_decode
from deskmt.madl import combined_logprob
from deskmt.madl import load_ensemble
from deskmt.madl import read_manifest
from deskmt.madl import validate_weights
from deskmt.madl import write_manifest
from deskmt.seq2seq import ModelConfig
from deskmt.seq2seq import beam_search
from deskmt.seq2seq import build_model
from deskmt.seq2seq import logprobs
from deskmt.seq2seq import save_model
from deskmt.seq2seq import transformer_genotype

from ..seq2seq.test_decoding import brute_force


def agent(seed, name, vocab_size=10):
	config = ModelConfig(config={
		'vocab_size': vocab_size, 'd_model': 8, 'n_heads': 2, 'd_ffn': 16, 'layers': 1, 'dropout': 0.0, 'max_len': 8,
	})
	return build_model(transformer_genotype(1), config, seed, name=name)


class WeightsTestCase(unittest.TestCase):

	def test_simplex(self):
		self.assertTrue(validate_weights([0.5, 0.3, 0.2]))
		self.assertTrue(validate_weights([1.0, 0.0]))
		self.assertTrue(validate_weights([1.0 / 3] * 3))


	def test_rejected(self):
		with self.assertRaises(WeightsError) as cm:
			validate_weights([0.5, 0.6])
		self.assertAlmostEqual(cm.exception.Sum, 1.1)
		with self.assertRaises(WeightsError):
			validate_weights([1.2, -0.2])
		with self.assertRaises(WeightsError):
			validate_weights([])
		with self.assertRaises(WeightsError):
			validate_weights([0.5, 0.5 + 1e-6])


class EnsembleTestCase(unittest.TestCase):

	def test_single_agent_is_the_model(self):
		model = agent(0, 'f0')
		ensemble = AgentEnsemble([model])
		np.testing.assert_array_equal(combined_logprob(ensemble, [7, 8], [9]), logprobs(model, [7, 8], [9]))
		for source in ([7, 8, 9], [9, 9]):
			a = combined_decode(ensemble, source, beam_size=3).best()
			b = beam_search(model, source, beam_size=3).best()
			self.assertEqual(a.Tokens, b.Tokens)
			self.assertEqual(a.Score, b.Score)


	def test_weighted_sum(self):
		models = [agent(0, 'f0'), agent(1, 'f1')]
		ensemble = AgentEnsemble(models, [0.25, 0.75])
		expected = 0.25 * logprobs(models[0], [7], [8]) + 0.75 * logprobs(models[1], [7], [8])
		np.testing.assert_allclose(combined_logprob(ensemble, [7], [8]), expected, atol=1e-12)


	def test_combined_decode_matches_brute_force(self):
		for seed in range(50):
			models = [agent(2 * seed, 'f0', vocab_size=9), agent(2 * seed + 1, 'f1', vocab_size=9)]
			ensemble = AgentEnsemble(models, [0.3, 0.7], freeze=False)
			source = [8, 7][:1 + seed % 2]

			def step(prefixes):
				return np.array([combined_logprob(ensemble, source, p[1:]) for p in prefixes])

			hyps = combined_decode(ensemble, source, beam_size=16, max_len=3)[0].Hypotheses
			expected = brute_force(3, step=step, vocab_size=9)
			self.assertEqual(hyps[0].Tokens, expected[0][1])
			np.testing.assert_allclose([h.Score for h in hyps], [s for s, _ in expected], atol=1e-10)


	def test_zero_weight_member_is_ignored(self):
		models = [agent(0, 'f0'), agent(1, 'f1')]
		ensemble = AgentEnsemble(models, [1.0, 0.0])
		np.testing.assert_array_equal(combined_logprob(ensemble, [7], [8]), logprobs(models[0], [7], [8]))


	def test_members_after_the_first_are_frozen(self):
		models = [agent(0, 'f0'), agent(1, 'f1'), agent(2, 'f2')]
		AgentEnsemble(models)
		self.assertTrue(all(t.RequiresGrad for t in models[0].parameters()))
		self.assertFalse(any(t.RequiresGrad for t in models[1].parameters()))


	def test_invalid_ensembles(self):
		with self.assertRaises(EnsembleError):
			AgentEnsemble([])
		with self.assertRaises(EnsembleError):
			AgentEnsemble([agent(0, 'a')], [0.5, 0.5])
		with self.assertRaises(EnsembleError):
			AgentEnsemble([agent(0, 'a'), agent(1, 'b', vocab_size=12)])
		with self.assertRaises(WeightsError):
			AgentEnsemble([agent(0, 'a'), agent(1, 'b')], [0.7, 0.7])


class ManifestTestCase(unittest.TestCase):

	def setUp(self):
		self.tmpdir = tempfile.mkdtemp()


	def tearDown(self):
		shutil.rmtree(self.tmpdir)


	def test_roundtrip_with_relative_paths(self):
		for i in range(2):
			save_model(os.path.join(self.tmpdir, 'agent{}.ckpt'.format(i)), agent(i, 'a{}'.format(i)))
		path = os.path.join(self.tmpdir, 'ensemble.ini')
		write_manifest(path, [('agent0.ckpt', 0.6), ('agent1.ckpt', 0.4)])
		members = read_manifest(path)
		self.assertEqual([w for _, w in members], [0.6, 0.4])
		self.assertEqual(members[0][0], os.path.join(self.tmpdir, 'agent0.ckpt'))

		ensemble = load_ensemble(path)
		self.assertEqual(len(ensemble), 2)
		self.assertEqual(ensemble.Weights, [0.6, 0.4])


	def test_bad_manifest(self):
		path = os.path.join(self.tmpdir, 'ensemble.ini')
		with open(path, 'w') as f:
			f.write('[agent:0]\npath=a.ckpt\nweight=0.5\n[agent:1]\npath=b.ckpt\nweight=0.2\n')
		with self.assertRaises(WeightsError):
			read_manifest(path)
		with open(path, 'w') as f:
			f.write('[agent:x]\npath=a.ckpt\nweight=1.0\n')
		with self.assertRaises(EnsembleError):
			read_manifest(path)
		with self.assertRaises(EnsembleError):
			read_manifest(os.path.join(self.tmpdir, 'missing.ini'))
