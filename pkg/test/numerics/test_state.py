import os
import shutil
import tempfile
import unittest

import numpy as np

from deskmt.exceptions import CheckpointError
from deskmt.exceptions import NumericsError
from deskmt.numerics import Adam
from deskmt.numerics import Parameters
from deskmt.numerics import Tensor
from deskmt.numerics import clip_by_global_norm
from deskmt.numerics import derive_seed
from deskmt.numerics import format_metadata
from deskmt.numerics import grad
from deskmt.numerics import load_checkpoint
from deskmt.numerics import parse_metadata
from deskmt.numerics import save_checkpoint
from deskmt.numerics import stream


class StreamTestCase(unittest.TestCase):

	def test_same_keys_same_sequence(self):
		a = stream(7, 'noise', 3).random(5)
		b = stream(7, 'noise', 3).random(5)
		np.testing.assert_array_equal(a, b)


	def test_different_keys_differ(self):
		a = stream(7, 'noise', 3).random(5)
		b = stream(7, 'noise', 4).random(5)
		c = stream(8, 'noise', 3).random(5)
		self.assertFalse(np.array_equal(a, b))
		self.assertFalse(np.array_equal(a, c))


	def test_derive_seed_is_stable(self):
		self.assertEqual(derive_seed(0, 'bt', 1), derive_seed(0, 'bt', 1))
		self.assertNotEqual(derive_seed(0, 'bt', 1), derive_seed(0, 'bt', 2))
		self.assertGreaterEqual(derive_seed(3, ('tuple', 'key')), 0)


class ParametersTestCase(unittest.TestCase):

	def test_initial_values_independent_of_order(self):
		p = Parameters('m', 5)
		p.create('a', (2, 3), 'uniform')
		p.create('b', (3,), 'fan_in')
		q = Parameters('m', 5)
		q.create('b', (3,), 'fan_in')
		q.create('a', (2, 3), 'uniform')
		np.testing.assert_array_equal(p['a'].Data, q['a'].Data)
		np.testing.assert_array_equal(p['b'].Data, q['b'].Data)


	def test_names_are_prefixed(self):
		p = Parameters('forward0', 0)
		t = p.create('embed', (2, 2), 'zeros')
		self.assertEqual(t.Name, 'forward0:embed')


	def test_create_existing_with_other_shape(self):
		p = Parameters('m', 0)
		p.create('a', (2,), 'zeros')
		self.assertIs(p.create('a', (2,), 'ones'), p['a'])
		with self.assertRaises(NumericsError):
			p.create('a', (3,), 'zeros')


	def test_freeze_and_digest(self):
		p = Parameters('m', 0)
		p.create('a', (2, 2), 'uniform')
		digest = p.digest()
		p.freeze()
		self.assertFalse(p['a'].RequiresGrad)
		self.assertEqual(p.digest(), digest)
		p['a'].Data[0, 0] += 1.0
		self.assertNotEqual(p.digest(), digest)


	def test_clone_is_deep(self):
		p = Parameters('m', 0)
		p.create('a', (2,), 'ones')
		q = p.clone(prefix='n')
		q['a'].Data[0] = 5.0
		self.assertEqual(p['a'].Data[0], 1.0)
		self.assertEqual(q['a'].Name, 'n:a')


	def test_load_state_strict(self):
		p = Parameters('m', 0)
		p.create('a', (2,), 'ones')
		with self.assertRaises(NumericsError):
			p.load_state({'b': np.zeros(2)})
		with self.assertRaises(NumericsError):
			p.load_state({})
		p.load_state({'a': np.zeros(2)})
		np.testing.assert_array_equal(p['a'].Data, np.zeros(2))


class OptimizerTestCase(unittest.TestCase):

	def test_adam_minimizes_quadratic(self):
		x = Tensor([3.0, -2.0], requires_grad=True, name='x')
		opt = Adam([x], lr=0.1)
		for _ in range(300):
			opt.step(grad((x * x).sum()))
		self.assertLess(float(np.abs(x.Data).max()), 0.3)


	def test_adam_skips_frozen(self):
		x = Tensor([1.0], requires_grad=False, name='x')
		Adam([x], lr=0.1).step({'x': np.ones(1)})
		self.assertEqual(float(x.Data[0]), 1.0)


	def test_global_norm_clipping(self):
		grads = {'a': np.array([3.0]), 'b': np.array([4.0])}
		norm = clip_by_global_norm(grads, 1.0)
		self.assertAlmostEqual(norm, 5.0)
		self.assertAlmostEqual(float(np.hypot(grads['a'][0], grads['b'][0])), 1.0)


class CheckpointTestCase(unittest.TestCase):

	def setUp(self):
		self.Directory = tempfile.mkdtemp()
		self.Path = os.path.join(self.Directory, 'model.ckpt')


	def tearDown(self):
		shutil.rmtree(self.Directory)


	def test_bit_exact_round_trip(self):
		tensors = {'a': stream(0).normal(size=(3, 4)), 'scalar': np.array(1.0 / 3.0)}
		save_checkpoint(self.Path, tensors, metadata='[role]\ntranslation\n')
		loaded, metadata = load_checkpoint(self.Path)
		self.assertEqual(list(loaded), ['a', 'scalar'])
		self.assertEqual(loaded['a'].tobytes(), tensors['a'].tobytes())
		self.assertEqual(float(loaded['scalar']), 1.0 / 3.0)
		self.assertEqual(parse_metadata(metadata)['role'], 'translation')


	def test_bad_magic(self):
		with open(self.Path, 'wb') as f:
			f.write(b'NOTACKPT' + b'\x00' * 16)
		with self.assertRaises(CheckpointError):
			load_checkpoint(self.Path)


	def test_truncated(self):
		save_checkpoint(self.Path, {'a': np.ones((4, 4))})
		with open(self.Path, 'rb') as f:
			data = f.read()
		with open(self.Path, 'wb') as f:
			f.write(data[:-5])
		with self.assertRaises(CheckpointError):
			load_checkpoint(self.Path)


	def test_missing_file(self):
		with self.assertRaises(CheckpointError):
			load_checkpoint(os.path.join(self.Directory, 'absent.ckpt'))


	def test_metadata_sections(self):
		text = format_metadata({'genotype': 'e0: a\ne1: b', 'role': 'lm'})
		self.assertEqual(parse_metadata(text), {'genotype': 'e0: a\ne1: b', 'role': 'lm'})
