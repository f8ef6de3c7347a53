import unittest

from deskmt.exceptions import MaskError
from deskmt.mass import MaskSpec
from deskmt.mass import apply_mask
from deskmt.mass import mask_length
from deskmt.mass import reconstruct
from deskmt.mass import sample_mask
from deskmt.numerics import stream
from deskmt.seq2seq import MASK


class MaskingTestCase(unittest.TestCase):

	def test_sampled_masks_respect_bounds(self):
		rng = stream(0, 'masks')
		for m in range(4, 30):
			for ratio in (0.1, 0.5, 0.9):
				spec = sample_mask(m, ratio, rng)
				self.assertGreaterEqual(spec.U, 2)
				self.assertLessEqual(spec.V, m - 1)
				self.assertGreaterEqual(spec.k, 2)
				self.assertEqual(spec.k, mask_length(m, ratio))


	def test_mask_length(self):
		self.assertEqual(mask_length(10, 0.5), 5)
		self.assertEqual(mask_length(4, 0.5), 2)
		self.assertEqual(mask_length(10, 0.9), 8)
		self.assertEqual(mask_length(10, 0.05), 2)


	def test_apply_and_reconstruct(self):
		x = [7, 8, 9, 10, 11, 12]
		spec = MaskSpec(2, 4, 6)
		masked, fragment = apply_mask(x, spec)
		self.assertEqual(masked, [7, MASK, MASK, MASK, 11, 12])
		self.assertEqual(fragment, [8, 9, 10])
		self.assertEqual(reconstruct(masked, fragment, spec), x)


	def test_reconstruct_inverts_random_masks(self):
		rng = stream(1, 'masks')
		for m in range(4, 15):
			x = [int(t) for t in rng.integers(7, 40, size=m)]
			spec = sample_mask(m, 0.5, rng)
			self.assertEqual(reconstruct(*apply_mask(x, spec), spec), x)


	def test_full_mask(self):
		masked, fragment = apply_mask([7, 8, 9], MaskSpec.full(3))
		self.assertEqual(masked, [MASK] * 3)
		self.assertEqual(fragment, [7, 8, 9])


	def test_invalid(self):
		with self.assertRaises(MaskError):
			MaskSpec(1, 3, 6)
		with self.assertRaises(MaskError):
			MaskSpec(2, 6, 6)
		with self.assertRaises(MaskError):
			sample_mask(3, 0.5, stream(0))
		with self.assertRaises(MaskError):
			sample_mask(8, 1.0, stream(0))
		with self.assertRaises(MaskError):
			apply_mask([7, 8, 9, 10], MaskSpec(2, 3, 5))
		with self.assertRaises(MaskError):
			reconstruct([7, MASK, MASK, 10], [8], MaskSpec(2, 3, 4))
