import math

from ..exceptions import MaskError
from ..seq2seq.vocabulary import MASK


class MaskSpec(object):
	'''
	A masked fragment x[u..v] (1-based, inclusive) of a sentence of length m.

	The first and the last token are never masked, so 2 <= u < v <= m-1 and k = v-u+1 >= 2.
	`MaskSpec.full(m)` masks the whole sentence; it exists for the language-model reduction only.
	'''

	def __init__(self, u, v, m, full=False):
		self.U = int(u)
		self.V = int(v)
		self.M = int(m)
		self.Full = full
		if not full and not (2 <= self.U < self.V <= self.M - 1):
			raise MaskError("Invalid mask u={} v={} for sentence length {}".format(self.U, self.V, self.M))


	@property
	def k(self):
		return self.V - self.U + 1


	@classmethod
	def full(cls, m):
		return cls(1, m, m, full=True)


	def positions(self):
		'''0-based indices of masked positions.'''
		return range(self.U - 1, self.V)


	def __eq__(self, other):
		return isinstance(other, MaskSpec) and (self.U, self.V, self.M, self.Full) == (other.U, other.V, other.M, other.Full)


	def __repr__(self):
		return "<MaskSpec u={} v={} m={}>".format(self.U, self.V, self.M)


def mask_length(m, ratio):
	k = max(2, int(math.floor(ratio * m + 0.5)))
	return min(k, m - 2)


def sample_mask(m, ratio, rng):
	'''
	k = max(2, round(ratio*m)) clamped to m-2; start u uniform over 2..m-k.
	'''
	if m < 4:
		raise MaskError("Sentence length {} is too short for a fragment mask (needs 4)".format(m))
	if not (0.0 < ratio < 1.0):
		raise MaskError("Mask ratio must lie in (0, 1), got {}".format(ratio))
	k = mask_length(m, ratio)
	u = int(rng.integers(2, m - k + 1))
	return MaskSpec(u, u + k - 1, m)


def apply_mask(x, spec):
	'''
	Returns `(masked, fragment)`: MASK at positions u..v, the original tokens elsewhere; fragment = x[u..v].
	'''
	x = list(x)
	if len(x) != spec.M:
		raise MaskError("Mask for length {} applied to a sentence of length {}".format(spec.M, len(x)))
	masked = list(x)
	for i in spec.positions():
		masked[i] = MASK
	return masked, x[spec.U - 1:spec.V]


def reconstruct(masked, fragment, spec):
	if len(masked) != spec.M or len(fragment) != spec.k:
		raise MaskError("Masked sequence or fragment does not match {}".format(spec))
	out = list(masked)
	out[spec.U - 1:spec.V] = list(fragment)
	return out
