import zlib

import numpy as np

#


def _key(value):
	if isinstance(value, (int, np.integer)) and value >= 0:
		return int(value)
	return zlib.crc32(str(value).encode('utf-8'))


def stream(seed, *keys):
	'''
	Counter-based random stream identified by `seed` and a path of keys.

	Two calls with the same arguments produce identical sequences; different key paths are independent.
	There is no global generator: every consumer derives its own stream, e.g. `stream(seed, 'noise', batch_index)`.
	'''
	sequence = np.random.SeedSequence(entropy=_key(seed), spawn_key=tuple(_key(k) for k in keys))
	return np.random.Generator(np.random.Philox(sequence))


def derive_seed(seed, *keys):
	'''
	An integer seed for a sub-component (e.g. the k-th model of a round).
	'''
	return int(stream(seed, 'derive', *keys).integers(0, 2 ** 31 - 1))


def uniform_init(shape, rng, scale=0.08):
	return rng.uniform(-scale, scale, size=shape)


def fan_in_normal_init(shape, rng):
	fan_in = shape[0] if len(shape) > 0 else 1
	return rng.normal(0.0, 1.0 / np.sqrt(fan_in), size=shape)
