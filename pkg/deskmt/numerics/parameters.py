import hashlib
import logging
import collections

import numpy as np

from ..exceptions import NumericsError
from .tensor import Tensor
from .rng import stream
from .rng import uniform_init
from .rng import fan_in_normal_init

#

L = logging.getLogger(__name__)

#


class Parameters(object):
	'''
	Ordered store of the trainable tensors of one model.

	Tensors are registered by local name (e.g. ``encoder.0.norm.gain``) and published under ``<prefix>:<local name>``,
	so gradient maps of several models never collide.
	Initial values depend only on `(seed, local name)`, never on creation order.
	'''

	Initializers = ('uniform', 'fan_in', 'zeros', 'ones')


	def __init__(self, prefix, seed):
		self.Prefix = prefix
		self.Seed = seed
		self.Tensors = collections.OrderedDict()
		self.Frozen = False


	def create(self, local_name, shape, init):
		shape = tuple(shape)
		existing = self.Tensors.get(local_name)
		if existing is not None:
			if existing.Data.shape != shape:
				raise NumericsError("Parameter '{}' exists with shape {}, requested {}".format(local_name, existing.Data.shape, shape))
			return existing

		if init == 'uniform':
			data = uniform_init(shape, stream(self.Seed, 'param', local_name))
		elif init == 'fan_in':
			data = fan_in_normal_init(shape, stream(self.Seed, 'param', local_name))
		elif init == 'zeros':
			data = np.zeros(shape)
		elif init == 'ones':
			data = np.ones(shape)
		else:
			raise NumericsError("Unknown initializer '{}'".format(init))

		tensor = Tensor(data, requires_grad=not self.Frozen, name=self.key(local_name))
		self.Tensors[local_name] = tensor
		return tensor


	def key(self, local_name):
		return '{}:{}'.format(self.Prefix, local_name)


	def __getitem__(self, local_name):
		return self.Tensors[local_name]


	def __contains__(self, local_name):
		return local_name in self.Tensors


	def __iter__(self):
		return iter(self.Tensors.values())


	def __len__(self):
		return len(self.Tensors)


	def items(self):
		return self.Tensors.items()


	def values(self):
		return list(self.Tensors.values())


	def count(self):
		'''Number of scalar parameters.'''
		return int(sum(t.Data.size for t in self.Tensors.values()))


	def freeze(self):
		self.Frozen = True
		for t in self.Tensors.values():
			t.RequiresGrad = False


	def unfreeze(self):
		self.Frozen = False
		for t in self.Tensors.values():
			t.RequiresGrad = True


	def clone(self, prefix=None, seed=None):
		other = Parameters(self.Prefix if prefix is None else prefix, self.Seed if seed is None else seed)
		other.Frozen = self.Frozen
		for local_name, t in self.Tensors.items():
			other.Tensors[local_name] = Tensor(t.Data.copy(), requires_grad=t.RequiresGrad, name=other.key(local_name))
		return other


	def state(self):
		'''
		Local name to array copy, in registration order.
		'''
		return collections.OrderedDict((k, t.Data.copy()) for k, t in self.Tensors.items())


	def load_state(self, state, strict=True):
		for local_name, data in state.items():
			t = self.Tensors.get(local_name)
			if t is None:
				if strict:
					raise NumericsError("Unexpected parameter '{}' in state".format(local_name))
				continue
			if t.Data.shape != data.shape:
				raise NumericsError("Shape mismatch for '{}': {} vs {}".format(local_name, t.Data.shape, data.shape))
			t.Data[...] = data
		if strict:
			missing = set(self.Tensors) - set(state)
			if len(missing) > 0:
				raise NumericsError("Missing parameter(s) in state: {}".format(', '.join(sorted(missing))))


	def digest(self):
		'''
		SHA-256 over names, shapes and float64 buffers.
		'''
		h = hashlib.sha256()
		for local_name, t in self.Tensors.items():
			h.update(local_name.encode('utf-8'))
			h.update(str(t.Data.shape).encode('ascii'))
			h.update(np.ascontiguousarray(t.Data, dtype='<f8').tobytes())
		return h.hexdigest()


	def __repr__(self):
		return "<Parameters {} tensors={} scalars={}>".format(self.Prefix, len(self.Tensors), self.count())
