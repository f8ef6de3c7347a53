import numpy as np

from ..exceptions import NumericsError


class Tensor(object):
	'''
	Dense float64 array that participates in a reverse-mode differentiation graph.

	:ivar Data: `numpy.ndarray` of dtype float64, row-major.
	:ivar RequiresGrad: `True` for trainable leaves and for every result computed from one.
	:ivar Grad: gradient buffer of the same shape, filled by `backward()` on leaves.
	:ivar Name: parameter name (the key of gradient maps), `None` for intermediate values.

	A result tensor records its parents and a backward function only when at least one parent requires a gradient,
	so inference with frozen parameters builds no graph at all.
	'''

	__slots__ = ('Data', 'RequiresGrad', 'Grad', 'Name', 'Op', 'Parents', 'BackwardFn')

	def __init__(self, data, requires_grad=False, name=None):
		self.Data = np.array(data, dtype=np.float64)
		self.RequiresGrad = requires_grad
		self.Grad = None
		self.Name = name
		self.Op = 'leaf'
		self.Parents = ()
		self.BackwardFn = None


	@classmethod
	def result(cls, data, op, parents, backward_fn):
		out = cls.__new__(cls)
		out.Data = np.asarray(data, dtype=np.float64)
		out.RequiresGrad = any(p.RequiresGrad for p in parents)
		out.Grad = None
		out.Name = None
		out.Op = op
		if out.RequiresGrad:
			out.Parents = tuple(parents)
			out.BackwardFn = backward_fn
		else:
			out.Parents = ()
			out.BackwardFn = None
		return out


	@property
	def shape(self):
		return self.Data.shape


	@property
	def size(self):
		return self.Data.size


	@property
	def T(self):
		return transpose(self)


	def item(self):
		if self.Data.size != 1:
			raise NumericsError("item() requires a single-element tensor, got shape {}".format(self.Data.shape))
		return float(self.Data.reshape(()))


	def numpy(self):
		return self.Data.copy()


	def detach(self):
		return Tensor(self.Data)


	def is_finite(self):
		return bool(np.all(np.isfinite(self.Data)))


	def sum(self, axis=None, keepdims=False):
		return tensor_sum(self, axis=axis, keepdims=keepdims)


	def mean(self, axis=None, keepdims=False):
		return tensor_mean(self, axis=axis, keepdims=keepdims)


	def __add__(self, other):
		return add(self, other)

	def __radd__(self, other):
		return add(other, self)

	def __sub__(self, other):
		return sub(self, other)

	def __rsub__(self, other):
		return sub(other, self)

	def __mul__(self, other):
		return mul(self, other)

	def __rmul__(self, other):
		return mul(other, self)

	def __truediv__(self, other):
		return div(self, other)

	def __neg__(self):
		return mul(self, -1.0)

	def __matmul__(self, other):
		return matmul(self, other)

	def __repr__(self):
		return "<Tensor {} shape={} op={}{}>".format(
			self.Name if self.Name is not None else '',
			self.Data.shape,
			self.Op,
			' grad' if self.RequiresGrad else ''
		)


def as_tensor(value):
	if isinstance(value, Tensor):
		return value
	return Tensor(value)


def unbroadcast(grad, shape):
	'''
	Sum `grad` down to `shape`, undoing numpy broadcasting.
	'''
	while grad.ndim > len(shape):
		grad = grad.sum(axis=0)
	for axis, dim in enumerate(shape):
		if dim == 1 and grad.shape[axis] != 1:
			grad = grad.sum(axis=axis, keepdims=True)
	return grad


def add(a, b):
	a = as_tensor(a)
	b = as_tensor(b)

	def backward(g):
		return unbroadcast(g, a.Data.shape), unbroadcast(g, b.Data.shape)

	return Tensor.result(a.Data + b.Data, 'add', (a, b), backward)


def sub(a, b):
	a = as_tensor(a)
	b = as_tensor(b)

	def backward(g):
		return unbroadcast(g, a.Data.shape), unbroadcast(-g, b.Data.shape)

	return Tensor.result(a.Data - b.Data, 'sub', (a, b), backward)


def mul(a, b):
	a = as_tensor(a)
	b = as_tensor(b)

	def backward(g):
		return unbroadcast(g * b.Data, a.Data.shape), unbroadcast(g * a.Data, b.Data.shape)

	return Tensor.result(a.Data * b.Data, 'mul', (a, b), backward)


def div(a, b):
	a = as_tensor(a)
	b = as_tensor(b)

	def backward(g):
		return (
			unbroadcast(g / b.Data, a.Data.shape),
			unbroadcast(-g * a.Data / (b.Data * b.Data), b.Data.shape),
		)

	return Tensor.result(a.Data / b.Data, 'div', (a, b), backward)


def matmul(a, b):
	a = as_tensor(a)
	b = as_tensor(b)
	if a.Data.ndim != 2 or b.Data.ndim != 2:
		raise NumericsError("matmul() supports 2-D operands only, got {} and {}".format(a.Data.shape, b.Data.shape))
	if a.Data.shape[1] != b.Data.shape[0]:
		raise NumericsError("matmul() shape mismatch {} @ {}".format(a.Data.shape, b.Data.shape))

	def backward(g):
		return g @ b.Data.T, a.Data.T @ g

	return Tensor.result(a.Data @ b.Data, 'matmul', (a, b), backward)


def transpose(a):
	a = as_tensor(a)

	def backward(g):
		return (g.T,)

	return Tensor.result(a.Data.T, 'transpose', (a,), backward)


def tensor_sum(a, axis=None, keepdims=False):
	a = as_tensor(a)
	shape = a.Data.shape

	def backward(g):
		if axis is not None and not keepdims:
			g = np.expand_dims(g, axis)
		return (np.broadcast_to(g, shape).copy(),)

	return Tensor.result(a.Data.sum(axis=axis, keepdims=keepdims), 'sum', (a,), backward)


def tensor_mean(a, axis=None, keepdims=False):
	a = as_tensor(a)
	if axis is None:
		n = a.Data.size
	else:
		n = a.Data.shape[axis]
	return tensor_sum(a, axis=axis, keepdims=keepdims) * (1.0 / n)
