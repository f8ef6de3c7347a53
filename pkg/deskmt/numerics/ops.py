import numpy as np

from ..exceptions import NumericsError
from .tensor import Tensor, as_tensor

#

# Additive mask value for blocked attention positions. Finite, so fully blocked rows stay NaN-free.
NEG_INF = -1e30


def relu(x):
	x = as_tensor(x)
	active = x.Data > 0

	def backward(g):
		return (g * active,)

	return Tensor.result(x.Data * active, 'relu', (x,), backward)


def tanh(x):
	x = as_tensor(x)
	y = np.tanh(x.Data)

	def backward(g):
		return (g * (1.0 - y * y),)

	return Tensor.result(y, 'tanh', (x,), backward)


def sigmoid(x):
	x = as_tensor(x)
	y = 1.0 / (1.0 + np.exp(-x.Data))

	def backward(g):
		return (g * y * (1.0 - y),)

	return Tensor.result(y, 'sigmoid', (x,), backward)


def exp(x):
	x = as_tensor(x)
	y = np.exp(x.Data)

	def backward(g):
		return (g * y,)

	return Tensor.result(y, 'exp', (x,), backward)


def log(x):
	x = as_tensor(x)

	def backward(g):
		return (g / x.Data,)

	with np.errstate(divide='ignore', invalid='ignore'):
		y = np.log(x.Data)
	return Tensor.result(y, 'log', (x,), backward)


def activation(name):
	try:
		return {'relu': relu, 'tanh': tanh, 'sigmoid': sigmoid}[name]
	except KeyError:
		raise NumericsError("Unknown activation '{}'".format(name))


def _softmax_data(data, axis):
	shifted = data - data.max(axis=axis, keepdims=True)
	e = np.exp(shifted)
	return e / e.sum(axis=axis, keepdims=True)


def softmax(x, mask=None, axis=-1):
	'''
	Softmax along `axis`; `mask` is an additive constant array (0 or `NEG_INF`) broadcast against `x`.
	'''
	x = as_tensor(x)
	data = x.Data if mask is None else x.Data + mask
	y = _softmax_data(data, axis)

	def backward(g):
		return (y * (g - (g * y).sum(axis=axis, keepdims=True)),)

	return Tensor.result(y, 'softmax', (x,), backward)


def log_softmax(x, axis=-1):
	x = as_tensor(x)
	shifted = x.Data - x.Data.max(axis=axis, keepdims=True)
	lse = np.log(np.exp(shifted).sum(axis=axis, keepdims=True))
	y = shifted - lse

	def backward(g):
		return (g - np.exp(y) * g.sum(axis=axis, keepdims=True),)

	return Tensor.result(y, 'log_softmax', (x,), backward)


def layer_norm(x, gain, bias, eps=1e-5):
	'''
	Normalization over the last axis followed by an elementwise affine map.
	'''
	x = as_tensor(x)
	n = x.Data.shape[-1]
	mu = x.Data.mean(axis=-1, keepdims=True)
	centered = x.Data - mu
	inv_std = 1.0 / np.sqrt((centered * centered).mean(axis=-1, keepdims=True) + eps)
	xhat = centered * inv_std

	def backward(g):
		gxhat = g * gain.Data
		gx = inv_std / n * (
			n * gxhat
			- gxhat.sum(axis=-1, keepdims=True)
			- xhat * (gxhat * xhat).sum(axis=-1, keepdims=True)
		)
		rows = tuple(range(g.ndim - 1))
		return gx, (g * xhat).sum(axis=rows), g.sum(axis=rows)

	return Tensor.result(xhat * gain.Data + bias.Data, 'layer_norm', (x, gain, bias), backward)


def take_rows(x, index):
	'''
	Gather rows of a 2-D tensor; index -1 yields a zero row (used for shifted and padded positions).
	'''
	x = as_tensor(x)
	index = np.asarray(index, dtype=np.int64)
	if index.size > 0 and (index.max() >= x.Data.shape[0] or index.min() < -1):
		raise NumericsError("take_rows() index out of range for {} rows".format(x.Data.shape[0]))
	valid = index >= 0
	out = np.zeros((index.shape[0],) + x.Data.shape[1:])
	out[valid] = x.Data[index[valid]]

	def backward(g):
		gx = np.zeros_like(x.Data)
		np.add.at(gx, index[valid], g[valid])
		return (gx,)

	return Tensor.result(out, 'take_rows', (x,), backward)


def concat_rows(tensors):
	return _concat(tensors, 0, 'concat_rows')


def concat_cols(tensors):
	return _concat(tensors, 1, 'concat_cols')


def _concat(tensors, axis, op):
	tensors = [as_tensor(t) for t in tensors]
	bounds = np.cumsum([t.Data.shape[axis] for t in tensors])[:-1]

	def backward(g):
		return tuple(np.split(g, bounds, axis=axis))

	return Tensor.result(np.concatenate([t.Data for t in tensors], axis=axis), op, tensors, backward)


def slice_cols(x, start, stop):
	x = as_tensor(x)

	def backward(g):
		gx = np.zeros_like(x.Data)
		gx[:, start:stop] = g
		return (gx,)

	return Tensor.result(x.Data[:, start:stop], 'slice_cols', (x,), backward)


def slice_rows(x, start, stop):
	x = as_tensor(x)

	def backward(g):
		gx = np.zeros_like(x.Data)
		gx[start:stop] = g
		return (gx,)

	return Tensor.result(x.Data[start:stop], 'slice_rows', (x,), backward)


def reshape(x, shape):
	x = as_tensor(x)
	original = x.Data.shape

	def backward(g):
		return (g.reshape(original),)

	return Tensor.result(x.Data.reshape(shape), 'reshape', (x,), backward)


def dropout(x, rate, rng):
	'''
	Inverted dropout; identity when `rate` is 0 or `rng` is None.
	'''
	if rate <= 0.0 or rng is None:
		return x
	keep = (rng.random(x.Data.shape) >= rate) / (1.0 - rate)
	return x * keep


def token_logprobs(logits, targets):
	'''
	Per-row log-probability of the target index, a 1-D tensor; log-softmax and gather fused.
	'''
	logits = as_tensor(logits)
	targets = np.asarray(targets, dtype=np.int64)
	rows, vocab = logits.Data.shape
	if targets.shape != (rows,):
		raise NumericsError("Expected {} targets, got {}".format(rows, targets.shape[0] if targets.ndim else 0))
	if rows > 0 and (targets.min() < 0 or targets.max() >= vocab):
		raise NumericsError("Target index out of range for vocabulary of {}".format(vocab))

	shifted = logits.Data - logits.Data.max(axis=1, keepdims=True)
	logp = shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))
	picked = logp[np.arange(rows), targets]

	def backward(g):
		gx = -np.exp(logp) * g[:, None]
		gx[np.arange(rows), targets] += g
		return (gx,)

	return Tensor.result(picked, 'token_logprobs', (logits,), backward)


def softmax_cross_entropy(logits, targets):
	'''
	Mean over rows of -log softmax(logits)[target].
	'''
	lp = token_logprobs(logits, targets)
	return lp.sum() * (-1.0 / max(lp.Data.shape[0], 1))


def mse(prediction, target):
	diff = as_tensor(prediction) - as_tensor(target)
	return (diff * diff).mean()
