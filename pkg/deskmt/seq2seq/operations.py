'''
Candidate operations of a layer branch. All of them map a (rows x d_model) tensor to the same shape.
'''

import numpy as np

from ..numerics import activation
from ..numerics import concat_cols
from ..numerics import dropout
from ..numerics import slice_cols
from ..numerics import softmax
from ..numerics import take_rows
from ..numerics import transpose

#


class LayerContext(object):
	'''
	Everything a branch operation may read besides its input.

	:ivar Activated: when a list, every applied branch appends `(side, layer, node, branch, op)`.
	'''

	def __init__(self, side, packing, self_mask, memory=None, cross_mask=None, training=False, rng=None, activated=None):
		self.Side = side
		self.Packing = packing
		self.SelfMask = self_mask
		self.Memory = memory
		self.CrossMask = cross_mask
		self.Causal = side == 'decoder'
		self.Training = training
		self.Rng = rng
		self.Activated = activated


def create_op_parameters(params, prefix, op, config):
	d = config.DModel
	if op in ('self_attention', 'cross_attention'):
		for w in ('wq', 'wk', 'wv', 'wo'):
			params.create('{}.{}'.format(prefix, w), (d, d), 'fan_in')
	elif op == 'ffn':
		params.create(prefix + '.w1', (d, config.DFfn), 'fan_in')
		params.create(prefix + '.b1', (config.DFfn,), 'zeros')
		params.create(prefix + '.w2', (config.DFfn, d), 'fan_in')
		params.create(prefix + '.b2', (d,), 'zeros')
	elif op == 'conv3':
		params.create(prefix + '.weight', (3, d), 'fan_in')
		params.create(prefix + '.bias', (d,), 'zeros')


def op_parameter_count(op, config):
	d = config.DModel
	if op in ('self_attention', 'cross_attention'):
		return 4 * d * d
	if op == 'ffn':
		return 2 * d * config.DFfn + config.DFfn + d
	if op == 'conv3':
		return 4 * d
	return 0


def apply_op(op, x, params, prefix, config, ctx):
	'''
	Returns the branch output, or None for the zero operation.
	'''
	if op == 'zero':
		return None
	if op == 'identity':
		return x
	if op == 'self_attention':
		y = multi_head_attention(x, x, ctx.SelfMask, params, prefix, config.NHeads)
	elif op == 'cross_attention':
		y = multi_head_attention(x, ctx.Memory, ctx.CrossMask, params, prefix, config.NHeads)
	elif op == 'ffn':
		y = feed_forward(x, params, prefix, config.Activation)
	elif op == 'conv3':
		y = depthwise_conv3(x, params, prefix, ctx.Packing, ctx.Causal)
	else:
		raise ValueError("Unknown operation '{}'".format(op))
	if ctx.Training:
		y = dropout(y, config.Dropout, ctx.Rng)
	return y


def multi_head_attention(query, keyvalue, mask, params, prefix, n_heads):
	q = query @ params[prefix + '.wq']
	k = keyvalue @ params[prefix + '.wk']
	v = keyvalue @ params[prefix + '.wv']
	d = q.Data.shape[1]
	dk = d // n_heads
	scale = 1.0 / np.sqrt(dk)

	heads = []
	for h in range(n_heads):
		lo, hi = h * dk, (h + 1) * dk
		scores = (slice_cols(q, lo, hi) @ transpose(slice_cols(k, lo, hi))) * scale
		heads.append(softmax(scores, mask) @ slice_cols(v, lo, hi))

	merged = heads[0] if n_heads == 1 else concat_cols(heads)
	return merged @ params[prefix + '.wo']


def feed_forward(x, params, prefix, activation_name='relu'):
	act = activation(activation_name)
	hidden = act(x @ params[prefix + '.w1'] + params[prefix + '.b1'])
	return hidden @ params[prefix + '.w2'] + params[prefix + '.b2']


def depthwise_conv3(x, params, prefix, packing, causal):
	'''
	Width-3 depthwise convolution within each sentence.
	Encoder: taps at t-1, t, t+1. Decoder (causal): taps at t-2, t-1, t.
	'''
	weight = params[prefix + '.weight']
	shifts = (2, 1, 0) if causal else (1, 0, -1)
	y = None
	for tap, shift in enumerate(shifts):
		xs = x if shift == 0 else take_rows(x, packing.shift_index(shift))
		term = xs * take_rows(weight, [tap])
		y = term if y is None else y + term
	return y + params[prefix + '.bias']
