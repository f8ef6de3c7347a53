from .tensor import Tensor, as_tensor, add, sub, mul, div, matmul, transpose
from .ops import (
	NEG_INF, relu, tanh, sigmoid, exp, log, activation, softmax, log_softmax, layer_norm,
	take_rows, concat_rows, concat_cols, slice_cols, slice_rows, reshape, dropout,
	token_logprobs, softmax_cross_entropy, mse,
)
from .autograd import Graph, backward, grad, parameter_key
from .gradcheck import finite_difference_grad, check_gradients, relative_error
from .rng import stream, derive_seed
from .parameters import Parameters
from .optim import Adam, clip_by_global_norm
from .checkpoint import save_checkpoint, load_checkpoint, parse_metadata, format_metadata

__all__ = [
	'Tensor', 'as_tensor', 'add', 'sub', 'mul', 'div', 'matmul', 'transpose',
	'NEG_INF', 'relu', 'tanh', 'sigmoid', 'exp', 'log', 'activation', 'softmax', 'log_softmax',
	'layer_norm', 'take_rows', 'concat_rows', 'concat_cols', 'slice_cols', 'slice_rows', 'reshape',
	'dropout', 'token_logprobs', 'softmax_cross_entropy', 'mse',
	'Graph', 'backward', 'grad', 'parameter_key',
	'finite_difference_grad', 'check_gradients', 'relative_error',
	'stream', 'derive_seed',
	'Parameters',
	'Adam', 'clip_by_global_norm',
	'save_checkpoint', 'load_checkpoint', 'parse_metadata', 'format_metadata',
]
