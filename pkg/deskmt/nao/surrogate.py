import logging

import numpy as np

from ..exceptions import GenotypeError
from ..numerics import Adam
from ..numerics import NEG_INF
from ..numerics import Parameters
from ..numerics import Tensor
from ..numerics import grad
from ..numerics import mse
from ..numerics import sigmoid
from ..numerics import slice_cols
from ..numerics import take_rows
from ..numerics import tanh
from ..numerics import token_logprobs
from .archseq import ARCH_VOCAB_SIZE
from .archseq import GO
from .archseq import decode_sequence
from .archseq import encode_genotype
from .archseq import grammar_masks
from .archseq import sequence_length

#

L = logging.getLogger(__name__)

#


def _lstm_step(x, h, c, P, prefix, d):
	gates = x @ P[prefix + '.wx'] + h @ P[prefix + '.wh'] + P[prefix + '.b']
	i = sigmoid(slice_cols(gates, 0, d))
	f = sigmoid(slice_cols(gates, d, 2 * d))
	g = tanh(slice_cols(gates, 2 * d, 3 * d))
	o = sigmoid(slice_cols(gates, 3 * d, 4 * d))
	c = f * c + i * g
	h = o * tanh(c)
	return h, c


class Surrogate(object):
	'''
	Encoder, performance predictor and decoder over architecture sequences.

	The encoder is an LSTM over the token sequence whose hidden states are mean-pooled into the
	architecture embedding. The predictor is an MLP on the embedding (linear with `predictor_hidden=0`).
	The decoder is an LSTM started from the embedding; at every position only tokens the grammar
	allows there can be emitted, so every decoded sequence is a valid genotype.
	'''

	def __init__(self, layers, d_arch=64, predictor_hidden=64, trade_off=0.8, seed=0, name='nao'):
		self.Layers = layers
		self.DArch = d_arch
		self.PredictorHidden = predictor_hidden
		self.TradeOff = trade_off
		self.Length = sequence_length(layers)
		self.Mask = grammar_masks(layers, NEG_INF)
		self.Parameters = P = Parameters(name, seed)

		d = d_arch
		P.create('embed', (ARCH_VOCAB_SIZE, d), 'uniform')
		for part in ('encoder', 'decoder'):
			P.create(part + '.lstm.wx', (d, 4 * d), 'fan_in')
			P.create(part + '.lstm.wh', (d, 4 * d), 'fan_in')
			P.create(part + '.lstm.b', (4 * d,), 'zeros')
		P.create('decoder.out.w', (d, ARCH_VOCAB_SIZE), 'fan_in')
		P.create('decoder.out.b', (ARCH_VOCAB_SIZE,), 'zeros')
		if predictor_hidden > 0:
			P.create('predictor.w1', (d, predictor_hidden), 'fan_in')
			P.create('predictor.b1', (predictor_hidden,), 'zeros')
			P.create('predictor.w2', (predictor_hidden, 1), 'fan_in')
		else:
			P.create('predictor.w2', (d, 1), 'fan_in')
		P.create('predictor.b2', (1,), 'zeros')


	def parameters(self):
		return self.Parameters.values()


	def _sequences(self, sequences):
		seqs = np.array(sequences, dtype=np.int64).reshape(len(sequences), -1)
		if seqs.shape[1] != self.Length:
			raise GenotypeError("Architecture sequences must have length {}, got {}".format(self.Length, seqs.shape[1]))
		if seqs.size > 0 and (seqs.min() < 1 or seqs.max() >= ARCH_VOCAB_SIZE):
			raise GenotypeError("Architecture sequence holds an invalid token")
		return seqs


	def encode(self, sequences):
		'''
		(batch x d_arch) embedding tensor.
		'''
		seqs = self._sequences(sequences)
		P = self.Parameters
		n = seqs.shape[0]
		h = Tensor(np.zeros((n, self.DArch)))
		c = Tensor(np.zeros((n, self.DArch)))
		total = None
		for t in range(self.Length):
			x = take_rows(P['embed'], seqs[:, t])
			h, c = _lstm_step(x, h, c, P, 'encoder.lstm', self.DArch)
			total = h if total is None else total + h
		return total * (1.0 / self.Length)


	def predict(self, embedding):
		'''
		(batch x 1) predicted performance.
		'''
		P = self.Parameters
		e = embedding
		if self.PredictorHidden > 0:
			e = tanh(e @ P['predictor.w1'] + P['predictor.b1'])
		return e @ P['predictor.w2'] + P['predictor.b2']


	def _decoder_logits(self, embedding, inputs):
		'''
		Teacher-forced decoder logits, one (batch x vocab) tensor per position, grammar mask applied.
		'''
		P = self.Parameters
		h = embedding
		c = Tensor(np.zeros(embedding.Data.shape))
		rows = []
		for t in range(inputs.shape[1]):
			x = take_rows(P['embed'], inputs[:, t])
			h, c = _lstm_step(x, h, c, P, 'decoder.lstm', self.DArch)
			rows.append(h @ P['decoder.out.w'] + P['decoder.out.b'] + self.Mask[t])
		return rows


	def reconstruction_nll(self, embedding, sequences):
		seqs = self._sequences(sequences)
		n = seqs.shape[0]
		inputs = np.concatenate([np.full((n, 1), GO, dtype=np.int64), seqs[:, :-1]], axis=1)
		total = None
		for t, logits in enumerate(self._decoder_logits(embedding, inputs)):
			lp = token_logprobs(logits, seqs[:, t]).sum()
			total = lp if total is None else total + lp
		return total * (-1.0 / n)


	def loss(self, sequences, targets):
		'''
		trade_off * prediction MSE + (1 - trade_off) * reconstruction NLL.
		'''
		e = self.encode(sequences)
		y = np.asarray(targets, dtype=np.float64).reshape(-1, 1)
		return mse(self.predict(e), y) * self.TradeOff + self.reconstruction_nll(e, sequences) * (1.0 - self.TradeOff)


	def fit(self, sequences, targets, steps=200, lr=1e-3, batch_size=32, rng=None):
		'''
		Adam on `loss`; returns the loss history.
		'''
		optimizer = Adam(self.parameters(), lr=lr)
		n = len(sequences)
		history = []
		for step in range(steps):
			if rng is not None and n > batch_size:
				index = rng.choice(n, size=batch_size, replace=False)
			else:
				index = np.arange(n)
			loss = self.loss([sequences[i] for i in index], [targets[i] for i in index])
			optimizer.step(grad(loss, self.parameters()))
			history.append(float(loss.Data))
		L.debug("Surrogate fitted", struct_data={'steps': steps, 'loss': '{:.4f}'.format(history[-1]) if history else 'n/a'})
		return history


	def embed(self, sequence):
		return self.encode([sequence]).Data[0]


	def predict_value(self, embedding):
		return float(self.predict(Tensor(np.asarray(embedding, dtype=np.float64)[None, :])).Data[0, 0])


	def predict_gradient(self, embedding):
		e = Tensor(np.asarray(embedding, dtype=np.float64)[None, :], requires_grad=True, name='arch.embedding')
		out = self.predict(e).sum()
		return grad(out, [e])['arch.embedding'][0]


	def ascend(self, embedding, eta):
		'''
		One gradient-ascent step on the predicted performance: e + eta * df/de.
		'''
		if eta < 0:
			raise ValueError("Step size must be nonnegative, got {}".format(eta))
		e = np.array(embedding, dtype=np.float64)
		if eta == 0:
			return e
		return e + eta * self.predict_gradient(e)


	def decode(self, embedding):
		'''
		Greedy, grammar-constrained decoding from an embedding; returns a token sequence.
		'''
		P = self.Parameters
		h = Tensor(np.asarray(embedding, dtype=np.float64)[None, :])
		c = Tensor(np.zeros((1, self.DArch)))
		token = GO
		seq = []
		for t in range(self.Length):
			x = take_rows(P['embed'], [token])
			h, c = _lstm_step(x, h, c, P, 'decoder.lstm', self.DArch)
			logits = (h @ P['decoder.out.w'] + P['decoder.out.b']).Data[0] + self.Mask[t]
			token = int(np.argmax(logits))
			seq.append(token)
		return seq


	def encode_arch(self, genotype):
		return self.embed(encode_genotype(genotype))


	def decode_arch(self, embedding):
		return decode_sequence(self.decode(embedding), self.Layers)
