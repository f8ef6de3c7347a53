import logging
import collections

import numpy as np

from ..exceptions import CheckpointError
from ..exceptions import CorpusError
from ..exceptions import DecodeError
from ..log import LOG_NOTICE
from ..numerics import format_metadata
from ..numerics import load_checkpoint
from ..numerics import parse_metadata
from ..numerics import save_checkpoint
from ..numerics import softmax
from ..numerics import token_logprobs
from ..seq2seq.model import Seq2SeqBase
from ..seq2seq.modelconfig import ModelConfig
from ..seq2seq.operations import LayerContext
from ..seq2seq.operations import apply_op
from ..seq2seq.operations import create_op_parameters
from ..seq2seq.packing import Packing
from ..seq2seq.training import TrainConfig
from ..seq2seq.training import Trainer
from ..seq2seq.vocabulary import BOS
from ..seq2seq.vocabulary import EOS
from ..seq2seq.vocabulary import strip_sequence

#

L = logging.getLogger(__name__)

#


class CausalLM(Seq2SeqBase):
	'''
	Decoder-only language model: each layer is causal self-attention then a feed-forward sublayer,
	each with a residual connection, followed by layer norm.
	'''

	def _build_layers(self):
		cfg = self.ModelConfig
		for l in range(cfg.Layers):
			create_op_parameters(self.Parameters, 'lm.{}.node1.b0.self_attention'.format(l), 'self_attention', cfg)
			create_op_parameters(self.Parameters, 'lm.{}.node2.b0.ffn'.format(l), 'ffn', cfg)
			self._create_norm('lm.{}'.format(l))


	def _lm_layer(self, l, h, ctx):
		cfg = self.ModelConfig
		a = apply_op('self_attention', h, self.Parameters, 'lm.{}.node1.b0.self_attention'.format(l), cfg, ctx)
		n1 = a + h
		f = apply_op('ffn', n1, self.Parameters, 'lm.{}.node2.b0.ffn'.format(l), cfg, ctx)
		return self._norm('lm.{}'.format(l), f + n1)


	def forward(self, sentences, training=False, rng=None):
		'''
		Logits for inputs BOS+s of every sentence; row t predicts token t (EOS after the last one).
		Returns `(logits, gold, packing)`.
		'''
		rows = []
		for s in sentences:
			s = strip_sequence(s)
			if len(s) + 1 > self.ModelConfig.MaxLen:
				raise DecodeError("Sentence of length {} exceeds max length {}".format(len(s), self.ModelConfig.MaxLen))
			rows.append(s)
		packing = Packing([len(r) + 1 for r in rows])
		ids = np.array([t for r in rows for t in [BOS] + r], dtype=np.int64)
		h = self._embed(self.TargetEmbedding, ids, packing, training=training, rng=rng)
		ctx = LayerContext('decoder', packing, packing.self_mask(causal=True), training=training, rng=rng)
		for l in range(self.ModelConfig.Layers):
			h = self._lm_layer(l, h, ctx)
		gold = np.array([t for r in rows for t in r + [EOS]], dtype=np.int64)
		return self._project(h), gold, packing


	def distributions(self, sentence, temperature=1.0):
		'''
		Next-token distributions at every position of `sentence`: row t is conditioned on sentence[:t].
		Returns an array of shape (len(sentence) + 1, |V|).
		'''
		if temperature <= 0.0:
			raise ValueError("Temperature must be positive, got {}".format(temperature))
		logits, _, _ = self.forward([sentence])
		return softmax(logits * (1.0 / temperature)).Data


def lm_nll(lm, batch, training=False, rng=None):
	'''
	-(1/|B|) sum of log P(s) over the batch, EOS included.
	'''
	if len(batch) == 0:
		raise CorpusError("Empty batch")
	logits, gold, _ = lm.forward(batch, training=training, rng=rng)
	return token_logprobs(logits, gold).sum() * (-1.0 / len(batch))


def lm_token_nll(lm, sentences):
	'''
	Mean per-token negative log-likelihood.
	'''
	logits, gold, _ = lm.forward(sentences)
	return float(-token_logprobs(logits, gold).Data.mean())


def lm_distribution(lm, prefix, temperature=1.0):
	'''
	P(next | prefix) over the full vocabulary; an empty prefix conditions on BOS only.
	'''
	prefix = strip_sequence(prefix)
	return lm.distributions(prefix, temperature)[len(prefix)]


def train_lm(corpus, config=None, train_config=None, seed=0, steps=None, name='lm'):
	'''
	Next-token training on one language's monolingual corpus; returns the frozen model.
	'''
	corpus = [strip_sequence(s) for s in corpus]
	if len(corpus) == 0:
		raise CorpusError("Cannot train a language model on an empty corpus")
	lm = CausalLM(config if config is not None else ModelConfig(), seed, name=name)
	trainer = Trainer(lm, train_config if train_config is not None else TrainConfig(), seed=seed, loss_fn=lm_nll)
	trainer.train(corpus, steps=steps)
	lm.Parameters.freeze()
	L.log(LOG_NOTICE, "Language model trained", struct_data={'name': name, 'steps': trainer.StepNo, 'sentences': len(corpus)})
	return lm


def save_lm(path, lm):
	sections = collections.OrderedDict()
	sections['deskmt'] = 'role=lm\nname={}\nseed={}'.format(lm.Name, lm.Seed)
	sections['model'] = lm.ModelConfig.canonical_text()
	save_checkpoint(path, lm.Parameters.state(), format_metadata(sections))


def load_lm(path, name=None):
	tensors, metadata = load_checkpoint(path)
	sections = parse_metadata(metadata)
	header = dict(line.split('=', 1) for line in sections.get('deskmt', '').split('\n') if '=' in line)
	if header.get('role') != 'lm':
		raise CheckpointError("Checkpoint role is '{}', expected 'lm'".format(header.get('role')), path=path)
	lm = CausalLM(ModelConfig.from_text(sections['model']), int(header.get('seed', 0)), name=name or header.get('name', 'lm'))
	lm.Parameters.load_state(tensors)
	lm.Parameters.freeze()
	return lm
