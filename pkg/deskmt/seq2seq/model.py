import logging

import numpy as np

from ..exceptions import DecodeError
from ..numerics import Parameters
from ..numerics import dropout
from ..numerics import layer_norm
from ..numerics import take_rows
from ..numerics import transpose
from .genotype import validate_genotype
from .operations import LayerContext
from .operations import apply_op
from .operations import create_op_parameters
from .packing import Packing
from .vocabulary import BOS
from .vocabulary import EOS
from .vocabulary import strip_sequence

#

L = logging.getLogger(__name__)

#


def sinusoidal_table(max_len, d):
	position = np.arange(max_len)[:, None]
	div = np.exp(np.arange(0, d, 2) * (-np.log(10000.0) / d))
	table = np.zeros((max_len, d))
	table[:, 0::2] = np.sin(position * div)
	table[:, 1::2] = np.cos(position * div)[:, :d // 2]
	return table


class EncoderState(object):

	def __init__(self, memory, packing):
		self.Memory = memory
		self.Packing = packing


class Seq2SeqBase(object):
	'''
	Embeddings, positional encoding, output projection and the encode/decode skeleton shared by every model.
	Subclasses provide the layers.

	:ivar Reversed: `True` for a right-to-left model trained on reversed targets.
	:ivar Activated: set to a list to record every branch operation applied during a forward pass.
	'''

	def __init__(self, config, seed, name='model', parameters=None):
		self.ModelConfig = config
		self.Seed = seed
		self.Name = name
		self.Parameters = parameters if parameters is not None else Parameters(name, seed)
		self.Reversed = False
		self.Activated = None
		self.Positional = sinusoidal_table(config.MaxLen + 1, config.DModel)
		self._build_embeddings()
		self._build_layers()


	def _build_embeddings(self):
		cfg = self.ModelConfig
		P = self.Parameters
		if cfg.SharedVocabulary:
			self.SourceEmbedding = P.create('embed.shared', (cfg.VocabSize, cfg.DModel), 'uniform')
			self.TargetEmbedding = self.SourceEmbedding
		else:
			self.SourceEmbedding = P.create('embed.source', (cfg.VocabSize, cfg.DModel), 'uniform')
			self.TargetEmbedding = P.create('embed.target', (cfg.VocabSize, cfg.DModel), 'uniform')

		if cfg.TiedEmbeddings:
			self.OutputWeight = None
		else:
			self.OutputWeight = P.create('output.w', (cfg.DModel, cfg.VocabSize), cfg.OutputInit)
		self.OutputBias = P.create('output.b', (cfg.VocabSize,), 'zeros')


	def _build_layers(self):
		raise NotImplementedError()


	def _encoder_layer(self, l, h, ctx):
		raise NotImplementedError()


	def _decoder_layer(self, l, h, ctx):
		raise NotImplementedError()


	def _create_norm(self, prefix):
		d = self.ModelConfig.DModel
		self.Parameters.create(prefix + '.norm.gain', (d,), 'ones')
		self.Parameters.create(prefix + '.norm.bias', (d,), 'zeros')


	def _norm(self, prefix, x):
		return layer_norm(x, self.Parameters[prefix + '.norm.gain'], self.Parameters[prefix + '.norm.bias'])


	@property
	def vocab_size(self):
		return self.ModelConfig.VocabSize


	def parameters(self):
		return self.Parameters.values()


	def _embed(self, embedding, ids, packing, embedded=None, training=False, rng=None):
		x = take_rows(embedding, ids) if embedded is None else embedded
		h = x * np.sqrt(self.ModelConfig.DModel) + self.Positional[packing.Position]
		if training:
			h = dropout(h, self.ModelConfig.Dropout, rng)
		return h


	def source_rows(self, sources):
		'''
		Cleaned source sequences with EOS appended, as fed to the encoder.
		'''
		rows = []
		for s in sources:
			s = strip_sequence(s) + [EOS]
			if len(s) > self.ModelConfig.MaxLen:
				raise DecodeError("Source of length {} exceeds max length {}".format(len(s) - 1, self.ModelConfig.MaxLen))
			rows.append(s)
		return rows


	def encode(self, sources, training=False, rng=None, embedded=None):
		'''
		`embedded`, when given, replaces the embedding lookup: one row per packed source position (EOS included).
		'''
		rows = self.source_rows(sources)
		packing = Packing([len(r) for r in rows])
		ids = np.array([t for r in rows for t in r], dtype=np.int64)
		h = self._embed(self.SourceEmbedding, ids, packing, embedded, training, rng)
		ctx = LayerContext('encoder', packing, packing.self_mask(causal=False), training=training, rng=rng, activated=self.Activated)
		for l in range(self.ModelConfig.Layers):
			h = self._encoder_layer(l, h, ctx)
		return EncoderState(h, packing)


	def decode(self, state, prefixes, source_of_segment=None, training=False, rng=None, embedded=None):
		'''
		Logits for every position of every decoder input in `prefixes` (each starting with BOS).
		Returns `(logits tensor, packing)`.
		'''
		for p in prefixes:
			if len(p) > self.ModelConfig.MaxLen:
				raise DecodeError("Target prefix of length {} exceeds max length {}".format(len(p), self.ModelConfig.MaxLen))
		packing = Packing([len(p) for p in prefixes])
		ids = np.array([t for p in prefixes for t in p], dtype=np.int64)
		h = self._embed(self.TargetEmbedding, ids, packing, embedded, training, rng)
		ctx = LayerContext(
			'decoder', packing, packing.self_mask(causal=True),
			memory=state.Memory,
			cross_mask=packing.cross_mask(state.Packing, source_of_segment),
			training=training, rng=rng, activated=self.Activated
		)
		for l in range(self.ModelConfig.Layers):
			h = self._decoder_layer(l, h, ctx)
		return self._project(h), packing


	def _project(self, h):
		weight = transpose(self.TargetEmbedding) if self.OutputWeight is None else self.OutputWeight
		return h @ weight + self.OutputBias


	def teacher_forcing(self, pairs, training=False, rng=None, source_embedded=None, target_embedded=None):
		'''
		Forward pass over (source, target) pairs; decoder input BOS+y, gold y+EOS.
		Returns `(logits, gold ids, target packing)`.
		'''
		state = self.encode([s for s, _ in pairs], training=training, rng=rng, embedded=source_embedded)
		targets = [strip_sequence(t) for _, t in pairs]
		prefixes = [[BOS] + t for t in targets]
		logits, packing = self.decode(state, prefixes, training=training, rng=rng, embedded=target_embedded)
		gold = np.array([tok for t in targets for tok in t + [EOS]], dtype=np.int64)
		return logits, gold, packing


class GenotypeModel(Seq2SeqBase):
	'''
	Encoder-decoder whose every layer is wired by its `LayerGene`.

	Node output = sum of its non-zero branch outputs + its first branch's input (residual).
	Layer output = layer norm of the sum of node outputs no other node consumes.
	'''

	def __init__(self, genotype, config, seed, name='model', parameters=None):
		validate_genotype(genotype, config.Layers)
		self.Genotype = genotype
		super().__init__(config, seed, name=name, parameters=parameters)


	def _build_layers(self):
		for side, l, i, j, branch in self.Genotype.branches():
			create_op_parameters(self.Parameters, branch_prefix(side, l, i, j, branch.op), branch.op, self.ModelConfig)
		for side in ('encoder', 'decoder'):
			for l in range(self.ModelConfig.Layers):
				self._create_norm('{}.{}'.format(side, l))


	def _encoder_layer(self, l, h, ctx):
		return self._genotype_layer('encoder', l, self.Genotype.Encoder[l], h, ctx)


	def _decoder_layer(self, l, h, ctx):
		return self._genotype_layer('decoder', l, self.Genotype.Decoder[l], h, ctx)


	def _genotype_layer(self, side, l, gene, h, ctx):
		outputs = [h]
		consumed = set()
		for i, node in enumerate(gene.Nodes, start=1):
			total = None
			for j, branch in enumerate(node):
				consumed.add(branch.input_ref)
				if ctx.Activated is not None:
					ctx.Activated.append((side, l, i, j, branch.op))
				y = apply_op(
					branch.op, outputs[branch.input_ref],
					self.Parameters, branch_prefix(side, l, i, j, branch.op),
					self.ModelConfig, ctx
				)
				if y is None:
					continue
				total = y if total is None else total + y
			residual = outputs[node[0].input_ref]
			outputs.append(residual if total is None else total + residual)

		loose = [outputs[i] for i in range(1, len(outputs)) if i not in consumed]
		out = loose[0]
		for o in loose[1:]:
			out = out + o
		return self._norm('{}.{}'.format(side, l), out)


def branch_prefix(side, layer, node, branch, op):
	return '{}.{}.node{}.b{}.{}'.format(side, layer, node, branch, op)


def build_model(genotype, config, seed, name='model', parameters=None):
	'''
	Build a `GenotypeModel`; initial parameters depend only on `seed` and parameter names.
	'''
	return GenotypeModel(genotype, config, seed, name=name, parameters=parameters)


