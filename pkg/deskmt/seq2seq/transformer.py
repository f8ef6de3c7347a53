from .genotype import transformer_genotype
from .model import Seq2SeqBase
from .operations import feed_forward
from .operations import multi_head_attention
from .operations import create_op_parameters
from ..numerics import dropout

#


class TransformerModel(Seq2SeqBase):
	'''
	Post-norm Transformer written out by hand, without genotype machinery.

	Parameter names match the `GenotypeModel` built from `transformer_genotype()`,
	so the same seed gives the same weights and the same outputs.
	'''

	def __init__(self, config, seed, name='model', parameters=None):
		self.Genotype = transformer_genotype(config.Layers)
		super().__init__(config, seed, name=name, parameters=parameters)


	def _build_layers(self):
		cfg = self.ModelConfig
		P = self.Parameters
		for l in range(cfg.Layers):
			create_op_parameters(P, 'encoder.{}.node1.b0.self_attention'.format(l), 'self_attention', cfg)
			create_op_parameters(P, 'encoder.{}.node2.b0.ffn'.format(l), 'ffn', cfg)
		for l in range(cfg.Layers):
			create_op_parameters(P, 'decoder.{}.node1.b0.self_attention'.format(l), 'self_attention', cfg)
			create_op_parameters(P, 'decoder.{}.node2.b0.cross_attention'.format(l), 'cross_attention', cfg)
			create_op_parameters(P, 'decoder.{}.node3.b0.ffn'.format(l), 'ffn', cfg)
		for side in ('encoder', 'decoder'):
			for l in range(cfg.Layers):
				self._create_norm('{}.{}'.format(side, l))


	def _sublayer(self, y, ctx):
		if ctx.Training:
			y = dropout(y, self.ModelConfig.Dropout, ctx.Rng)
		return y


	def _encoder_layer(self, l, h, ctx):
		cfg = self.ModelConfig
		P = self.Parameters
		a = self._sublayer(multi_head_attention(h, h, ctx.SelfMask, P, 'encoder.{}.node1.b0.self_attention'.format(l), cfg.NHeads), ctx)
		n1 = a + h
		f = self._sublayer(feed_forward(n1, P, 'encoder.{}.node2.b0.ffn'.format(l), cfg.Activation), ctx)
		n2 = f + n1
		return self._norm('encoder.{}'.format(l), n2)


	def _decoder_layer(self, l, h, ctx):
		cfg = self.ModelConfig
		P = self.Parameters
		a = self._sublayer(multi_head_attention(h, h, ctx.SelfMask, P, 'decoder.{}.node1.b0.self_attention'.format(l), cfg.NHeads), ctx)
		n1 = a + h
		c = self._sublayer(multi_head_attention(n1, ctx.Memory, ctx.CrossMask, P, 'decoder.{}.node2.b0.cross_attention'.format(l), cfg.NHeads), ctx)
		n2 = c + n1
		f = self._sublayer(feed_forward(n2, P, 'decoder.{}.node3.b0.ffn'.format(l), cfg.Activation), ctx)
		n3 = f + n2
		return self._norm('decoder.{}'.format(l), n3)
