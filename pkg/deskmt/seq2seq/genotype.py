'''
Per-layer architecture descriptions.

Every layer is a small DAG: node ``i`` (1-based) has two branches, each applying one operation to
the layer input (ref 0) or to an earlier node (ref 1..i-1). Encoder layers have 2 nodes, decoder layers 3.

The six operations are a stand-in operation set, not an exhaustive list.

Canonical text, used in checkpoints and archives::

	encoder=0:self_attention+0:zero,1:ffn+1:zero|...;decoder=0:self_attention+0:zero,1:cross_attention+1:zero,2:ffn+2:zero|...
'''

import collections

from ..exceptions import GenotypeError

#

OPS = ('identity', 'self_attention', 'cross_attention', 'conv3', 'ffn', 'zero')
ENCODER_OPS = ('identity', 'self_attention', 'conv3', 'ffn', 'zero')
DECODER_OPS = OPS
PARAMETRIC_OPS = ('self_attention', 'cross_attention', 'conv3', 'ffn')

NODE_COUNT = {'encoder': 2, 'decoder': 3}
SIDE_OPS = {'encoder': ENCODER_OPS, 'decoder': DECODER_OPS}

Branch = collections.namedtuple('Branch', ['input_ref', 'op'])


class LayerGene(object):

	def __init__(self, nodes):
		self.Nodes = tuple(tuple(Branch(int(b[0]), b[1]) for b in node) for node in nodes)


	def text(self):
		return ','.join(
			'+'.join('{}:{}'.format(b.input_ref, b.op) for b in node)
			for node in self.Nodes
		)


	@classmethod
	def parse(cls, text):
		nodes = []
		for node_text in text.split(','):
			branches = []
			for branch_text in node_text.split('+'):
				ref, sep, op = branch_text.partition(':')
				if sep != ':':
					raise GenotypeError("Malformed branch '{}'".format(branch_text))
				try:
					ref = int(ref)
				except ValueError:
					raise GenotypeError("Malformed input reference '{}'".format(ref))
				branches.append((ref, op.strip()))
			nodes.append(branches)
		return cls(nodes)


	def __eq__(self, other):
		return isinstance(other, LayerGene) and self.Nodes == other.Nodes


	def __hash__(self):
		return hash(self.Nodes)


	def __repr__(self):
		return "<LayerGene {}>".format(self.text())


class Genotype(object):
	'''
	Architecture of a whole encoder-decoder: one `LayerGene` per encoder and per decoder layer.
	Layers may differ from one another.
	'''

	def __init__(self, encoder, decoder):
		self.Encoder = tuple(encoder)
		self.Decoder = tuple(decoder)


	@property
	def layers(self):
		return len(self.Encoder)


	def side(self, name):
		return self.Encoder if name == 'encoder' else self.Decoder


	def text(self):
		return 'encoder={};decoder={}'.format(
			'|'.join(g.text() for g in self.Encoder),
			'|'.join(g.text() for g in self.Decoder),
		)


	@classmethod
	def parse(cls, text):
		parts = {}
		for part in text.strip().split(';'):
			key, sep, value = part.partition('=')
			if sep != '=' or key.strip() not in ('encoder', 'decoder'):
				raise GenotypeError("Malformed genotype text '{}'".format(text))
			parts[key.strip()] = [LayerGene.parse(layer) for layer in value.split('|')]
		if set(parts) != {'encoder', 'decoder'}:
			raise GenotypeError("Genotype text needs both encoder and decoder parts")
		return cls(parts['encoder'], parts['decoder'])


	def validate(self, layers=None):
		validate_genotype(self, layers)
		return self


	def branches(self):
		'''
		Yield `(side, layer index, node index (1-based), branch index, Branch)`.
		'''
		for side in ('encoder', 'decoder'):
			for l, gene in enumerate(self.side(side)):
				for i, node in enumerate(gene.Nodes, start=1):
					for j, branch in enumerate(node):
						yield side, l, i, j, branch


	def __eq__(self, other):
		return isinstance(other, Genotype) and self.text() == other.text()


	def __hash__(self):
		return hash(self.text())


	def __repr__(self):
		return "<Genotype {}>".format(self.text())


def validate_genotype(genotype, layers=None):
	'''
	Raise `GenotypeError` naming the offending node path, e.g. ``decoder.layer0.node2.branch1``.
	'''
	if len(genotype.Encoder) == 0:
		raise GenotypeError("A genotype needs at least one layer")
	if len(genotype.Encoder) != len(genotype.Decoder):
		raise GenotypeError("Encoder has {} layers but decoder has {}".format(len(genotype.Encoder), len(genotype.Decoder)))
	if layers is not None and len(genotype.Encoder) != layers:
		raise GenotypeError("Genotype has {} layers, model expects {}".format(len(genotype.Encoder), layers))

	for side in ('encoder', 'decoder'):
		allowed = SIDE_OPS[side]
		for l, gene in enumerate(genotype.side(side)):
			layer_path = '{}.layer{}'.format(side, l)
			if len(gene.Nodes) != NODE_COUNT[side]:
				raise GenotypeError(
					"{} layers need exactly {} nodes, got {}".format(side, NODE_COUNT[side], len(gene.Nodes)),
					node_path=layer_path
				)
			for i, node in enumerate(gene.Nodes, start=1):
				if len(node) != 2:
					raise GenotypeError("a node needs exactly two branches", node_path='{}.node{}'.format(layer_path, i))
				for j, branch in enumerate(node):
					path = '{}.node{}.branch{}'.format(layer_path, i, j)
					if branch.op not in OPS:
						raise GenotypeError("unknown operation '{}'".format(branch.op), node_path=path)
					if branch.op not in allowed:
						raise GenotypeError("operation '{}' is not allowed in {} layers".format(branch.op, side), node_path=path)
					if branch.input_ref < 0 or branch.input_ref >= i:
						raise GenotypeError(
							"input reference {} must point to the layer input or an earlier node".format(branch.input_ref),
							node_path=path
						)
	return True


def transformer_genotype(layers):
	'''
	The Transformer as one point of the space: main operation on the first branch, zero on the second,
	the identity path being the per-node residual.
	'''
	if layers < 1:
		raise GenotypeError("transformer_genotype() needs at least one layer")
	encoder = LayerGene([
		[(0, 'self_attention'), (0, 'zero')],
		[(1, 'ffn'), (1, 'zero')],
	])
	decoder = LayerGene([
		[(0, 'self_attention'), (0, 'zero')],
		[(1, 'cross_attention'), (1, 'zero')],
		[(2, 'ffn'), (2, 'zero')],
	])
	return Genotype([encoder] * layers, [decoder] * layers)


def zero_genotype(layers):
	encoder = LayerGene([[(0, 'zero'), (0, 'zero')], [(1, 'zero'), (1, 'zero')]])
	decoder = LayerGene([[(0, 'zero'), (0, 'zero')], [(1, 'zero'), (1, 'zero')], [(2, 'zero'), (2, 'zero')]])
	return Genotype([encoder] * layers, [decoder] * layers)


def random_genotype(layers, rng):
	'''
	Uniform sample: input reference uniform over valid refs, operation uniform over the side's operations.
	'''
	sides = {}
	for side in ('encoder', 'decoder'):
		ops = SIDE_OPS[side]
		genes = []
		for _ in range(layers):
			nodes = []
			for i in range(1, NODE_COUNT[side] + 1):
				nodes.append([
					(int(rng.integers(0, i)), ops[int(rng.integers(0, len(ops)))])
					for _ in range(2)
				])
			genes.append(LayerGene(nodes))
		sides[side] = genes
	return Genotype(sides['encoder'], sides['decoder'])
