'''
Flat token encoding of a `Genotype`.

For every side (encoder first), layer, node and branch the sequence holds two tokens:
the input reference, then the operation. Token 0 is the decoder start symbol and never
appears inside a sequence.
'''

import numpy as np

from ..exceptions import GenotypeError
from ..seq2seq.genotype import Genotype
from ..seq2seq.genotype import LayerGene
from ..seq2seq.genotype import NODE_COUNT
from ..seq2seq.genotype import OPS
from ..seq2seq.genotype import SIDE_OPS
from ..seq2seq.genotype import validate_genotype

#

GO = 0
MAX_REF = max(NODE_COUNT.values())
REF_BASE = 1
OP_BASE = REF_BASE + MAX_REF
ARCH_VOCAB_SIZE = OP_BASE + len(OPS)


def ref_token(ref):
	return REF_BASE + int(ref)


def op_token(op):
	return OP_BASE + OPS.index(op)


def token_text(token):
	if token == GO:
		return '<go>'
	if token < OP_BASE:
		return 'ref{}'.format(token - REF_BASE)
	return OPS[token - OP_BASE]


def sequence_length(layers):
	return 2 * 2 * layers * sum(NODE_COUNT.values())


def slots(layers):
	'''
	Grammar of a sequence: for each position `(side, layer, node, branch, kind)`, kind being 'ref' or 'op'.
	'''
	out = []
	for side in ('encoder', 'decoder'):
		for l in range(layers):
			for i in range(1, NODE_COUNT[side] + 1):
				for j in range(2):
					out.append((side, l, i, j, 'ref'))
					out.append((side, l, i, j, 'op'))
	return out


def allowed_tokens(slot):
	side, _, node, _, kind = slot
	if kind == 'ref':
		return [ref_token(r) for r in range(node)]
	return [op_token(op) for op in SIDE_OPS[side]]


def grammar_masks(layers, neg_inf):
	'''
	(length x vocab) additive mask: 0 where a token is legal at that position, `neg_inf` elsewhere.
	'''
	grammar = slots(layers)
	mask = np.full((len(grammar), ARCH_VOCAB_SIZE), neg_inf)
	for p, slot in enumerate(grammar):
		mask[p, allowed_tokens(slot)] = 0.0
	return mask


def encode_genotype(genotype):
	validate_genotype(genotype)
	seq = []
	for _, _, _, _, branch in genotype.branches():
		seq.append(ref_token(branch.input_ref))
		seq.append(op_token(branch.op))
	return seq


def decode_sequence(seq, layers):
	'''
	Inverse of `encode_genotype`; an ill-formed sequence raises `GenotypeError`.
	'''
	seq = [int(t) for t in seq]
	grammar = slots(layers)
	if len(seq) != len(grammar):
		raise GenotypeError("Architecture sequence of length {} does not describe {} layer(s)".format(len(seq), layers))
	for p, (slot, token) in enumerate(zip(grammar, seq)):
		if token not in allowed_tokens(slot):
			side, l, i, j, kind = slot
			raise GenotypeError(
				"token {} is not a valid {} here".format(token, kind),
				node_path='{}.layer{}.node{}.branch{}'.format(side, l, i, j)
			)

	sides = {'encoder': [], 'decoder': []}
	p = 0
	for side in ('encoder', 'decoder'):
		for _ in range(layers):
			nodes = []
			for _ in range(NODE_COUNT[side]):
				node = []
				for _ in range(2):
					node.append((seq[p] - REF_BASE, OPS[seq[p + 1] - OP_BASE]))
					p += 2
				nodes.append(node)
			sides[side].append(LayerGene(nodes))
	return Genotype(sides['encoder'], sides['decoder'])
