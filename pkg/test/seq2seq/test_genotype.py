import unittest

from deskmt.exceptions import GenotypeError
from deskmt.numerics import stream
from deskmt.seq2seq import Genotype
from deskmt.seq2seq import LayerGene
from deskmt.seq2seq import random_genotype
from deskmt.seq2seq import transformer_genotype
from deskmt.seq2seq import validate_genotype
from deskmt.seq2seq import zero_genotype


ENCODER = LayerGene([[(0, 'self_attention'), (0, 'zero')], [(1, 'ffn'), (1, 'zero')]])
DECODER = LayerGene([[(0, 'self_attention'), (0, 'zero')], [(1, 'cross_attention'), (1, 'zero')], [(2, 'ffn'), (2, 'zero')]])


class GenotypeTestCase(unittest.TestCase):

	def test_text_roundtrip(self):
		g = transformer_genotype(2)
		self.assertEqual(Genotype.parse(g.text()), g)
		self.assertTrue(g.text().startswith('encoder=0:self_attention+0:zero,1:ffn+1:zero|'))


	def test_random_genotypes_are_valid(self):
		rng = stream(3, 'genotype')
		for _ in range(20):
			g = random_genotype(2, rng)
			self.assertTrue(validate_genotype(g, 2))
			self.assertEqual(Genotype.parse(g.text()), g)


	def test_zero_genotype_is_valid(self):
		self.assertTrue(validate_genotype(zero_genotype(1)))


	def test_cross_attention_rejected_in_encoder(self):
		bad = LayerGene([[(0, 'cross_attention'), (0, 'zero')], [(1, 'ffn'), (1, 'zero')]])
		with self.assertRaises(GenotypeError) as cm:
			validate_genotype(Genotype([bad], [DECODER]))
		self.assertEqual(cm.exception.NodePath, 'encoder.layer0.node1.branch0')


	def test_forward_reference_rejected(self):
		bad = LayerGene([[(0, 'self_attention'), (0, 'zero')], [(1, 'ffn'), (1, 'zero')], [(2, 'ffn'), (3, 'zero')]])
		with self.assertRaises(GenotypeError) as cm:
			validate_genotype(Genotype([ENCODER], [bad]))
		self.assertEqual(cm.exception.NodePath, 'decoder.layer0.node3.branch1')
		self.assertIn('decoder.layer0.node3.branch1', str(cm.exception))


	def test_unknown_op_and_node_count(self):
		bad = LayerGene([[(0, 'lstm'), (0, 'zero')], [(1, 'ffn'), (1, 'zero')]])
		with self.assertRaises(GenotypeError) as cm:
			validate_genotype(Genotype([bad], [DECODER]))
		self.assertEqual(cm.exception.NodePath, 'encoder.layer0.node1.branch0')

		short = LayerGene([[(0, 'ffn'), (0, 'zero')]])
		with self.assertRaises(GenotypeError) as cm:
			validate_genotype(Genotype([short], [DECODER]))
		self.assertEqual(cm.exception.NodePath, 'encoder.layer0')


	def test_layer_mismatch(self):
		with self.assertRaises(GenotypeError):
			validate_genotype(transformer_genotype(2), layers=3)
		with self.assertRaises(GenotypeError):
			validate_genotype(Genotype([ENCODER], [DECODER, DECODER]))


	def test_malformed_text(self):
		for text in ('encoder=0:ffn', 'encoder=x:ffn+0:zero;decoder=0:ffn', 'garbage'):
			with self.assertRaises(GenotypeError):
				Genotype.parse(text)


	def test_branches_enumerates_all(self):
		branches = list(transformer_genotype(1).branches())
		self.assertEqual(len(branches), 2 * 2 + 3 * 2)
		self.assertEqual(branches[0][:4], ('encoder', 0, 1, 0))
