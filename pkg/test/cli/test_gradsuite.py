import unittest

from deskmt.cli import OBJECTIVES
from deskmt.cli import TOLERANCE
from deskmt.cli import gradient_suite
from deskmt.cli import objective_check


class GradientSuiteTestCase(unittest.TestCase):

	def test_every_objective(self):
		results = gradient_suite()
		self.assertEqual(tuple(results), OBJECTIVES)
		for name, (err, params) in results.items():
			self.assertLess(err, TOLERANCE, name)
			self.assertGreater(params, 0, name)


	def test_other_seed(self):
		err, _ = objective_check('nao_predictor', seed=3)
		self.assertLess(err, TOLERANCE)


	def test_unknown_objective(self):
		with self.assertRaises(KeyError):
			objective_check('bleu')
