import unittest

import numpy as np

from deskmt.exceptions import NumericsError
from deskmt.numerics import Graph
from deskmt.numerics import Tensor
from deskmt.numerics import backward
from deskmt.numerics import check_gradients
from deskmt.numerics import finite_difference_grad
from deskmt.numerics import grad
from deskmt.numerics import log
from deskmt.numerics import matmul
from deskmt.numerics import tanh


class GraphTestCase(unittest.TestCase):

	def test_parents_precede_children(self):
		a = Tensor(np.ones((2, 2)), requires_grad=True, name='a')
		b = Tensor(np.ones((2, 2)), requires_grad=True, name='b')
		c = a @ b
		d = (c + a).sum()
		graph = Graph(d)
		for node in graph.Nodes:
			for parent in node.Parents:
				self.assertLess(graph.node_id(parent), graph.node_id(node))
		self.assertEqual(graph.Nodes[-1], d)


	def test_shared_node_visited_once(self):
		a = Tensor([1.0, 2.0], requires_grad=True, name='a')
		b = a * 3.0
		loss = (b + b).sum()
		graph = Graph(loss)
		self.assertEqual(len([n for n in graph.Nodes if n is b]), 1)
		g = backward(graph, loss)
		np.testing.assert_allclose(g['a'], [6.0, 6.0])


	def test_deep_chain_does_not_recurse(self):
		x = Tensor(1.0, requires_grad=True, name='x')
		y = x
		for _ in range(5000):
			y = y * 1.0
		g = grad(y)
		self.assertAlmostEqual(float(g['x']), 1.0)


class BackwardTestCase(unittest.TestCase):

	def test_matmul_gradient(self):
		a = Tensor(np.arange(6.0).reshape(2, 3), requires_grad=True, name='a')
		b = Tensor(np.arange(12.0).reshape(3, 4), requires_grad=True, name='b')
		g = grad(matmul(a, b).sum())
		np.testing.assert_allclose(g['a'], np.ones((2, 4)) @ b.Data.T)
		np.testing.assert_allclose(g['b'], a.Data.T @ np.ones((2, 4)))


	def test_broadcast_add_reduces_gradient(self):
		a = Tensor(np.zeros((3, 2)), requires_grad=True, name='a')
		bias = Tensor(np.zeros(2), requires_grad=True, name='bias')
		g = grad((a + bias).sum())
		np.testing.assert_allclose(g['bias'], [3.0, 3.0])


	def test_non_scalar_output_rejected(self):
		a = Tensor(np.ones(3), requires_grad=True, name='a')
		with self.assertRaises(NumericsError):
			grad(a * 2.0)


	def test_non_finite_value_names_the_node(self):
		a = Tensor([0.0], requires_grad=True, name='a')
		with self.assertRaises(NumericsError) as ctx:
			grad(log(a).sum())
		self.assertIsNotNone(ctx.exception.Node)


	def test_unused_parameters_get_zeros(self):
		a = Tensor([1.0], requires_grad=True, name='a')
		unused = Tensor([[1.0, 2.0]], requires_grad=True, name='unused')
		g = grad((a * 2.0).sum(), [a, unused])
		np.testing.assert_array_equal(g['unused'], np.zeros((1, 2)))


	def test_frozen_leaves_build_no_graph(self):
		a = Tensor([1.0, 2.0], requires_grad=False)
		out = (a * 2.0).sum()
		self.assertFalse(out.RequiresGrad)
		self.assertEqual(out.Parents, ())
		self.assertEqual(grad(out), {})


class FiniteDifferenceTestCase(unittest.TestCase):

	def test_sum_of_squares(self):
		x = Tensor(np.array([1.0, 2.0]), requires_grad=True, name='x')
		numeric = finite_difference_grad(lambda: (x * x).sum(), [x], eps=1e-5)
		np.testing.assert_allclose(numeric['x'], [2.0, 4.0], atol=1e-8)
		np.testing.assert_array_equal(x.Data, [1.0, 2.0])


	def test_constant_has_zero_gradient(self):
		x = Tensor(np.array([1.0, -1.0, 3.0]), requires_grad=True, name='x')
		numeric = finite_difference_grad(lambda: 7.0, [x])
		np.testing.assert_array_equal(numeric['x'], np.zeros(3))


	def test_step_must_be_positive(self):
		x = Tensor(np.array([1.0]), requires_grad=True, name='x')
		with self.assertRaises(NumericsError):
			finite_difference_grad(lambda: (x * x).sum(), [x], eps=0.0)


	def test_matches_backward_on_two_layer_chain(self):
		rng = np.random.default_rng(0)
		w1 = Tensor(rng.normal(size=(4, 4)), requires_grad=True, name='w1')
		w2 = Tensor(rng.normal(size=(4, 4)), requires_grad=True, name='w2')
		inputs = Tensor(rng.normal(size=(4, 4)))
		err, _, _ = check_gradients(lambda: matmul(tanh(matmul(inputs, w1)), w2).sum(), [w1, w2])
		self.assertLess(err, 1e-6)
