import logging

import numpy as np

from ..exceptions import NumericsError
from .tensor import Tensor

#

L = logging.getLogger(__name__)

#


class Graph(object):
	'''
	Topologically ordered record of the operations that produced `outputs`.

	Every node's parents precede it in `Nodes`; the node id is its position in that list.
	The sort is iterative, so deep decoder graphs do not hit the interpreter recursion limit.
	'''

	def __init__(self, outputs):
		if isinstance(outputs, Tensor):
			outputs = [outputs]
		self.Outputs = list(outputs)
		self.Nodes = _toposort(self.Outputs)
		self.Ids = {id(node): i for i, node in enumerate(self.Nodes)}


	def __len__(self):
		return len(self.Nodes)


	def node_id(self, tensor):
		return self.Ids[id(tensor)]


	def leaves(self):
		return [node for node in self.Nodes if len(node.Parents) == 0]


def _toposort(outputs):
	order = []
	visited = set()
	stack = [(node, False) for node in reversed(outputs)]
	while len(stack) > 0:
		node, expanded = stack.pop()
		if expanded:
			order.append(node)
			continue
		if id(node) in visited:
			continue
		visited.add(id(node))
		stack.append((node, True))
		for parent in reversed(node.Parents):
			if id(parent) not in visited:
				stack.append((parent, False))
	return order


def parameter_key(tensor):
	if tensor.Name is not None:
		return tensor.Name
	return 'param@{:x}'.format(id(tensor))


def backward(graph, output, parameters=None):
	'''
	Reverse-mode pass from the 0-dimensional `output` through `graph`.

	Returns a dict mapping parameter names to gradient arrays for every leaf with `RequiresGrad`.
	Tensors listed in `parameters` that did not take part in the computation receive zero gradients.
	The gradient is also stored in each leaf's `Grad`.
	'''
	if output.Data.ndim != 0:
		raise NumericsError("backward() requires a scalar output, got shape {}".format(output.Data.shape))

	for node_id, node in enumerate(graph.Nodes):
		if not np.all(np.isfinite(node.Data)):
			raise NumericsError(
				"Non-finite value at node #{} ({})".format(node_id, node.Op),
				node=node_id
			)

	result = {}
	if output.RequiresGrad:
		grads = {id(output): np.ones(())}
		for node_id in range(len(graph.Nodes) - 1, -1, -1):
			node = graph.Nodes[node_id]
			g = grads.pop(id(node), None)
			if g is None:
				continue

			if len(node.Parents) == 0:
				if node.RequiresGrad:
					node.Grad = g
					result[parameter_key(node)] = g
				continue

			parent_grads = node.BackwardFn(g)
			for parent, pg in zip(node.Parents, parent_grads):
				if not parent.RequiresGrad or pg is None:
					continue
				if not np.all(np.isfinite(pg)):
					raise NumericsError(
						"Non-finite gradient flowing out of node #{} ({})".format(node_id, node.Op),
						node=node_id
					)
				prev = grads.get(id(parent))
				grads[id(parent)] = pg if prev is None else prev + pg

	if parameters is not None:
		for p in parameters:
			key = parameter_key(p)
			if key not in result and p.RequiresGrad:
				result[key] = np.zeros_like(p.Data)

	return result


def grad(loss, parameters=None):
	'''
	Shortcut: build the graph of `loss` and run `backward()` on it.
	'''
	return backward(Graph(loss), loss, parameters)
