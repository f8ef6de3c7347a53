import logging

import numpy as np

#

L = logging.getLogger(__name__)

#


def clip_by_global_norm(grads, max_norm):
	'''
	Scale all gradients so that their joint L2 norm is at most `max_norm`; returns the norm before clipping.
	'''
	norm = float(np.sqrt(sum(float((g * g).sum()) for g in grads.values())))
	if max_norm > 0 and norm > max_norm:
		scale = max_norm / norm
		for k in grads:
			grads[k] = grads[k] * scale
	return norm


class Adam(object):
	'''
	Adam with bias correction, updating parameter tensors in place.

	`parameters` is an iterable of tensors (a `Parameters` store works); gradients are matched by tensor name.
	'''

	def __init__(self, parameters, lr=5e-4, betas=(0.9, 0.98), eps=1e-8, clip_norm=0.0):
		self.Tensors = [t for t in parameters]
		self.LR = lr
		self.Beta1, self.Beta2 = betas
		self.Eps = eps
		self.ClipNorm = clip_norm
		self.StepCount = 0
		self.M = {}
		self.V = {}


	def step(self, grads):
		self.StepCount += 1
		if self.ClipNorm > 0:
			grads = dict(grads)
			clip_by_global_norm(grads, self.ClipNorm)

		c1 = 1.0 - self.Beta1 ** self.StepCount
		c2 = 1.0 - self.Beta2 ** self.StepCount
		for t in self.Tensors:
			g = grads.get(t.Name)
			if g is None or not t.RequiresGrad:
				continue
			m = self.M.get(t.Name)
			if m is None:
				m = np.zeros_like(t.Data)
				self.V[t.Name] = np.zeros_like(t.Data)
			v = self.V[t.Name]
			m = self.Beta1 * m + (1.0 - self.Beta1) * g
			v = self.Beta2 * v + (1.0 - self.Beta2) * g * g
			self.M[t.Name] = m
			self.V[t.Name] = v
			t.Data -= self.LR * (m / c1) / (np.sqrt(v / c2) + self.Eps)
