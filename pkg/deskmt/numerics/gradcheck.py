import logging

import numpy as np

from ..exceptions import NumericsError
from .autograd import parameter_key
from .autograd import grad

#

L = logging.getLogger(__name__)

#


def _value(x):
	if hasattr(x, 'Data'):
		return float(np.asarray(x.Data).reshape(()))
	return float(x)


def finite_difference_grad(loss_fn, params, eps=1e-5):
	'''
	Central-difference gradient estimate of `loss_fn()` with respect to every scalar of every tensor in `params`.

	`loss_fn` takes no arguments and reads the parameters it closes over; each scalar is perturbed in place
	and restored afterwards, so the parameters are unchanged on return.
	'''
	if eps <= 0:
		raise NumericsError("Finite difference step must be positive, got {}".format(eps))

	result = {}
	for p in params:
		estimate = np.zeros_like(p.Data)
		flat = p.Data.reshape(-1)
		out = estimate.reshape(-1)
		for i in range(flat.shape[0]):
			saved = flat[i]
			flat[i] = saved + eps
			plus = _value(loss_fn())
			flat[i] = saved - eps
			minus = _value(loss_fn())
			flat[i] = saved
			out[i] = (plus - minus) / (2.0 * eps)
		result[parameter_key(p)] = estimate
	return result


def relative_error(analytic, numeric):
	'''
	Norm-wise relative error over all keys of two gradient maps.
	'''
	keys = sorted(set(analytic) | set(numeric))
	a = np.concatenate([np.ravel(analytic.get(k, np.zeros_like(numeric.get(k)))) for k in keys]) if keys else np.zeros(0)
	n = np.concatenate([np.ravel(numeric.get(k, np.zeros_like(analytic.get(k)))) for k in keys]) if keys else np.zeros(0)
	denominator = max(np.linalg.norm(a), np.linalg.norm(n), 1e-12)
	return float(np.linalg.norm(a - n) / denominator)


def check_gradients(loss_fn, params, eps=1e-5):
	'''
	Compare `backward()` with central differences; returns `(relative error, analytic map, numeric map)`.
	'''
	params = list(params)
	analytic = grad(loss_fn(), params)
	analytic = {parameter_key(p): analytic.get(parameter_key(p), np.zeros_like(p.Data)) for p in params}
	numeric = finite_difference_grad(loss_fn, params, eps)
	err = relative_error(analytic, numeric)
	L.debug("Gradient check", struct_data={'params': len(params), 'rel_err': '{:.3e}'.format(err)})
	return err, analytic, numeric
