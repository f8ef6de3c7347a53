'''
Gradient suite: analytic gradients of every training objective against central differences,
on models small enough (about 2k parameters) for the finite differences to finish quickly.
'''

import logging
import collections

from ..madl.ensemble import AgentEnsemble
from ..madl.objective import MadlCorpora
from ..madl.objective import madl_terms
from ..mass.objectives import mass_sup_loss
from ..mass.objectives import mass_unsup_loss
from ..nao.archseq import encode_genotype
from ..nao.surrogate import Surrogate
from ..numerics import check_gradients
from ..numerics import stream
from ..sca.augment import ScaConfig
from ..sca.augment import sca_loss
from ..sca.lm import CausalLM
from ..seq2seq.genotype import random_genotype
from ..seq2seq.genotype import transformer_genotype
from ..seq2seq.model import build_model
from ..seq2seq.modelconfig import ModelConfig
from ..seq2seq.training import sequence_nll

#

L = logging.getLogger(__name__)

#

TOLERANCE = 1e-4
OBJECTIVES = ('nll', 'mass_unsup', 'mass_sup', 'madl_bitext', 'sca', 'nao_predictor')


def tiny_config(vocab_size=10):
	return ModelConfig(config={
		'vocab_size': vocab_size, 'd_model': 8, 'n_heads': 2, 'd_ffn': 16, 'layers': 1,
		'dropout': 0.0, 'max_len': 16, 'activation': 'tanh',
	})


def _sentences(rng, count, vocab_size, low=4, high=7):
	return [[int(t) for t in rng.integers(7, vocab_size, size=int(rng.integers(low, high)))] for _ in range(count)]


def _model(config, seed, name='model'):
	return build_model(transformer_genotype(config.Layers), config, seed, name=name)


def objective_check(name, seed=0, eps=1e-5):
	'''
	`(relative error, parameter count)` of one objective's gradient check.
	'''
	config = tiny_config()
	rng = stream(seed, 'gradsuite', name)
	xs = _sentences(rng, 2, config.VocabSize)
	ys = _sentences(rng, 2, config.VocabSize)
	pairs = list(zip(xs, ys))

	if name == 'nll':
		model = _model(config, seed)
		params = list(model.parameters())

		def loss():
			return sequence_nll(model, pairs)

	elif name == 'mass_unsup':
		model = _model(config, seed)
		params = list(model.parameters())

		def loss():
			return mass_unsup_loss(model, xs, stream(seed, 'gradsuite.mask'))

	elif name == 'mass_sup':
		model = _model(config, seed)
		params = list(model.parameters())

		def loss():
			return mass_sup_loss(model, pairs, stream(seed, 'gradsuite.mask'))

	elif name == 'madl_bitext':
		f = AgentEnsemble([_model(config, seed, 'f0')], freeze=False)
		g = AgentEnsemble([_model(config, seed + 1, 'g0')], freeze=False)
		params = list(f.trainable.parameters()) + list(g.trainable.parameters())
		corpora = MadlCorpora(pairs)

		def loss():
			terms = madl_terms(f, g, corpora)
			return terms['bitext_f'] + terms['bitext_g']

	elif name == 'sca':
		model = _model(config, seed)
		lm = CausalLM(config, seed + 1, name='lm')
		params = list(model.parameters())
		sca = ScaConfig(config={'gamma': 0.5})

		def loss():
			return sca_loss(model, pairs, lm, sca, rng=stream(seed, 'gradsuite.sca'))

	elif name == 'nao_predictor':
		surrogate = Surrogate(1, d_arch=8, predictor_hidden=8, trade_off=0.8, seed=seed)
		params = list(surrogate.parameters())
		pick = stream(seed, 'gradsuite.arch')
		seqs = [encode_genotype(random_genotype(1, pick)) for _ in range(3)]
		targets = [0.2, 0.5, 0.9]

		def loss():
			return surrogate.loss(seqs, targets)

	else:
		raise KeyError("Unknown objective '{}', expected one of {}".format(name, ', '.join(OBJECTIVES)))

	err, _, _ = check_gradients(loss, params, eps)
	return err, sum(p.Data.size for p in params)


def gradient_suite(seed=0, eps=1e-5, objectives=OBJECTIVES):
	'''
	Ordered `{objective: (relative error, parameter count)}`.
	'''
	results = collections.OrderedDict()
	for name in objectives:
		results[name] = objective_check(name, seed, eps)
		L.info("Gradient check", struct_data={'objective': name, 'rel_err': '{:.3e}'.format(results[name][0]), 'params': results[name][1]})
	return results
