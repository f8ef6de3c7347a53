import logging
import itertools

import numpy as np

from ..config import Configurable
from ..exceptions import RerankError
from ..exceptions import VocabularyError
from ..seq2seq.decoding import score_batch
from .bleu import corpus_bleu

#

L = logging.getLogger(__name__)

#


class RerankConfig(object):
	'''
	Linear reranker: score = sum_k Weights[k] * s_k + LengthWeight * len.
	'''

	def __init__(self, weights, length_weight=0.0):
		self.Weights = [float(w) for w in weights]
		self.LengthWeight = float(length_weight)
		if len(self.Weights) == 0 or all(w == 0.0 for w in self.Weights):
			raise RerankError("A rerank config needs at least one non-zero weight")


	def __eq__(self, other):
		return isinstance(other, RerankConfig) and self.Weights == other.Weights and self.LengthWeight == other.LengthWeight


	def __repr__(self):
		return "<RerankConfig weights={} length_weight={}>".format(self.Weights, self.LengthWeight)


class RerankGrid(Configurable):
	'''
	Search grid of `tune_rerank()`: per-scorer weight values and length weights.
	'''

	ConfigDefaults = {
		'weights': '0.0 0.5 1.0',
		'length_weights': '0.0 0.5 1.0',
		'beam': 12,
	}


	def __init__(self, config_section_name='rerank', config=None):
		super().__init__(config_section_name, config=config)
		self.WeightValues = [float(w) for w in self.Config.getlist('weights')]
		self.LengthWeights = [float(w) for w in self.Config.getlist('length_weights')]
		self.Beam = self.Config.getint('beam')


	def weight_grid(self, scorer_count):
		'''
		Cartesian product of weight values, all-zero vectors excluded, lexicographic order.
		'''
		values = sorted(set(self.WeightValues))
		return [list(w) for w in itertools.product(values, repeat=scorer_count) if any(v != 0.0 for v in w)]


def _choose(hypotheses, config):
	if len(hypotheses) == 0:
		raise RerankError("Empty hypothesis set")
	best = None
	best_value = None
	for index, h in enumerate(hypotheses):
		if len(h.Scores) != len(config.Weights):
			raise RerankError("Hypothesis carries {} scores, config has {} weights".format(len(h.Scores), len(config.Weights)))
		value = sum(w * s for w, s in zip(config.Weights, h.Scores)) + config.LengthWeight * len(h.Tokens)
		# Strictly better only: ties keep the lowest index
		if best_value is None or value > best_value:
			best = h
			best_value = value
	return best


def rerank(nbest, config):
	'''
	One hypothesis per source sentence.
	'''
	return [_choose(entry.Hypotheses, config) for entry in nbest]


def attach_scores(nbest, scorers, names=None):
	'''
	Append one log-probability per scorer to every hypothesis.
	`scorers` is a list of `(model, reversed)`; a reversed scorer reads hypotheses right to left.
	'''
	sizes = set(model.vocab_size for model, _ in scorers)
	if len(sizes) > 1:
		raise VocabularyError("Scorers disagree on vocabulary size: {}".format(sorted(sizes)))

	for k, (model, reverse) in enumerate(scorers):
		for entry in nbest:
			if len(entry.Hypotheses) == 0:
				continue
			pairs = [
				(entry.Source, (h.Tokens[::-1] if reverse else h.Tokens))
				for h in entry.Hypotheses
			]
			values = score_batch(model, pairs)
			for h, v in zip(entry.Hypotheses, values):
				h.Scores.append(float(v))
		nbest.ScorerNames.append(names[k] if names is not None else 'scorer{}'.format(len(nbest.ScorerNames)))
	return nbest


def tune_rerank(nbest, references, weight_grid, length_grid):
	'''
	Exhaustive grid search for the config maximizing corpus BLEU of the reranked output.
	Candidates are visited by ascending length weight, then lexicographic weights; only strictly better ones replace the best.
	'''
	if len(weight_grid) == 0 or len(length_grid) == 0:
		raise RerankError("Rerank grids must be non-empty")

	best = None
	best_bleu = None
	for lw in sorted(length_grid):
		for weights in sorted([list(w) for w in weight_grid]):
			if all(w == 0.0 for w in weights):
				continue
			config = RerankConfig(weights, lw)
			bleu = corpus_bleu([h.Tokens for h in rerank(nbest, config)], references)
			if best_bleu is None or bleu > best_bleu:
				best = config
				best_bleu = bleu

	if best is None:
		raise RerankError("Weight grid has no non-zero weight vector")
	L.info("Rerank tuned", struct_data={'weights': best.Weights, 'length_weight': best.LengthWeight, 'bleu': '{:.2f}'.format(best_bleu)})
	return best


def unit_vectors(n):
	return [list(v) for v in np.eye(n)]
