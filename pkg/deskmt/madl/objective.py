import logging
import collections

import numpy as np

from ..exceptions import CorpusError
from ..exceptions import EnsembleError
from ..numerics import Tensor
from ..numerics import token_logprobs
from ..seq2seq.decoding import DecodeConfig
from ..seq2seq.decoding import reusable_len
from ..seq2seq.decoding import score_batch
from ..seq2seq.training import sequence_nll
from ..seq2seq.vocabulary import strip_sequence
from .ensemble import ensemble_translate

#

L = logging.getLogger(__name__)

#

TERMS = ('bitext_f', 'bitext_g', 'reconstruct_x', 'reconstruct_y')


class MadlCorpora(object):
	'''
	Bitext `(x, y)` pairs plus the two monolingual sets; only the bitext must be non-empty.
	'''

	def __init__(self, bitext, mono_x=None, mono_y=None):
		self.Bitext = list(bitext)
		self.MonoX = list(mono_x) if mono_x is not None else []
		self.MonoY = list(mono_y) if mono_y is not None else []
		if len(self.Bitext) == 0:
			raise CorpusError("Dual learning needs a non-empty bitext")


def round_trip_sources(ensemble, sentences, decode_config=None):
	'''
	Translate each sentence with the combined `ensemble`, outside of any gradient tape.
	Returns `[(translation, original)]`, i.e. the pseudo-pairs scored by the reverse direction.
	'''
	dc = decode_config if decode_config is not None else DecodeConfig()
	sentences = [strip_sequence(s) for s in sentences]
	max_len = reusable_len(ensemble.Models, dc.MaxLen)
	translations = ensemble_translate(ensemble, sentences, dc.BeamSize, dc.LengthPenalty, max_len)
	return list(zip(translations, sentences))


def reconstruction_term(ensemble, pseudo_pairs, training=False, rng=None):
	'''
	-(1/|M|) sum of the combined reconstruction score sum_j w_j log P(x | x_hat; g_j).

	Only the trainable agent (index 0) is on the tape, scaled by its weight; the frozen agents
	enter as constants, so they move the value but never the gradient.
	'''
	if len(pseudo_pairs) == 0:
		return None
	n = len(pseudo_pairs)
	trainable = ensemble.Models[0]
	logits, gold, _ = trainable.teacher_forcing(pseudo_pairs, training=training, rng=rng)
	term = token_logprobs(logits, gold).sum() * (-ensemble.Weights[0] / n)

	frozen = 0.0
	for model, weight in zip(ensemble.Models[1:], ensemble.Weights[1:]):
		if weight == 0.0:
			continue
		frozen += weight * float(np.sum(score_batch(model, pseudo_pairs)))
	if frozen != 0.0:
		term = term + Tensor(-frozen / n)
	return term


def madl_terms(f_ensemble, g_ensemble, corpora, decode_config=None, rng=None, translations=None, training=False):
	'''
	The four dual-learning terms: bitext NLL of f0 and of g0, then the x -> y -> x and y -> x -> y
	reconstruction terms. Empty monolingual sets contribute no term.

	`translations` may carry precomputed pseudo-pairs `{'x': [(y_hat, x)], 'y': [(x_hat, y)]}`.
	'''
	if len(corpora.Bitext) == 0:
		raise CorpusError("Dual learning needs a non-empty bitext")
	if f_ensemble.vocab_size != g_ensemble.vocab_size:
		raise EnsembleError("Forward and backward ensembles use different vocabularies")

	if translations is None:
		translations = {
			'x': round_trip_sources(f_ensemble, corpora.MonoX, decode_config),
			'y': round_trip_sources(g_ensemble, corpora.MonoY, decode_config),
		}

	terms = collections.OrderedDict()
	terms['bitext_f'] = sequence_nll(f_ensemble.trainable, corpora.Bitext, training=training, rng=rng)
	terms['bitext_g'] = sequence_nll(g_ensemble.trainable, [(y, x) for x, y in corpora.Bitext], training=training, rng=rng)
	rx = reconstruction_term(g_ensemble, translations.get('x', []), training=training, rng=rng)
	if rx is not None:
		terms['reconstruct_x'] = rx
	ry = reconstruction_term(f_ensemble, translations.get('y', []), training=training, rng=rng)
	if ry is not None:
		terms['reconstruct_y'] = ry
	return terms


def madl_loss(f_ensemble, g_ensemble, corpora, decode_config=None, rng=None, translations=None, training=False):
	'''
	Sum of `madl_terms`; gradients reach only the parameters of f0 and g0.
	'''
	terms = list(madl_terms(f_ensemble, g_ensemble, corpora, decode_config, rng, translations, training).values())
	loss = terms[0]
	for t in terms[1:]:
		loss = loss + t
	return loss
