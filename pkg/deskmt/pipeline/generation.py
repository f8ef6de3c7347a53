'''
Synthetic corpora from model translations: noised back translation and sequence-level distillation.
'''

import logging

from ..exceptions import DecodeError
from ..madl.ensemble import AgentEnsemble
from ..madl.ensemble import combined_decode
from ..madl.ensemble import ensemble_translate
from ..numerics import stream
from ..rerank.rerank import RerankConfig
from ..rerank.rerank import rerank
from ..seq2seq.decoding import reusable_len
from ..seq2seq.decoding import score_batch
from ..seq2seq.decoding import translate
from ..seq2seq.vocabulary import strip_sequence
from .corpus import ParallelCorpus
from .noise import add_noise

#

L = logging.getLogger(__name__)

#


def translator(models, beam_size=5, length_penalty=1.0, max_len=None):
	'''
	A `sentence -> tokens` function for one model, a list of models (equal-weight ensemble)
	or an `AgentEnsemble`. Outputs are short enough to serve as training sources.
	'''
	if isinstance(models, (list, tuple)):
		models = models[0] if len(models) == 1 else AgentEnsemble(models, freeze=False)
	if isinstance(models, AgentEnsemble):
		ensemble = models
		max_len = reusable_len(ensemble.Models, max_len)

		def run(sentence):
			return ensemble_translate(ensemble, [sentence], beam_size, length_penalty, max_len)[0]
	else:
		model = models
		max_len = reusable_len([model], max_len)

		def run(sentence):
			return translate(model, [sentence], beam_size, length_penalty, max_len)[0]
	return run


def _translate_all(run, sentences, what, start=0):
	out = []
	for n, s in enumerate(sentences):
		try:
			out.append((n + start, strip_sequence(s), run(s)))
		except DecodeError as e:
			L.warning("Sentence skipped", struct_data={'stage': what, 'index': n + start, 'reason': str(e)})
	return out


def back_translate(model, mono, beam_size=5, noise=None, seed=0, start=0):
	'''
	Pairs (noised translation of y, y) for every monolingual target-language sentence y, tagged ``bt``.
	`model` translates in the reverse direction. Sentence `n` draws its noise from stream (seed, n + start),
	so shards give the same result as one pass.
	'''
	run = translator(model, beam_size)
	pairs = []
	for n, y, x_hat in _translate_all(run, mono, 'backtranslate', start):
		if noise is not None:
			x_hat = add_noise(x_hat, noise, stream(seed, 'bt.noise', n))
		pairs.append((x_hat, y))
	L.info("Back translation done", struct_data={'sentences': len(mono), 'pairs': len(pairs)})
	return ParallelCorpus(pairs, provenance='bt')


def distill(teachers, sources, beam_size=5):
	'''
	Pairs (x, teacher output for x), tagged ``kd``. Several teachers decode as an equal-weight ensemble.
	'''
	run = translator(teachers, beam_size)
	pairs = [(x, y_hat) for _, x, y_hat in _translate_all(run, sources, 'distill')]
	L.info("Distillation done", struct_data={'sentences': len(sources), 'pairs': len(pairs)})
	return ParallelCorpus(pairs, provenance='kd')


def reranked_distill(teachers, back_scorer, sources, beam_size=5, weight=0.5):
	'''
	Distillation whose targets are picked from the teachers' n-best by
	``(1 - weight) * log P(y | x) + weight * log P(x | y)``, the second term scored by `back_scorer`,
	a model of the reverse direction. Tagged ``kd``.
	'''
	ensemble = AgentEnsemble(list(teachers), freeze=False)
	max_len = reusable_len(ensemble.Models + [back_scorer])
	config = RerankConfig([1.0 - weight, weight])
	pairs = []
	for n, x in enumerate(sources):
		x = strip_sequence(x)
		try:
			if len(x) + 1 > back_scorer.ModelConfig.MaxLen:
				raise DecodeError("Source of length {} cannot be scored back".format(len(x)))
			nbest = combined_decode(ensemble, x, beam_size, max_len=max_len)
			entry = nbest[0]
			entry.Hypotheses = [h for h in entry.Hypotheses if len(h.Tokens) > 0]
			if len(entry.Hypotheses) == 0:
				raise DecodeError("Only empty hypotheses")
			back = score_batch(back_scorer, [(h.Tokens, x) for h in entry.Hypotheses])
		except DecodeError as e:
			L.warning("Sentence skipped", struct_data={'stage': 'distill', 'index': n, 'reason': str(e)})
			continue
		for h, b in zip(entry.Hypotheses, back):
			h.Scores = [h.LogProb, float(b)]
		pairs.append((x, rerank(nbest, config)[0].Tokens))
	L.info("Reranked distillation done", struct_data={'sentences': len(sources), 'pairs': len(pairs), 'weight': weight})
	return ParallelCorpus(pairs, provenance='kd')
