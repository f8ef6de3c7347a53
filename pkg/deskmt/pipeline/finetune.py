import logging

from ..exceptions import CorpusError
from ..log import LOG_NOTICE
from ..numerics import stream
from ..seq2seq.training import Trainer
from .corpus import ParallelCorpus
from .evaluation import evaluate_bleu
from .generation import distill

#

L = logging.getLogger(__name__)

#


def finetune_clean_subset(model, corpus, clean_tags=('bitext',), train_config=None, seed=0):
	'''
	Exactly one epoch over the pairs of `corpus` whose provenance is in `clean_tags`.
	Returns `(model, epochs)`.
	'''
	clean = corpus.tagged(*clean_tags)
	if len(clean) == 0:
		raise CorpusError("No pairs tagged {} to fine-tune on".format(', '.join(clean_tags)))
	trainer = Trainer(model, train_config, seed=seed)
	steps = trainer.train_epoch(clean.Pairs)
	L.log(LOG_NOTICE, "Clean-subset fine-tuning done", struct_data={'pairs': len(clean), 'steps': steps, 'epochs': trainer.EpochNo})
	return model, trainer.EpochNo


def build_speculation_set(models, test_sources, bitext, seed=0, beam_size=5):
	'''
	Distillation of the test sources by each of the M models plus as many bitext pairs, sampled uniformly
	(without replacement when the bitext is large enough), all tagged ``speculation``.

	A test source a model cannot decode (e.g. longer than its max length) is left out with a warning, so
	N_T counts the decodable sources and the set always holds 2 * N_T * M pairs.
	'''
	models = list(models)
	if len(models) < 1 or len(test_sources) < 1:
		raise CorpusError("Speculation needs at least one model and one test source")
	if len(bitext) == 0:
		raise CorpusError("Speculation needs a bitext to sample from")
	pairs = []
	for model in models:
		pairs.extend(distill([model], test_sources, beam_size).Pairs)
	expected = len(test_sources) * len(models)
	if len(pairs) < expected:
		L.warning("Test sources left out of speculation", struct_data={'distilled': len(pairs), 'expected': expected})
	if len(pairs) == 0:
		raise CorpusError("No test source could be distilled for speculation")

	need = len(pairs)
	rng = stream(seed, 'speculation')
	replace = len(bitext) < need
	index = rng.choice(len(bitext), size=need, replace=replace)
	pairs.extend(bitext[int(i)] for i in index)
	L.info("Speculation set built", struct_data={'distilled': need, 'sampled': need, 'with_replacement': replace})
	return ParallelCorpus(pairs, provenance='speculation')


def speculation_finetune(model, speculation, dev, train_config=None, max_epochs=10, seed=0):
	'''
	Epochs of fine-tuning on the speculation set with dev BLEU after each; stops at the first drop and
	restores the best state. Returns `(model, dev BLEU history)`, history[0] being the score before tuning.
	'''
	trainer = Trainer(model, train_config, seed=seed)
	best = evaluate_bleu(model, dev)
	best_state = model.Parameters.state()
	history = [best]
	for epoch in range(max_epochs):
		trainer.train_epoch(speculation.Pairs)
		score = evaluate_bleu(model, dev)
		history.append(score)
		if score < history[-2]:
			L.info("Dev BLEU dropped, speculation tuning stopped", struct_data={'epoch': epoch + 1, 'bleu': '{:.2f}'.format(score)})
			break
		if score > best:
			best = score
			best_state = model.Parameters.state()
	model.Parameters.load_state(best_state)
	return model, history
