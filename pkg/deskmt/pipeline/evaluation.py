import logging

from ..rerank.bleu import corpus_bleu
from ..seq2seq.modelconfig import ModelConfig
from ..seq2seq.model import build_model
from ..seq2seq.genotype import transformer_genotype
from ..seq2seq.training import Trainer
from .generation import translator

#

L = logging.getLogger(__name__)

#


def evaluate_bleu(models, pairs, beam_size=1):
	'''
	Corpus BLEU of a model (or ensemble) on `(source, reference)` pairs.
	'''
	run = translator(models, beam_size)
	hyps = [run(x) for x, _ in pairs]
	return corpus_bleu(hyps, [y for _, y in pairs])


def train_model(pairs, model_config=None, train_config=None, seed=0, genotype=None, name='model', steps=None, reversed=False, pubsub=None, metrics=None):
	'''
	Build a model (Transformer unless `genotype` is given) and train it on `pairs`; returns the model.
	'''
	config = model_config if model_config is not None else ModelConfig()
	model = build_model(genotype if genotype is not None else transformer_genotype(config.Layers), config, seed, name=name)
	model.Reversed = reversed
	trainer = Trainer(model, train_config, seed=seed, pubsub=pubsub, metrics=metrics)
	trainer.train(list(pairs), steps=steps)
	return model


def best_model(models, dev_pairs, beam_size=1):
	'''
	The model with the highest dev BLEU (first one on ties), and its score.
	'''
	scores = [evaluate_bleu(m, dev_pairs, beam_size) for m in models]
	k = max(range(len(models)), key=lambda i: (scores[i], -i))
	return models[k], scores[k]