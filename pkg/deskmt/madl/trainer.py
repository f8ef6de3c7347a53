import os
import logging

import numpy as np

from ..config import Config
from ..config import Configurable
from ..exceptions import EnsembleError
from ..exceptions import MadlDivergence
from ..exceptions import NumericsError
from ..log import LOG_NOTICE
from ..numerics import Adam
from ..numerics import Graph
from ..numerics import backward
from ..numerics import stream
from ..seq2seq.decoding import DecodeConfig
from ..seq2seq.persist import save_model
from ..seq2seq.training import TrainConfig
from ..seq2seq.training import iterate_batches
from .objective import MadlCorpora
from .objective import madl_terms
from .objective import round_trip_sources

#

L = logging.getLogger(__name__)

#


class MadlConfig(Configurable):

	ConfigDefaults = {
		'epochs': 1,
		'batch_size': 16,
		'mono_batch_size': 16,
		'mono_fraction': 1.0,  # subsample of each monolingual set used per run
		'refresh_every_n_epochs': 0,  # 0 decodes the monolingual data once up front
	}


	def __init__(self, config_section_name='madl', config=None):
		super().__init__(config_section_name, config=config)
		self.Epochs = self.Config.getint('epochs')
		self.BatchSize = self.Config.getint('batch_size')
		self.MonoBatchSize = self.Config.getint('mono_batch_size')
		self.MonoFraction = self.Config.getfloat('mono_fraction')
		self.RefreshEveryNEpochs = self.Config.getint('refresh_every_n_epochs')
		if not (0.0 < self.MonoFraction <= 1.0):
			raise ValueError("mono_fraction must lie in (0, 1], got {}".format(self.MonoFraction))


def subsample(items, fraction, rng):
	'''
	`floor(fraction * n)` items drawn without replacement, kept in corpus order.
	'''
	if fraction >= 1.0:
		return list(items)
	n = int(np.floor(fraction * len(items)))
	index = np.sort(rng.choice(len(items), size=n, replace=False))
	return [items[i] for i in index]


def _all_finite(model):
	return all(np.all(np.isfinite(t.Data)) for t in model.parameters())


class MadlTrainer(object):
	'''
	Trains f0 and g0 on the dual-learning objective while every other agent stays frozen.

	One optimizer step per bitext batch; each step also consumes one batch of pseudo-pairs from
	each monolingual side. Progress is published as ``Madl.step!`` on the PubSub, if one is given.
	'''

	def __init__(self, f_ensemble, g_ensemble, config=None, train_config=None, decode_config=None, seed=0, output_dir=None, pubsub=None, metrics=None):
		self.F = f_ensemble
		self.G = g_ensemble
		self.MadlConfig = config if config is not None else MadlConfig()
		self.TrainConfig = train_config if train_config is not None else TrainConfig()
		self.DecodeConfig = decode_config if decode_config is not None else DecodeConfig()
		self.Seed = seed
		self.OutputDir = output_dir if output_dir is not None else Config['general']['output_dir']
		self.PubSub = pubsub
		self.Gauge = metrics.create_gauge('madl.loss') if metrics is not None else None

		f0 = self.F.trainable
		g0 = self.G.trainable
		if f0.Name == g0.Name:
			raise EnsembleError("The trainable agents need distinct names, both are '{}'".format(f0.Name))
		self.Optimizer = Adam(
			list(f0.parameters()) + list(g0.parameters()),
			lr=self.TrainConfig.LR, betas=self.TrainConfig.Betas,
			eps=self.TrainConfig.Eps, clip_norm=self.TrainConfig.ClipNorm
		)
		self.StepNo = 0
		self.History = []
		self._finite = None


	def _snapshot(self):
		self._finite = (self.F.trainable.Parameters.state(), self.G.trainable.Parameters.state())


	def _diverged(self, reason):
		f_state, g_state = self._finite
		self.F.trainable.Parameters.load_state(f_state)
		self.G.trainable.Parameters.load_state(g_state)
		os.makedirs(self.OutputDir, exist_ok=True)
		path = os.path.join(self.OutputDir, 'madl-last-finite-f0.ckpt')
		save_model(path, self.F.trainable, extra={'madl': 'step={}'.format(self.StepNo)})
		save_model(os.path.join(self.OutputDir, 'madl-last-finite-g0.ckpt'), self.G.trainable, extra={'madl': 'step={}'.format(self.StepNo)})
		L.error("Dual learning diverged", struct_data={'step': self.StepNo, 'reason': reason, 'checkpoint': path})
		raise MadlDivergence("Dual learning diverged at step {}: {}".format(self.StepNo, reason), checkpoint_path=path)


	def translate_mono(self, mono_x, mono_y):
		return {
			'x': round_trip_sources(self.F, mono_x, self.DecodeConfig),
			'y': round_trip_sources(self.G, mono_y, self.DecodeConfig),
		}


	def step(self, batch, translations):
		rng = stream(self.Seed, 'madl.dropout', self.StepNo)
		self._snapshot()
		try:
			terms = madl_terms(self.F, self.G, MadlCorpora(batch), self.DecodeConfig, rng, translations, training=True)
			values = list(terms.values())
			loss = values[0]
			for t in values[1:]:
				loss = loss + t
			value = float(loss.Data)
			if not np.isfinite(value):
				self._diverged("loss is {}".format(value))
			parameters = list(self.F.trainable.parameters()) + list(self.G.trainable.parameters())
			self.Optimizer.step(backward(Graph(loss), loss, parameters))
		except NumericsError as e:
			self._diverged(str(e))
		if not (_all_finite(self.F.trainable) and _all_finite(self.G.trainable)):
			self._diverged("non-finite parameters after the update")

		self.StepNo += 1
		self.History.append(value)
		if self.Gauge is not None:
			self.Gauge.set('loss', value)
		if self.PubSub is not None:
			self.PubSub.publish("Madl.step!", self.StepNo, value)
		if self.TrainConfig.LogEvery > 0 and self.StepNo % self.TrainConfig.LogEvery == 0:
			L.info("Dual learning", struct_data=dict(
				[('step', self.StepNo), ('loss', '{:.4f}'.format(value))] +
				[(k, '{:.4f}'.format(float(t.Data))) for k, t in terms.items()]
			))
		return value


	def train(self, corpora, epochs=None):
		'''
		Returns the trainable agents `(f0, g0)`; zero epochs leave them untouched.
		'''
		epochs = self.MadlConfig.Epochs if epochs is None else epochs
		cfg = self.MadlConfig
		pick = stream(self.Seed, 'madl.subsample')
		mono_x = subsample(corpora.MonoX, cfg.MonoFraction, pick)
		mono_y = subsample(corpora.MonoY, cfg.MonoFraction, pick)
		f_before = self.F.frozen_digest()
		g_before = self.G.frozen_digest()

		translations = None
		for epoch in range(epochs):
			refresh = cfg.RefreshEveryNEpochs
			if translations is None or (refresh > 0 and epoch % refresh == 0):
				translations = self.translate_mono(mono_x, mono_y)
				L.info("Monolingual data translated", struct_data={'epoch': epoch, 'x': len(mono_x), 'y': len(mono_y)})

			mono_batches = {
				side: list(iterate_batches(pairs, cfg.MonoBatchSize, self.Seed, ('madl', side, epoch))) if len(pairs) > 0 else []
				for side, pairs in translations.items()
			}
			for i, batch in enumerate(iterate_batches(corpora.Bitext, cfg.BatchSize, self.Seed, ('madl', epoch))):
				step_translations = {
					side: batches[i % len(batches)] if len(batches) > 0 else []
					for side, batches in mono_batches.items()
				}
				self.step(batch, step_translations)

		if self.F.frozen_digest() != f_before or self.G.frozen_digest() != g_before:
			raise EnsembleError("A frozen agent changed during dual learning")
		L.log(LOG_NOTICE, "Dual learning finished", struct_data={'steps': self.StepNo, 'epochs': epochs})
		return self.F.trainable, self.G.trainable


def madl_train(f_ensemble, g_ensemble, corpora, config=None, train_config=None, decode_config=None, seed=0, output_dir=None, epochs=None):
	trainer = MadlTrainer(f_ensemble, g_ensemble, config, train_config, decode_config, seed, output_dir)
	return trainer.train(corpora, epochs)
