import logging

import numpy as np

from ..config import Configurable
from ..exceptions import CorpusError
from ..exceptions import NumericsError
from ..log import LOG_NOTICE
from ..numerics import Adam
from ..numerics import Graph
from ..numerics import backward
from ..numerics import stream
from ..numerics import token_logprobs

#

L = logging.getLogger(__name__)

#


class TrainConfig(Configurable):

	ConfigDefaults = {
		'lr': 5e-4,
		'beta1': 0.9,
		'beta2': 0.98,
		'eps': 1e-8,
		'clip_norm': 0.0,
		'batch_size': 16,
		'steps': 1000,
		'log_every': 100,
		'eval_every': 0,  # 0 disables dev evaluation during training
	}


	def __init__(self, config_section_name='train', config=None):
		super().__init__(config_section_name, config=config)
		self.LR = self.Config.getfloat('lr')
		self.Betas = (self.Config.getfloat('beta1'), self.Config.getfloat('beta2'))
		self.Eps = self.Config.getfloat('eps')
		self.ClipNorm = self.Config.getfloat('clip_norm')
		self.BatchSize = self.Config.getint('batch_size')
		self.Steps = self.Config.getint('steps')
		self.LogEvery = self.Config.getint('log_every')
		self.EvalEvery = self.Config.getint('eval_every')


	def optimizer(self, parameters):
		return Adam(parameters, lr=self.LR, betas=self.Betas, eps=self.Eps, clip_norm=self.ClipNorm)


def sequence_nll(model, pairs, training=False, rng=None, source_embedded=None, target_embedded=None):
	'''
	-(1/|B|) sum over the batch of log P(y|x), teacher forced.
	'''
	if len(pairs) == 0:
		raise CorpusError("Empty batch")
	logits, gold, _ = model.teacher_forcing(
		pairs, training=training, rng=rng,
		source_embedded=source_embedded, target_embedded=target_embedded
	)
	return token_logprobs(logits, gold).sum() * (-1.0 / len(pairs))


def apply_gradients(loss, parameters, optimizer):
	'''
	Backward pass and one optimizer step; returns the loss value.
	'''
	value = float(loss.Data)
	if not np.isfinite(value):
		raise NumericsError("Non-finite loss {}".format(value))
	grads = backward(Graph(loss), loss, parameters)
	optimizer.step(grads)
	return value


def train_step(model, batch, optimizer, rng=None):
	'''
	One Adam step on the teacher-forced mean NLL of `batch`; returns the loss before the update.
	'''
	loss = sequence_nll(model, batch, training=rng is not None, rng=rng)
	return apply_gradients(loss, model.parameters(), optimizer)


def reverse_targets(pairs):
	return [(s, list(t)[::-1]) for s, t in pairs]


def iterate_batches(pairs, batch_size, seed, epoch):
	'''
	One epoch of shuffled batches; the order depends only on (seed, epoch).
	'''
	order = stream(seed, 'batches', epoch).permutation(len(pairs))
	for start in range(0, len(order), batch_size):
		yield [pairs[i] for i in order[start:start + batch_size]]


class Trainer(object):
	'''
	Step loop over a list of (source, target) id pairs.

	Progress is logged with structured data and published as ``Train.step!`` on the PubSub, if one is given.
	A right-to-left model (`model.Reversed`) is trained on reversed targets.
	'''

	def __init__(self, model, config=None, seed=0, pubsub=None, metrics=None, loss_fn=None):
		self.Model = model
		self.TrainConfig = config if config is not None else TrainConfig()
		self.Seed = seed
		self.PubSub = pubsub
		self.Gauge = metrics.create_gauge('train.loss', tags={'model': model.Name}) if metrics is not None else None
		self.Optimizer = self.TrainConfig.optimizer(model.parameters())
		self.LossFn = loss_fn if loss_fn is not None else sequence_nll
		self.StepNo = 0
		self.EpochNo = 0
		self.History = []


	def _epoch_batches(self, pairs):
		if self.Model.Reversed:
			pairs = reverse_targets(pairs)
		return iterate_batches(pairs, self.TrainConfig.BatchSize, self.Seed, self.EpochNo)


	def step(self, batch):
		rng = stream(self.Seed, 'dropout', self.StepNo)
		loss = self.LossFn(self.Model, batch, training=True, rng=rng)
		value = apply_gradients(loss, self.Model.parameters(), self.Optimizer)
		self.StepNo += 1
		self.History.append(value)

		if self.Gauge is not None:
			self.Gauge.set('loss', value)
			self.Gauge.set('lr', self.TrainConfig.LR)
		if self.PubSub is not None:
			self.PubSub.publish("Train.step!", self.Model.Name, self.StepNo, value)
		if self.TrainConfig.LogEvery > 0 and self.StepNo % self.TrainConfig.LogEvery == 0:
			L.info("Training", struct_data={'model': self.Model.Name, 'step': self.StepNo, 'loss': '{:.4f}'.format(value)})
		return value


	def train_epoch(self, pairs):
		'''
		Exactly one pass over `pairs`; returns the number of steps taken.
		'''
		if len(pairs) == 0:
			raise CorpusError("Cannot train on an empty corpus")
		steps = 0
		for batch in self._epoch_batches(pairs):
			self.step(batch)
			steps += 1
		self.EpochNo += 1
		return steps


	def train(self, pairs, steps=None, evaluate=None, stop_when=None):
		'''
		Run `steps` optimizer steps (default from config), cycling epochs.

		`evaluate()` is called every `eval_every` steps; `stop_when(value)` returning True ends training early.
		Returns the number of steps taken.
		'''
		if len(pairs) == 0:
			raise CorpusError("Cannot train on an empty corpus")
		steps = self.TrainConfig.Steps if steps is None else steps
		taken = 0
		while taken < steps:
			for batch in self._epoch_batches(pairs):
				self.step(batch)
				taken += 1
				if evaluate is not None and self.TrainConfig.EvalEvery > 0 and taken % self.TrainConfig.EvalEvery == 0:
					value = evaluate()
					L.log(LOG_NOTICE, "Dev evaluation", struct_data={'model': self.Model.Name, 'step': taken, 'value': '{:.4f}'.format(value)})
					if stop_when is not None and stop_when(value):
						return taken
				if taken >= steps:
					break
			self.EpochNo += 1
		return taken
