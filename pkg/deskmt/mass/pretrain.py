import logging

from ..config import Configurable
from ..exceptions import CorpusError
from ..log import LOG_NOTICE
from ..numerics import stream
from ..seq2seq.training import TrainConfig
from ..seq2seq.training import Trainer
from ..seq2seq.training import apply_gradients
from ..seq2seq.training import iterate_batches
from ..seq2seq.training import sequence_nll
from .objectives import mass_sup_loss
from .objectives import mass_unsup_loss

#

L = logging.getLogger(__name__)

#


class MassConfig(Configurable):

	ConfigDefaults = {
		'ratio': 0.5,
		'steps': 300,
		'batch_size': 16,
		'supervised': True,  # add the six-term bitext objective to the two monolingual ones
	}


	def __init__(self, config_section_name='mass', config=None):
		super().__init__(config_section_name, config=config)
		self.Ratio = self.Config.getfloat('ratio')
		self.Steps = self.Config.getint('steps')
		self.BatchSize = self.Config.getint('batch_size')
		self.Supervised = self.Config.getboolean('supervised')


def _cycle(items, batch_size, seed, name):
	epoch = 0
	while True:
		for batch in iterate_batches(items, batch_size, seed, (name, epoch)):
			yield batch
		epoch += 1


class MassPretrainer(object):
	'''
	Joint pre-training of one shared model: masked fragment prediction on both monolingual corpora,
	optionally plus the supervised objective on bitext; every step sums the losses of one batch of each.
	'''

	def __init__(self, model, config=None, train_config=None, seed=0):
		self.Model = model
		self.MassConfig = config if config is not None else MassConfig()
		self.TrainConfig = train_config if train_config is not None else TrainConfig()
		self.Seed = seed
		self.Optimizer = self.TrainConfig.optimizer(model.parameters())
		self.StepNo = 0


	def pretrain(self, mono_x, mono_y, bitext=None, steps=None):
		steps = self.MassConfig.Steps if steps is None else steps
		sources = [(name, corpus) for name, corpus in (('x', mono_x), ('y', mono_y)) if corpus is not None and len(corpus) > 0]
		use_bitext = self.MassConfig.Supervised and bitext is not None and len(bitext) > 0
		if len(sources) == 0 and not use_bitext:
			raise CorpusError("MASS pre-training needs monolingual or bilingual data")

		bs = self.MassConfig.BatchSize
		iterators = [(name, _cycle(corpus, bs, self.Seed, name)) for name, corpus in sources]
		bitext_iter = _cycle(bitext, bs, self.Seed, 'xy') if use_bitext else None

		losses = []
		for _ in range(steps):
			mask_rng = stream(self.Seed, 'mass.mask', self.StepNo)
			dropout_rng = stream(self.Seed, 'mass.dropout', self.StepNo)
			loss = None
			for name, it in iterators:
				term = mass_unsup_loss(self.Model, next(it), mask_rng, self.MassConfig.Ratio, training=True, dropout_rng=dropout_rng)
				loss = term if loss is None else loss + term
			if bitext_iter is not None:
				term = mass_sup_loss(self.Model, next(bitext_iter), mask_rng, self.MassConfig.Ratio, training=True, dropout_rng=dropout_rng)
				loss = term if loss is None else loss + term

			if not loss.RequiresGrad:
				# Every sentence of the batch was too short
				self.StepNo += 1
				continue
			losses.append(apply_gradients(loss, self.Model.parameters(), self.Optimizer))
			self.StepNo += 1
			if self.TrainConfig.LogEvery > 0 and self.StepNo % self.TrainConfig.LogEvery == 0:
				L.info("MASS pre-training", struct_data={'step': self.StepNo, 'loss': '{:.4f}'.format(losses[-1])})

		L.log(LOG_NOTICE, "MASS pre-training finished", struct_data={'steps': self.StepNo})
		return losses


	def finetune(self, bitext, steps=None):
		'''
		Ordinary supervised training of the pre-trained model; returns the trainer.
		'''
		trainer = Trainer(self.Model, self.TrainConfig, seed=self.Seed)
		trainer.train(bitext, steps=steps)
		return trainer


def dev_nll(model, dev_pairs):
	return float(sequence_nll(model, dev_pairs).Data)


def steps_to_threshold(model, train_pairs, dev_pairs, threshold, max_steps, eval_every=25, train_config=None, seed=0):
	'''
	Train on `train_pairs` until dev NLL <= `threshold`; returns the step count, or `max_steps + 1` when never reached.
	'''
	cfg = TrainConfig(config=dict(train_config.Config) if train_config is not None else None)
	cfg.EvalEvery = eval_every
	trainer = Trainer(model, cfg, seed=seed)
	reached = []

	def evaluate():
		return dev_nll(model, dev_pairs)

	def stop_when(value):
		if value <= threshold:
			reached.append(trainer.StepNo)
			return True
		return False

	if evaluate() <= threshold:
		return 0
	trainer.train(train_pairs, steps=max_steps, evaluate=evaluate, stop_when=stop_when)
	return reached[0] if len(reached) > 0 else max_steps + 1
