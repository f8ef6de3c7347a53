'''
Executes the stages of an experiment, seed by seed.

Each stage reads and replaces the models of a `RunState`; after every stage the current best
forward system is scored on dev and test and a row is added to the score table. With services
(see `ExperimentService`) the heavy work runs on the proactor's worker pool; without them it runs inline.
'''

import os
import logging

from ..exceptions import CorpusError
from ..exceptions import DeskMTError
from ..exceptions import StageError
from ..log import LOG_NOTICE
from ..log import run_log
from ..madl.ensemble import AgentEnsemble
from ..madl.objective import MadlCorpora
from ..madl.trainer import madl_train
from ..mass.pretrain import MassPretrainer
from ..nao.search import nao_search
from ..numerics import derive_seed
from ..pipeline.bpe import learn_bpe
from ..pipeline.corpus import MonoCorpus
from ..pipeline.corpus import ParallelCorpus
from ..pipeline.evaluation import best_model
from ..pipeline.evaluation import evaluate_bleu
from ..pipeline.evaluation import train_model
from ..pipeline.filtering import filter_corpus
from ..pipeline.filtering import write_drop_log
from ..pipeline.finetune import build_speculation_set
from ..pipeline.finetune import finetune_clean_subset
from ..pipeline.finetune import speculation_finetune
from ..pipeline.generation import back_translate
from ..pipeline.generation import distill
from ..pipeline.iterative import iterate_bt_kd
from ..pipeline.mixing import mix_corpora
from ..pipeline.tasks import make_task
from ..pipeline.text import normalize_text
from ..rerank.bleu import corpus_bleu
from ..rerank.nbest import write_nbest
from ..rerank.report import ScoreTable
from ..rerank.rerank import attach_scores
from ..rerank.rerank import rerank
from ..rerank.rerank import tune_rerank
from ..sca.augment import ScaLoss
from ..sca.lm import save_lm
from ..sca.lm import train_lm
from ..seq2seq.decoding import NBestList
from ..seq2seq.decoding import beam_search
from ..seq2seq.genotype import transformer_genotype
from ..seq2seq.model import build_model
from ..seq2seq.persist import save_model
from ..seq2seq.training import Trainer

#

L = logging.getLogger(__name__)

#


class RunState(object):
	'''
	Everything one seed's stages share.

	:ivar ForwardData: the corpus the current forward models were trained on (bitext, then mixed).
	:ivar Scorers: extra `(name, model, reversed)` reranking scorers (R2L, searched architecture).
	'''

	def __init__(self, seed, directory, bitext, mono_source, mono_target, dev, test, model_config, raw_bitext=None):
		self.Seed = seed
		self.Directory = directory
		self.Bitext = bitext
		self.RawBitext = raw_bitext
		self.MonoSource = mono_source
		self.MonoTarget = mono_target
		self.Dev = dev
		self.Test = test
		self.ModelConfig = model_config
		self.ForwardData = bitext
		self.ReverseData = bitext.reversed()
		self.Forward = []
		self.Reverse = []
		self.Scorers = []
		self.System = None


	@property
	def reverse_dev(self):
		return [(y, x) for x, y in self.Dev]


	def path(self, *names):
		return os.path.join(self.Directory, *names)


def _upsample_factor(bitext, synthetic):
	'''
	Bitext repetitions that bring it closest to a 1:1 ratio with the synthetic part.
	'''
	if len(bitext) == 0:
		return 1
	return max(1, int(round(len(synthetic) / float(len(bitext)))))


class ExperimentRunner(object):

	def __init__(self, experiment, pipeline=None, mass=None, madl=None, nao=None, pubsub=None):
		self.Experiment = experiment
		self.Settings = experiment.Experiment
		self.Pipeline = pipeline
		self.Mass = mass
		self.Madl = madl
		self.Nao = nao
		self.PubSub = pubsub
		self.TrainConfig = experiment.component('train')
		self.DecodeConfig = experiment.component('decode')
		self.Table = ScoreTable(self.Settings.Name)


	async def run(self):
		'''
		All stages for every seed; writes ``scores.tsv`` / ``scores.md`` and ``run.log``, returns the score table.
		'''
		os.makedirs(self.Settings.OutputDir, exist_ok=True)
		with open(os.path.join(self.Settings.OutputDir, 'experiment.ini'), 'w', encoding='utf-8') as f:
			f.write(self.Experiment.text())

		with run_log(self.Settings.OutputDir):
			for seed in self.Settings.Seeds:
				state = await self._stage('data', seed, self.prepare, seed)
				for stage in self.Settings.Stages:
					await self._stage(stage, seed, getattr(self, 'stage_' + stage), state)
				self._save_models(state)

		self.Table.write(self.Settings.OutputDir, 'scores')
		self._publish("Experiment.done!", self.Settings.Name, self.Table)
		L.log(LOG_NOTICE, "Experiment finished", struct_data={'name': self.Settings.Name, 'output': self.Settings.OutputDir})
		return self.Table


	async def _stage(self, stage, seed, func, *args):
		self._publish("Experiment.stage!", stage, seed)
		L.log(LOG_NOTICE, "Stage started", struct_data={'stage': stage, 'seed': seed})
		try:
			result = await func(*args)
		except StageError:
			raise
		except (DeskMTError, ValueError, KeyError, OSError) as e:
			L.error("Stage failed", struct_data={'stage': stage, 'seed': seed, 'reason': str(e)})
			raise StageError(str(e), stage) from e
		L.info("Stage finished", struct_data={'stage': stage, 'seed': seed})
		return result


	def _publish(self, message_type, *args):
		if self.PubSub is not None:
			self.PubSub.publish(message_type, *args)


	async def _execute(self, func, *args):
		if self.Pipeline is not None:
			return await self.Pipeline.run(func, *args)
		return func(*args)


	async def _train(self, state, pairs, name, key, reversed=False, genotype=None):
		seed = derive_seed(state.Seed, key)
		if self.Pipeline is not None:
			return await self.Pipeline.train(
				list(pairs), state.ModelConfig, self.TrainConfig, seed=seed, genotype=genotype, name=name, reversed=reversed
			)
		return train_model(
			list(pairs), state.ModelConfig, self.TrainConfig, seed=seed, genotype=genotype, name=name, reversed=reversed
		)


	async def _back_translate(self, model, mono, seed):
		noise = self.Experiment.component('noise')
		if self.Pipeline is not None:
			return await self.Pipeline.back_translate(model, mono, self.DecodeConfig.BeamSize, noise, seed)
		return back_translate(model, mono, self.DecodeConfig.BeamSize, noise, seed)


	async def _distill(self, teachers, sources):
		if self.Pipeline is not None:
			return await self.Pipeline.distill(teachers, sources, self.DecodeConfig.BeamSize)
		return distill(teachers, sources, self.DecodeConfig.BeamSize)


	async def _bleu(self, models, pairs):
		return await self._execute(evaluate_bleu, models, pairs, self.DecodeConfig.BeamSize)


	async def _record(self, state, system, models=None):
		'''
		Score `models` (default: the best current forward model on dev) and add the table row.
		'''
		if models is None:
			models, dev = await self._execute(best_model, state.Forward, state.Dev, self.DecodeConfig.BeamSize)
		else:
			dev = await self._bleu(models, state.Dev)
		test = await self._bleu(models, state.Test)
		self._add_row(state, system, dev, test)
		return models


	def _add_row(self, state, system, dev, test=None):
		self.Table.add(system, 'dev', dev)
		if test is not None:
			self.Table.add(system, 'test', test)
		state.System = system
		L.log(LOG_NOTICE, "Scored", struct_data={
			'system': system, 'seed': state.Seed, 'dev': '{:.2f}'.format(dev),
			'test': '-' if test is None else '{:.2f}'.format(test),
		})


	def _require(self, state, what):
		if len(state.Forward) == 0 or len(state.Reverse) == 0:
			raise CorpusError("'{}' needs forward and reverse models from an earlier stage (baseline or mass)".format(what))


	def _save_models(self, state):
		for model in state.Forward + state.Reverse + [m for _, m, _ in state.Scorers]:
			save_model(state.path(model.Name + '.ckpt'), model)

	# Data

	async def prepare(self, seed):
		data = self.Experiment.component('data')
		directory = os.path.join(self.Settings.OutputDir, 'seed{}'.format(seed))
		os.makedirs(directory, exist_ok=True)
		if data.Task == 'files':
			parts = await self._execute(_read_files, data, seed)
		else:
			task = make_task(
				data.Task, data.VocabSize, data.MinLen, data.MaxLen,
				data.Bitext, data.Mono, data.Dev, data.Test, data.Noisy, seed=seed,
			)
			parts = (task.Vocabulary, task.Bitext, task.MonoSource, task.MonoTarget, task.Dev, task.Test, None)

		vocabulary, bitext, mono_source, mono_target, dev, test, raw = parts
		vocabulary.save(os.path.join(directory, 'vocabulary.txt'))
		model_config = self.Experiment.component('model').replace(vocab_size=len(vocabulary))
		return RunState(seed, directory, bitext, mono_source, mono_target, dev, test, model_config, raw_bitext=raw)

	# Stages

	async def stage_filter(self, state):
		rules = self.Experiment.component('filter')
		source = state.RawBitext if state.RawBitext is not None else state.Bitext
		_, dropped = filter_corpus(source, rules)
		write_drop_log(state.path('dropped.tsv'), dropped)
		drop = set(d.line_no - 1 for d in dropped)
		state.Bitext = state.Bitext.subset([i for i in range(len(state.Bitext)) if i not in drop])
		if len(state.Bitext) == 0:
			raise CorpusError("Filtering dropped every pair")
		state.ForwardData = state.Bitext
		state.ReverseData = state.Bitext.reversed()


	async def stage_baseline(self, state):
		models = self.Settings.Models
		state.Forward = [await self._train(state, state.Bitext, 'forward{}'.format(k), ('baseline', 'forward', k)) for k in range(models)]
		state.Reverse = [await self._train(state, state.Bitext.reversed(), 'reverse{}'.format(k), ('baseline', 'reverse', k)) for k in range(models)]
		await self._record(state, 'baseline')


	async def stage_mass(self, state):
		mass_config = self.Experiment.component('mass')
		sides = (
			('forward', state.Bitext, state.MonoSource, state.MonoTarget),
			('reverse', state.Bitext.reversed(), state.MonoTarget, state.MonoSource),
		)
		trained = {}
		for direction, bitext, mono_x, mono_y in sides:
			trained[direction] = []
			for k in range(self.Settings.Models):
				seed = derive_seed(state.Seed, 'mass', direction, k)
				model = build_model(transformer_genotype(state.ModelConfig.Layers), state.ModelConfig, seed, name='{}{}'.format(direction, k))
				if self.Mass is not None:
					await self.Mass.pretrain(model, mono_x, mono_y, bitext.Pairs, mass_config, self.TrainConfig, seed)
				else:
					pretrainer = MassPretrainer(model, mass_config, self.TrainConfig, seed)
					pretrainer.pretrain(mono_x, mono_y, bitext.Pairs)
					pretrainer.finetune(bitext.Pairs)
				trained[direction].append(model)
		state.Forward = trained['forward']
		state.Reverse = trained['reverse']
		await self._record(state, '+mass')


	async def stage_bt(self, state):
		self._require(state, 'bt')
		reverse, _ = await self._execute(best_model, state.Reverse, state.reverse_dev, 1)
		forward, _ = await self._execute(best_model, state.Forward, state.Dev, 1)
		bt_forward = await self._back_translate(reverse, state.MonoTarget, derive_seed(state.Seed, 'bt', 'forward'))
		bt_reverse = await self._back_translate(forward, state.MonoSource, derive_seed(state.Seed, 'bt', 'reverse'))
		bt_forward.write_tsv(state.path('bt.tsv'), with_tags=True)

		state.ForwardData = mix_corpora(
			[(state.Bitext, _upsample_factor(state.Bitext, bt_forward)), (bt_forward, 1)], seed=derive_seed(state.Seed, 'mix', 'bt', 'forward')
		)
		state.ReverseData = mix_corpora(
			[(state.Bitext.reversed(), _upsample_factor(state.Bitext, bt_reverse)), (bt_reverse, 1)], seed=derive_seed(state.Seed, 'mix', 'bt', 'reverse')
		)
		await self._retrain(state, 'bt')
		await self._record(state, '+bt')


	async def stage_kd(self, state):
		self._require(state, 'kd')
		sources = MonoCorpus(state.Bitext.sources + list(state.MonoSource), 'src')
		targets = MonoCorpus(state.Bitext.targets + list(state.MonoTarget), 'tgt')
		kd_forward = await self._distill(state.Forward, sources)
		kd_reverse = await self._distill(state.Reverse, targets)
		kd_forward.write_tsv(state.path('kd.tsv'), with_tags=True)

		state.ForwardData = mix_corpora(
			[(state.Bitext, _upsample_factor(state.Bitext, kd_forward)), (kd_forward, 1)], seed=derive_seed(state.Seed, 'mix', 'kd', 'forward')
		)
		state.ReverseData = mix_corpora(
			[(state.Bitext.reversed(), _upsample_factor(state.Bitext, kd_reverse)), (kd_reverse, 1)], seed=derive_seed(state.Seed, 'mix', 'kd', 'reverse')
		)
		await self._retrain(state, 'kd')
		await self._record(state, '+kd')


	async def _retrain(self, state, stage):
		models = self.Settings.Models
		state.Forward = [
			await self._train(state, state.ForwardData.Pairs, '{}.forward{}'.format(stage, k), (stage, 'forward', k))
			for k in range(models)
		]
		state.Reverse = [
			await self._train(state, state.ReverseData.Pairs, '{}.reverse{}'.format(stage, k), (stage, 'reverse', k))
			for k in range(models)
		]


	async def stage_madl(self, state):
		self._require(state, 'madl')
		config = self.Experiment.component('madl')
		f_ensemble = AgentEnsemble(state.Forward)
		g_ensemble = AgentEnsemble(state.Reverse)
		corpora = MadlCorpora(state.Bitext.Pairs, list(state.MonoSource), list(state.MonoTarget))
		seed = derive_seed(state.Seed, 'madl')
		if self.Madl is not None:
			await self.Madl.train(f_ensemble, g_ensemble, corpora, config, self.TrainConfig, self.DecodeConfig, seed, state.Directory)
		else:
			madl_train(f_ensemble, g_ensemble, corpora, config, self.TrainConfig, self.DecodeConfig, seed, state.Directory)
		await self._record(state, '+madl', f_ensemble.trainable)


	async def stage_sca(self, state):
		self._require(state, 'sca')
		config = self.Experiment.component('sca')
		corpus = state.Bitext.sources + list(state.MonoSource)
		lm = await self._execute(
			lambda: train_lm(corpus, state.ModelConfig, self.TrainConfig, seed=derive_seed(state.Seed, 'sca', 'lm'))
		)
		save_lm(state.path('lm.ckpt'), lm)

		forward = []
		for k in range(self.Settings.Models):
			seed = derive_seed(state.Seed, 'sca', 'forward', k)
			model = build_model(transformer_genotype(state.ModelConfig.Layers), state.ModelConfig, seed, name='sca.forward{}'.format(k))
			trainer = Trainer(model, self.TrainConfig, seed=seed, loss_fn=ScaLoss(lm, config, seed))
			await self._execute(trainer.train, state.ForwardData.Pairs)
			forward.append(model)
		state.Forward = forward
		await self._record(state, '+sca')


	async def stage_iterative(self, state):
		self._require(state, 'iterative')
		config = self.Experiment.component('iterative')

		records = await self._execute(
			lambda: iterate_bt_kd(
				state.Bitext, state.MonoSource, state.MonoTarget, state.Dev, state.Forward, state.Reverse,
				config, state.ModelConfig, self.TrainConfig, derive_seed(state.Seed, 'iterative'),
			)
		)
		for record in records:
			self._add_row(state, 'round{}'.format(record.Round), record.ForwardBleu)
		state.Forward = records[-1].ForwardModels
		state.Reverse = records[-1].ReverseModels
		await self._record(state, '+iterative')


	async def stage_finetune(self, state):
		self._require(state, 'finetune')
		for k, model in enumerate(state.Forward):
			await self._execute(
				lambda: finetune_clean_subset(model, state.ForwardData, ('bitext',), self.TrainConfig, derive_seed(state.Seed, 'finetune', k))
			)
		await self._record(state, '+finetune')


	async def stage_speculation(self, state):
		self._require(state, 'speculation')
		config = self.Experiment.component('speculation')
		sources = [x for x, _ in state.Test]
		speculation = await self._execute(
			lambda: build_speculation_set(state.Forward, sources, state.Bitext.Pairs, derive_seed(state.Seed, 'speculation'), self.DecodeConfig.BeamSize)
		)
		model, _ = await self._execute(best_model, state.Forward, state.Dev, 1)
		await self._execute(
			lambda: speculation_finetune(model, speculation, state.Dev, self.TrainConfig, config.MaxEpochs, derive_seed(state.Seed, 'speculation', 'tune'))
		)
		await self._record(state, '+speculation', model)


	async def stage_r2l(self, state):
		self._require(state, 'r2l')
		models = [
			await self._train(state, state.ForwardData.Pairs, 'r2l{}'.format(k), ('r2l', k), reversed=True)
			for k in range(self.Settings.Models)
		]
		state.Scorers.extend(('r2l{}'.format(k), m, True) for k, m in enumerate(models))
		await self._record(state, 'r2l', models[0])


	async def stage_nao(self, state):
		self._require(state, 'nao')
		config = self.Experiment.component('nao')
		directory = state.path('nao')
		os.makedirs(directory, exist_ok=True)
		seed = derive_seed(state.Seed, 'nao')
		if self.Nao is not None:
			ranked = await self.Nao.search(state.ModelConfig, state.ForwardData.Pairs, state.Dev, config, seed, directory)
		else:
			ranked = nao_search(state.ModelConfig, state.ForwardData.Pairs, state.Dev, config, seed, directory)
		genotype = ranked[0].Genotype
		with open(os.path.join(directory, 'best_genotype.txt'), 'w', encoding='utf-8') as f:
			f.write(genotype.text() + '\n')
		model = await self._train(state, state.ForwardData.Pairs, 'nao', ('nao', 'model'), genotype=genotype)
		state.Scorers.append(('nao', model, False))
		await self._record(state, 'nao', model)


	async def stage_rerank(self, state):
		self._require(state, 'rerank')
		grid = self.Experiment.component('rerank')
		generator, _ = await self._execute(best_model, state.Forward, state.Dev, 1)
		scorers = [(generator, False)] + [(m, r) for _, m, r in state.Scorers]
		names = ['l2r'] + [n for n, _, _ in state.Scorers]

		def nbest(pairs):
			entries = NBestList()
			for x, _ in pairs:
				entries.extend(beam_search(generator, x, grid.Beam, self.DecodeConfig.LengthPenalty, self.DecodeConfig.MaxLen))
			return attach_scores(entries, scorers, names)

		dev_nbest = await self._execute(nbest, state.Dev)
		test_nbest = await self._execute(nbest, state.Test)
		write_nbest(state.path('dev.nbest'), dev_nbest)
		write_nbest(state.path('test.nbest'), test_nbest)
		config = tune_rerank(dev_nbest, [y for _, y in state.Dev], grid.weight_grid(len(scorers)), grid.LengthWeights)

		dev = corpus_bleu([h.Tokens for h in rerank(dev_nbest, config)], [y for _, y in state.Dev])
		test = corpus_bleu([h.Tokens for h in rerank(test_nbest, config)], [y for _, y in state.Test])
		self._add_row(state, '+rerank', dev, test)


	async def stage_ensemble(self, state):
		self._require(state, 'ensemble')
		await self._record(state, '+ensemble', AgentEnsemble(state.Forward, freeze=False))


def _read_files(data, seed):
	'''
	File corpora: NFKC-normalized text, one shared BPE over both languages, encoded to ids.
	'''
	files = data.Files
	for key in ('source_file', 'target_file', 'dev_file', 'test_file'):
		if len(files[key]) == 0:
			raise CorpusError("[data] task=files needs {}".format(key))
	raw = ParallelCorpus.read_aligned(files['source_file'], files['target_file']).map(normalize_text)
	mono_source = [normalize_text(s) for s in MonoCorpus.read(files['mono_source_file'], 'src')] if files['mono_source_file'] else []
	mono_target = [normalize_text(s) for s in MonoCorpus.read(files['mono_target_file'], 'tgt')] if files['mono_target_file'] else []
	bpe = learn_bpe([raw.sources + mono_source, raw.targets + mono_target], data.BpeMerges, shared=True, seed=seed)

	def encode(corpus):
		return [(bpe.encode(s), bpe.encode(t)) for s, t in corpus.map(normalize_text).Pairs]

	bitext = ParallelCorpus(encode(raw), tags=raw.Tags)
	dev = encode(ParallelCorpus.read_tsv(files['dev_file']))
	test = encode(ParallelCorpus.read_tsv(files['test_file']))
	return (
		bpe.Vocabulary, bitext,
		MonoCorpus([bpe.encode(s) for s in mono_source], 'src'),
		MonoCorpus([bpe.encode(s) for s in mono_target], 'tgt'),
		dev, test, raw,
	)
