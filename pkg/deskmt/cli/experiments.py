'''
Directional experiments: the orderings the submitted systems showed at scale (dual learning over
back translation, pre-training over cold start, ...), replayed on the synthetic tasks.

Every driver returns plain numbers (artifacts of experiment runs go under `output_dir`); they run for minutes
to hours on one CPU, and their tests only run with ``DESKMT_SLOW=1``.
'''

import os
import asyncio
import logging
import statistics

from ..log import LOG_NOTICE
from ..mass.pretrain import MassPretrainer
from ..mass.pretrain import MassConfig
from ..mass.pretrain import dev_nll
from ..mass.pretrain import steps_to_threshold
from ..nao.search import NaoConfig
from ..nao.search import nao_search
from ..numerics import derive_seed
from ..pipeline.evaluation import train_model
from ..pipeline.tasks import make_task
from ..rerank.bleu import corpus_bleu
from ..rerank.rerank import RerankGrid
from ..rerank.rerank import attach_scores
from ..rerank.rerank import rerank
from ..rerank.rerank import tune_rerank
from ..seq2seq.decoding import NBestList
from ..seq2seq.decoding import beam_search
from ..seq2seq.genotype import transformer_genotype
from ..seq2seq.model import build_model
from ..seq2seq.modelconfig import ModelConfig
from ..seq2seq.training import TrainConfig
from .experiment import ExperimentConfig
from .runner import ExperimentRunner

#

L = logging.getLogger(__name__)

#

TOY_MODEL = {
	'd_model': 32,
	'n_heads': 4,
	'd_ffn': 64,
	'layers': 2,
	'dropout': 0.1,
	'max_len': 24,
}

TOY_TRAIN = {
	'lr': 1e-3,
	'batch_size': 16,
	'steps': 1500,
	'log_every': 0,
}

REVERSAL_DATA = {
	'task': 'reverse',
	'vocab_size': 20,
	'min_len': 3,
	'max_len': 12,
	'bitext': 500,
	'mono': 5000,
	'dev': 100,
	'test': 100,
}


def _seeds(seeds):
	return ' '.join(str(s) for s in seeds)


def run_experiment(sections, output_dir):
	'''
	Run an experiment given as `{section: {key: value}}` without services; returns the score table.
	'''
	sections = {name: dict(values) for name, values in sections.items()}
	sections.setdefault('experiment', {})['output_dir'] = output_dir
	experiment = ExperimentConfig(sections)
	loop = asyncio.new_event_loop()
	try:
		return loop.run_until_complete(ExperimentRunner(experiment).run())
	finally:
		loop.close()


def _sections(name, stages, seeds, data=None, model=None, train=None, **extra):
	sections = {
		'experiment': {'name': name, 'stages': stages, 'seeds': _seeds(seeds)},
		'data': dict(REVERSAL_DATA, **(data or {})),
		'model': dict(TOY_MODEL, **(model or {})),
		'train': dict(TOY_TRAIN, **(train or {})),
		'decode': {'beam_size': 1},
	}
	sections.update(extra)
	return sections


def copy_convergence(output_dir, seed=0, steps=3000):
	'''
	Test BLEU of a 2-layer model trained `steps` steps on the copy task (vocabulary 20, length <= 12).
	'''
	table = run_experiment(
		_sections('copy', 'baseline', [seed], data={'task': 'copy', 'mono': 0}, train={'steps': steps}),
		os.path.join(output_dir, 'copy'),
	)
	return table.mean('baseline', 'test')


def dual_learning_ordering(output_dir, seeds=(0, 1, 2)):
	'''
	Mean dev BLEU of baseline, +BT and +MADL on the reversal task with 500 bitext and 5k monolingual pairs.
	'''
	table = run_experiment(
		_sections('reversal-madl', 'baseline bt madl', seeds, madl={'epochs': 1}),
		os.path.join(output_dir, 'reversal-madl'),
	)
	result = {system: table.mean(system, 'dev') for system in ('baseline', '+bt', '+madl')}
	L.log(LOG_NOTICE, "Dual learning ordering", struct_data={k: '{:.2f}'.format(v) for k, v in result.items()})
	return result


def pretraining_speedup(seeds=(0, 1, 2), threshold=4.0, max_steps=2000, pretrain_steps=300):
	'''
	Steps until dev NLL (per sentence) reaches `threshold`, from a cold start and after MASS pre-training.
	Returns `(cold steps, pre-trained steps)`, one entry per seed.
	'''
	cold = []
	warm = []
	model_config = ModelConfig(config=dict(TOY_MODEL, vocab_size=REVERSAL_DATA['vocab_size']))
	train_config = TrainConfig(config=TOY_TRAIN)
	for seed in seeds:
		task = make_task('reverse', bitext=REVERSAL_DATA['bitext'], mono=REVERSAL_DATA['mono'], dev=REVERSAL_DATA['dev'], seed=seed)
		bitext = task.Bitext.Pairs
		genotype = transformer_genotype(model_config.Layers)

		model = build_model(genotype, model_config, derive_seed(seed, 'cold'), name='cold')
		cold.append(steps_to_threshold(model, bitext, task.Dev, threshold, max_steps, train_config=train_config, seed=seed))

		model = build_model(genotype, model_config, derive_seed(seed, 'cold'), name='mass')
		MassPretrainer(model, MassConfig(config={'steps': pretrain_steps}), train_config, seed).pretrain(
			list(task.MonoSource), list(task.MonoTarget), bitext
		)
		L.info("Pre-trained", struct_data={'seed': seed, 'dev_nll': '{:.3f}'.format(dev_nll(model, task.Dev))})
		warm.append(steps_to_threshold(model, bitext, task.Dev, threshold, max_steps, train_config=train_config, seed=seed))

	L.log(LOG_NOTICE, "Pre-training speed-up", struct_data={
		'cold_median': statistics.median(cold), 'mass_median': statistics.median(warm),
	})
	return cold, warm


def clean_finetune_gain(output_dir, seeds=(0, 1, 2), noisy=300):
	'''
	Dev BLEU per seed before and after one epoch on the clean subset of a bitext with `noisy` misaligned pairs.
	'''
	before = []
	after = []
	for seed in seeds:
		table = run_experiment(
			_sections('clean-finetune', 'baseline finetune', [seed], data={'noisy': noisy, 'mono': 0}),
			os.path.join(output_dir, 'clean-finetune', 'seed{}'.format(seed)),
		)
		before.append(table.mean('baseline', 'dev'))
		after.append(table.mean('+finetune', 'dev'))
	return before, after


def sca_gain(output_dir, seeds=(0, 1, 2, 3, 4)):
	'''
	Dev BLEU per seed of the baseline and of the SCA-trained model.
	'''
	baseline = []
	sca = []
	for seed in seeds:
		table = run_experiment(
			_sections('sca', 'baseline sca', [seed], data={'mono': 1000}, sca={'gamma': 0.15}),
			os.path.join(output_dir, 'sca', 'seed{}'.format(seed)),
		)
		baseline.append(table.mean('baseline', 'dev'))
		sca.append(table.mean('+sca', 'dev'))
	return baseline, sca


def _nbest(generator, pairs, beam_size):
	entries = NBestList()
	for x, _ in pairs:
		entries.extend(beam_search(generator, x, beam_size))
	return entries


def _reranked_bleu(generator, scorers, names, dev, test, grid):
	'''
	Dev and test BLEU after reranking the generator's n-best with `scorers`, weights tuned on dev.
	'''
	dev_nbest = attach_scores(_nbest(generator, dev, grid.Beam), scorers, names)
	test_nbest = attach_scores(_nbest(generator, test, grid.Beam), scorers, names)
	config = tune_rerank(dev_nbest, [y for _, y in dev], grid.weight_grid(len(scorers)), grid.LengthWeights)
	return (
		corpus_bleu([h.Tokens for h in rerank(dev_nbest, config)], [y for _, y in dev]),
		corpus_bleu([h.Tokens for h in rerank(test_nbest, config)], [y for _, y in test]),
	)


def searched_rerank(output_dir, seeds=(0, 1, 2), nao=None):
	'''
	Per seed, dev BLEU of reranking with {L2R, R2L, searched architecture} against {L2R, R2L, L2R of
	another seed} (test BLEU under ``*_test``), and the search's best score against the median of its
	seed pool (both dev BLEU).
	'''
	nao = nao if nao is not None else {'pool': 10, 'iterations': 2, 'top_k': 4, 'warmup_steps': 200, 'eval_budget': 10}
	nao_config = NaoConfig(config=nao)
	model_config = ModelConfig(config=dict(TOY_MODEL, vocab_size=REVERSAL_DATA['vocab_size']))
	train_config = TrainConfig(config=TOY_TRAIN)
	grid = RerankGrid(config={'beam': 4})

	results = []
	for seed in seeds:
		task = make_task('reverse', bitext=REVERSAL_DATA['bitext'], mono=0, dev=REVERSAL_DATA['dev'], test=REVERSAL_DATA['test'], seed=seed)
		bitext = task.Bitext.Pairs
		generator = train_model(bitext, model_config, train_config, seed=derive_seed(seed, 'l2r'), name='l2r')
		r2l = train_model(bitext, model_config, train_config, seed=derive_seed(seed, 'r2l'), name='r2l', reversed=True)
		extra = train_model(bitext, model_config, train_config, seed=derive_seed(seed, 'extra'), name='extra')

		directory = os.path.join(output_dir, 'nao', 'seed{}'.format(seed))
		os.makedirs(directory, exist_ok=True)
		ranked = nao_search(model_config, bitext, task.Dev, nao_config, derive_seed(seed, 'nao'), directory)
		searched = train_model(bitext, model_config, train_config, seed=derive_seed(seed, 'nao', 'model'), genotype=ranked[0].Genotype, name='nao')
		pool = [r.Score for r in ranked if r.Iteration == 0]

		base = [(generator, False), (r2l, True)]
		with_nao = _reranked_bleu(generator, base + [(searched, False)], ['l2r', 'r2l', 'nao'], task.Dev, task.Test, grid)
		with_extra = _reranked_bleu(generator, base + [(extra, False)], ['l2r', 'r2l', 'extra'], task.Dev, task.Test, grid)
		results.append({
			'with_nao': with_nao[0],
			'with_extra_seed': with_extra[0],
			'with_nao_test': with_nao[1],
			'with_extra_seed_test': with_extra[1],
			'search_best': 100.0 * ranked[0].Score,
			'pool_median': 100.0 * statistics.median(pool),
		})
		L.log(LOG_NOTICE, "Searched rerank", struct_data=dict(seed=seed, **{k: '{:.2f}'.format(v) for k, v in results[-1].items()}))
	return results
