import os
import logging

import numpy as np

from ..config import Configurable
from ..log import LOG_NOTICE
from ..numerics import derive_seed
from ..numerics import stream
from ..seq2seq.genotype import random_genotype
from .archive import Archive
from .archseq import encode_genotype
from .supernet import shared_weight_eval
from .supernet import warm_up
from .surrogate import Surrogate

#

L = logging.getLogger(__name__)

#


class NaoConfig(Configurable):

	ConfigDefaults = {
		'pool': 50,
		'iterations': 5,
		'top_k': 10,
		'eta': '1 2 4',  # step sizes tried in turn while every decoded architecture is already known
		'd_arch': 64,
		'predictor_hidden': 64,
		'trade_off': 0.8,
		'surrogate_steps': 200,
		'surrogate_lr': 1e-3,
		'surrogate_batch': 32,
		'warmup_steps': 200,
		'eval_budget': 20,
	}


	def __init__(self, config_section_name='nao', config=None):
		super().__init__(config_section_name, config=config)
		self.Pool = self.Config.getint('pool')
		self.Iterations = self.Config.getint('iterations')
		self.TopK = self.Config.getint('top_k')
		self.Eta = [float(e) for e in self.Config.getlist('eta')]
		self.DArch = self.Config.getint('d_arch')
		self.PredictorHidden = self.Config.getint('predictor_hidden')
		self.TradeOff = self.Config.getfloat('trade_off')
		self.SurrogateSteps = self.Config.getint('surrogate_steps')
		self.SurrogateLR = self.Config.getfloat('surrogate_lr')
		self.SurrogateBatch = self.Config.getint('surrogate_batch')
		self.WarmupSteps = self.Config.getint('warmup_steps')
		self.EvalBudget = self.Config.getint('eval_budget')
		if self.Pool < 2:
			raise ValueError("The seed pool needs at least 2 architectures, got {}".format(self.Pool))
		if len(self.Eta) == 0 or any(e < 0 for e in self.Eta):
			raise ValueError("eta must be a non-empty list of nonnegative step sizes")


def normalize_scores(scores):
	'''
	Min-max normalization to [0, 1]; constant scores map to 0.
	'''
	scores = np.asarray(scores, dtype=np.float64)
	lo, hi = scores.min(), scores.max()
	if hi == lo:
		return np.zeros_like(scores)
	return (scores - lo) / (hi - lo)


def _ranks(values):
	values = np.asarray(values, dtype=np.float64)
	order = np.argsort(values, kind='stable')
	ranks = np.empty(len(values))
	ranks[order] = np.arange(len(values), dtype=np.float64)
	# ties share their mean rank
	for v in np.unique(values):
		same = values == v
		ranks[same] = ranks[same].mean()
	return ranks


def rank_correlation(a, b):
	'''
	Spearman rank correlation of two equally long score lists; 0 when either side is constant.
	'''
	if len(a) != len(b):
		raise ValueError("Score lists differ in length: {} and {}".format(len(a), len(b)))
	ra, rb = _ranks(a), _ranks(b)
	ra, rb = ra - ra.mean(), rb - rb.mean()
	denominator = np.sqrt((ra * ra).sum() * (rb * rb).sum())
	if denominator == 0:
		return 0.0
	return float((ra * rb).sum() / denominator)


def sample_pool(layers, size, seed, known=()):
	'''
	`size` distinct random genotypes not in `known`.
	'''
	rng = stream(seed, 'nao.pool')
	seen = set(g.text() for g in known)
	pool = []
	attempts = 0
	while len(pool) < size and attempts < 100 * size:
		attempts += 1
		g = random_genotype(layers, rng)
		if g.text() in seen:
			continue
		seen.add(g.text())
		pool.append(g)
	return pool


def fit_surrogate(archive, layers, config, seed):
	records = archive.Records
	seqs = [encode_genotype(r.Genotype) for r in records]
	targets = normalize_scores([r.Score for r in records])
	surrogate = Surrogate(layers, config.DArch, config.PredictorHidden, config.TradeOff, seed=seed)
	surrogate.fit(seqs, targets, config.SurrogateSteps, config.SurrogateLR, config.SurrogateBatch, rng=stream(seed, 'nao.fit'))
	predicted = surrogate.predict(surrogate.encode(seqs)).Data[:, 0]
	L.debug("Surrogate fit on the archive", struct_data={
		'records': len(records), 'rank_correlation': '{:.4f}'.format(rank_correlation(predicted, targets)),
	})
	return surrogate


def propose(surrogate, archive, config):
	'''
	Move the embeddings of the top-k architectures uphill and decode them.
	While every decoded architecture is already known, the next step size of the schedule is tried.
	'''
	top = archive.ranked()[:config.TopK]
	embeddings = [surrogate.encode_arch(r.Genotype) for r in top]
	for eta in config.Eta:
		proposals = []
		seen = set()
		for e in embeddings:
			g = surrogate.decode_arch(surrogate.ascend(e, eta))
			if g in archive or g.text() in seen:
				continue
			seen.add(g.text())
			proposals.append(g)
		if len(proposals) > 0:
			return proposals, eta
		L.info("Only known architectures decoded, increasing step size", struct_data={'eta': eta})
	L.warning("No new architecture after the whole step-size schedule", struct_data={'schedule': config.Eta})
	return [], None


def nao_search(model_config, train_pairs, dev_pairs, config=None, seed=0, directory=None, evaluate=None):
	'''
	Search loop: evaluate a random seed pool, then per iteration fit the surrogate on the archive,
	ascend from the top-k embeddings, decode, drop known architectures and evaluate the rest.

	`evaluate(genotypes, iteration)`, when given, returns one `PerfRecord` per genotype (e.g. fanned out
	over workers); the default evaluates sequentially with shared weights.
	With `directory`, the archive (``archive.tsv``) and the warmed-up supernet are persisted and reused.
	Returns the archive records ranked by score.
	'''
	config = config if config is not None else NaoConfig()
	layers = model_config.Layers
	archive = Archive(os.path.join(directory, 'archive.tsv') if directory is not None else None)

	if evaluate is None:
		supernet = warm_up(model_config, train_pairs, config.WarmupSteps, seed, directory)

		def evaluate(genotypes, iteration):
			return [
				shared_weight_eval(supernet, g, train_pairs, dev_pairs, config.EvalBudget, seed=derive_seed(seed, 'eval'), iteration=iteration)
				for g in genotypes
			]

	pool = [g for g in sample_pool(layers, config.Pool, seed) if g not in archive]
	for record in evaluate(pool, 0):
		archive.append(record)
	L.log(LOG_NOTICE, "Seed pool evaluated", struct_data={'pool': config.Pool, 'archive': len(archive)})

	# The last recorded iteration may have been cut short; it is proposed again from the records
	# before it and only its missing architectures are evaluated.
	done = max([r.Iteration for r in archive.Records] + [0])
	for iteration in range(max(done, 1), config.Iterations + 1):
		prior = archive.before(iteration)
		surrogate = fit_surrogate(prior, layers, config, derive_seed(seed, 'surrogate', iteration))
		proposals, eta = propose(surrogate, prior, config)
		missing = [g for g in proposals if g not in archive]
		if len(missing) < len(proposals):
			L.info("Resuming a partial iteration", struct_data={'iteration': iteration, 'missing': len(missing)})
		for record in evaluate(missing, iteration):
			archive.append(record)
		best = archive.best()
		L.log(LOG_NOTICE, "Search iteration", struct_data={
			'iteration': iteration, 'new': len(missing), 'eta': eta, 'best': '{:.4f}'.format(best.Score),
		})

	return archive.ranked()
