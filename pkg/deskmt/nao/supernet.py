import os
import logging
import collections

from ..exceptions import CorpusError
from ..exceptions import GenotypeError
from ..log import LOG_NOTICE
from ..numerics import Adam
from ..numerics import Parameters
from ..numerics import format_metadata
from ..numerics import grad
from ..numerics import load_checkpoint
from ..numerics import parse_metadata
from ..numerics import save_checkpoint
from ..numerics import stream
from ..rerank.bleu import corpus_bleu
from ..seq2seq.decoding import translate
from ..seq2seq.genotype import NODE_COUNT
from ..seq2seq.genotype import PARAMETRIC_OPS
from ..seq2seq.genotype import SIDE_OPS
from ..seq2seq.genotype import random_genotype
from ..seq2seq.genotype import transformer_genotype
from ..seq2seq.genotype import validate_genotype
from ..seq2seq.model import GenotypeModel
from ..seq2seq.model import branch_prefix
from ..seq2seq.modelconfig import ModelConfig
from ..seq2seq.operations import create_op_parameters
from ..seq2seq.training import iterate_batches
from ..seq2seq.training import sequence_nll

#

L = logging.getLogger(__name__)

#


class Supernet(object):
	'''
	One weight set holding every candidate operation at every branch position.

	A genotype's model is a view on these weights: branch (side, layer, node, branch) running operation
	`op` always uses the same tensors, whichever input it reads.
	'''

	def __init__(self, config, seed=0, parameters=None, name='supernet'):
		self.ModelConfig = config
		self.Seed = seed
		self.Name = name
		self.Parameters = parameters if parameters is not None else Parameters(name, seed)
		for side in ('encoder', 'decoder'):
			for l in range(config.Layers):
				for i in range(1, NODE_COUNT[side] + 1):
					for j in range(2):
						for op in SIDE_OPS[side]:
							if op in PARAMETRIC_OPS:
								create_op_parameters(self.Parameters, branch_prefix(side, l, i, j, op), op, config)
		# Embeddings, norms and output projection
		self.model(transformer_genotype(config.Layers))
		self.Optimizer = None
		self.StepNo = 0


	def model(self, genotype):
		validate_genotype(genotype, self.ModelConfig.Layers)
		return GenotypeModel(genotype, self.ModelConfig, self.Seed, name=self.Name, parameters=self.Parameters)


	def clone(self):
		return Supernet(self.ModelConfig, self.Seed, parameters=self.Parameters.clone(), name=self.Name)


	def train(self, pairs, steps, seed, lr=5e-4, batch_size=16):
		'''
		Weight-sharing training: every step samples a random genotype and updates only the tensors its path uses.
		Returns the loss history.
		'''
		if len(pairs) == 0:
			raise CorpusError("Cannot train the supernet on an empty corpus")
		if self.Optimizer is None:
			self.Optimizer = Adam(self.Parameters.values(), lr=lr)
		history = []
		epoch = 0
		batches = iter(())
		for _ in range(steps):
			batch = next(batches, None)
			if batch is None:
				batches = iterate_batches(pairs, batch_size, seed, ('supernet', epoch))
				epoch += 1
				batch = next(batches)
			genotype = random_genotype(self.ModelConfig.Layers, stream(seed, 'supernet.path', self.StepNo))
			model = self.model(genotype)
			loss = sequence_nll(model, batch, training=True, rng=stream(seed, 'supernet.dropout', self.StepNo))
			self.Optimizer.step(grad(loss))
			history.append(float(loss.Data))
			self.StepNo += 1
		return history


	def save(self, path):
		sections = collections.OrderedDict()
		sections['deskmt'] = 'role=supernet\nname={}\nseed={}\nsteps={}'.format(self.Name, self.Seed, self.StepNo)
		sections['model'] = self.ModelConfig.canonical_text()
		save_checkpoint(path, self.Parameters.state(), format_metadata(sections))


	@classmethod
	def load(cls, path):
		tensors, metadata = load_checkpoint(path)
		sections = parse_metadata(metadata)
		header = dict(line.split('=', 1) for line in sections['deskmt'].split('\n') if '=' in line)
		net = cls(ModelConfig.from_text(sections['model']), int(header.get('seed', 0)), name=header.get('name', 'supernet'))
		net.Parameters.load_state(tensors)
		net.StepNo = int(header.get('steps', 0))
		return net


class PerfRecord(object):
	'''
	An evaluated architecture. `Score` is dev BLEU / 100.
	'''

	def __init__(self, genotype, score, seed=0, budget=0, iteration=0):
		self.Genotype = genotype
		self.Score = float(score)
		self.Seed = int(seed)
		self.Budget = int(budget)
		self.Iteration = int(iteration)


	def __repr__(self):
		return "<PerfRecord score={:.4f} iteration={} {}>".format(self.Score, self.Iteration, self.Genotype.text())


def activated_branches(supernet, genotype, pairs):
	'''
	Count of applied operations per branch position during one teacher-forced pass.
	'''
	model = supernet.model(genotype)
	model.Activated = []
	model.teacher_forcing(pairs)
	counts = collections.Counter()
	ops = collections.defaultdict(set)
	for side, l, i, j, op in model.Activated:
		counts[(side, l, i, j)] += 1
		ops[(side, l, i, j)].add(op)
	for key, seen in ops.items():
		if len(seen) != 1:
			raise GenotypeError("branch {} ran several operations: {}".format(key, sorted(seen)))
	return counts


def evaluate_genotype(supernet, genotype, dev_pairs):
	model = supernet.model(genotype)
	hyps = translate(model, [x for x, _ in dev_pairs], beam_size=1)
	return corpus_bleu(hyps, [y for _, y in dev_pairs]) / 100.0


def shared_weight_eval(supernet, genotype, train_pairs, dev_pairs, budget, seed=0, iteration=0):
	'''
	Train a clone of the supernet for `budget` path-sampling steps, then score `genotype`'s path on dev.
	The shared supernet itself is never modified; a zero budget scores the current weights.
	'''
	net = supernet.clone() if budget > 0 else supernet
	if budget > 0:
		net.train(train_pairs, budget, seed)
	score = evaluate_genotype(net, genotype, dev_pairs)
	L.debug("Architecture evaluated", struct_data={'score': '{:.4f}'.format(score), 'budget': budget, 'seed': seed})
	return PerfRecord(genotype, score, seed=seed, budget=budget, iteration=iteration)


def warm_up(config, train_pairs, steps, seed, directory=None):
	'''
	Build and train the master supernet; with `directory`, a persisted ``supernet.ckpt`` is reused or written.
	'''
	path = os.path.join(directory, 'supernet.ckpt') if directory is not None else None
	if path is not None and os.path.exists(path):
		L.log(LOG_NOTICE, "Reusing warmed-up supernet", struct_data={'path': path})
		return Supernet.load(path)
	net = Supernet(config, seed)
	history = net.train(train_pairs, steps, seed)
	if path is not None:
		os.makedirs(directory, exist_ok=True)
		net.save(path)
	L.log(LOG_NOTICE, "Supernet warmed up", struct_data={'steps': steps, 'loss': '{:.4f}'.format(history[-1]) if history else 'n/a'})
	return net
