import os
import logging
import configparser

from ..exceptions import EnsembleError
from ..exceptions import WeightsError
from ..seq2seq.decoding import ModelStepper
from ..seq2seq.decoding import NBestEntry
from ..seq2seq.decoding import NBestList
from ..seq2seq.decoding import beam_decode
from ..seq2seq.decoding import logprobs
from ..seq2seq.vocabulary import strip_sequence

#

L = logging.getLogger(__name__)

#

WEIGHT_TOLERANCE = 1e-9


def validate_weights(weights):
	'''
	Accept iff all weights are nonnegative and they sum to 1 within 1e-9.
	'''
	weights = [float(w) for w in weights]
	total = float(sum(weights))
	if len(weights) == 0:
		raise WeightsError("No weights given", total)
	if any(w < 0.0 for w in weights):
		raise WeightsError("Weights must be nonnegative, got {}".format(weights), total)
	if abs(total - 1.0) > WEIGHT_TOLERANCE:
		raise WeightsError("Weights must sum to 1, sum={}".format(total), total)
	return True


class AgentEnsemble(object):
	'''
	Simplex-weighted combination of same-direction models.
	Index 0 is the only trainable agent; the others are frozen on construction unless `freeze` is off
	(decoding-only ensembles, e.g. distillation teachers).
	'''

	def __init__(self, models, weights=None, freeze=True):
		if len(models) == 0:
			raise EnsembleError("An ensemble needs at least one model")
		if weights is None:
			weights = [1.0 / len(models)] * len(models)
		if len(weights) != len(models):
			raise EnsembleError("{} models but {} weights".format(len(models), len(weights)))
		validate_weights(weights)
		sizes = set(m.vocab_size for m in models)
		if len(sizes) > 1:
			raise EnsembleError("Ensemble members disagree on vocabulary size: {}".format(sorted(sizes)))

		self.Models = list(models)
		self.Weights = [float(w) for w in weights]
		if freeze:
			for m in self.Models[1:]:
				m.Parameters.freeze()


	def __len__(self):
		return len(self.Models)


	@property
	def trainable(self):
		return self.Models[0]


	@property
	def vocab_size(self):
		return self.Models[0].vocab_size


	def frozen_digest(self):
		return [m.Parameters.digest() for m in self.Models[1:]]


class EnsembleStepper(object):
	'''
	Per-step score sum_i w_i * log P(token | source, prefix; f_i) for a batch of prefixes.
	'''

	def __init__(self, ensemble, source):
		self.Members = [
			(w, ModelStepper(m, source))
			for m, w in zip(ensemble.Models, ensemble.Weights)
			if w != 0.0
		]


	def __call__(self, prefixes):
		total = None
		for w, stepper in self.Members:
			term = w * stepper(prefixes)
			total = term if total is None else total + term
		return total


def combined_logprob(ensemble, source, prefix):
	'''
	sum_i w_i * log P(next | source, prefix; f_i); a score, not renormalized.
	'''
	total = None
	for m, w in zip(ensemble.Models, ensemble.Weights):
		if w == 0.0:
			continue
		term = w * logprobs(m, source, prefix)
		total = term if total is None else total + term
	return total


def combined_decode(ensemble, source, beam_size=5, length_penalty=1.0, max_len=None):
	source = strip_sequence(source)
	limit = min(m.ModelConfig.MaxLen for m in ensemble.Models)
	max_len = limit if max_len is None else min(max_len, limit)
	hyps = beam_decode(EnsembleStepper(ensemble, source), ensemble.vocab_size, beam_size, length_penalty, max_len)
	return NBestList([NBestEntry(source, hyps)])


def ensemble_translate(ensemble, sources, beam_size=5, length_penalty=1.0, max_len=None):
	out = []
	for s in sources:
		out.append(combined_decode(ensemble, s, beam_size, length_penalty, max_len).best().Tokens)
	return out


def read_manifest(path):
	'''
	Ensemble manifest: one ``[agent:N]`` section per model with ``path`` and ``weight``, N giving the order.
	Relative paths are resolved against the manifest directory. Returns `[(path, weight)]`.
	'''
	parser = configparser.ConfigParser()
	if len(parser.read(path)) == 0:
		raise EnsembleError("Cannot read ensemble manifest '{}'".format(path))
	agents = []
	for section in parser.sections():
		if not section.startswith('agent:'):
			continue
		try:
			index = int(section.split(':', 1)[1])
			weight = parser.getfloat(section, 'weight')
			member_path = parser.get(section, 'path')
		except (ValueError, configparser.Error) as e:
			raise EnsembleError("Malformed manifest section [{}]: {}".format(section, e))
		if not os.path.isabs(member_path):
			member_path = os.path.join(os.path.dirname(path), member_path)
		agents.append((index, member_path, weight))
	agents.sort()
	validate_weights([w for _, _, w in agents])
	return [(p, w) for _, p, w in agents]


def write_manifest(path, members):
	validate_weights([w for _, w in members])
	parser = configparser.ConfigParser()
	for i, (member_path, weight) in enumerate(members):
		parser['agent:{}'.format(i)] = {'path': member_path, 'weight': repr(float(weight))}
	with open(path, 'w', encoding='utf-8') as f:
		parser.write(f)


def load_ensemble(path):
	from ..seq2seq.persist import load_model
	members = read_manifest(path)
	models = [load_model(p, name='agent{}'.format(i)) for i, (p, _) in enumerate(members)]
	return AgentEnsemble(models, [w for _, w in members])
