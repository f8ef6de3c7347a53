import logging

import numpy as np

from ..config import Configurable
from ..exceptions import DecodeError
from ..numerics import log_softmax
from ..numerics import token_logprobs
from .vocabulary import BOS
from .vocabulary import EOS
from .vocabulary import generable_ids
from .vocabulary import strip_sequence

#

L = logging.getLogger(__name__)

#


class Hypothesis(object):
	'''
	One candidate translation.

	:ivar Tokens: generated ids without the final EOS.
	:ivar LogProb: summed log-probability of the generated ids including EOS (when finished).
	:ivar Score: `LogProb / Length ** length_penalty`.
	:ivar Scores: per-scorer log-probabilities, filled by reranking.
	'''

	def __init__(self, tokens, logprob, score, length, finished=True, scores=None):
		self.Tokens = list(tokens)
		self.LogProb = float(logprob)
		self.Score = float(score)
		self.Length = int(length)
		self.Finished = finished
		self.Scores = list(scores) if scores is not None else []


	def __repr__(self):
		return "<Hypothesis {} score={:.4f}>".format(self.Tokens, self.Score)


class NBestEntry(object):

	def __init__(self, source, hypotheses):
		self.Source = list(source)
		self.Hypotheses = list(hypotheses)


class NBestList(object):
	'''
	Scored candidate translations per source sentence.
	'''

	def __init__(self, entries=None, scorer_names=None):
		self.Entries = list(entries) if entries is not None else []
		self.ScorerNames = list(scorer_names) if scorer_names is not None else []


	def __len__(self):
		return len(self.Entries)


	def __iter__(self):
		return iter(self.Entries)


	def __getitem__(self, i):
		return self.Entries[i]


	@property
	def Hypotheses(self):
		'''Hypotheses of a single-sentence list.'''
		if len(self.Entries) != 1:
			raise DecodeError("Hypotheses is defined for single-sentence n-best lists only")
		return self.Entries[0].Hypotheses


	def best(self):
		return self.Hypotheses[0]


	def extend(self, other):
		self.Entries.extend(other.Entries)
		return self


def _check_beam(beam_size):
	if beam_size < 1:
		raise DecodeError("Beam size must be at least 1, got {}".format(beam_size))


def beam_decode(step_fn, vocab_size, beam_size, length_penalty=1.0, max_len=20):
	'''
	Generic beam search.

	`step_fn(prefixes)` receives decoder inputs (lists starting with BOS) and returns a
	(len(prefixes) x vocab_size) array of per-step scores.

	At every step all candidates are ranked by cumulative score, ties broken by token id and then by
	parent hypothesis index; the best `beam_size` survive. Candidates ending in EOS are finished,
	the rest stay alive; when `max_len` tokens are generated the alive ones are finished as they are.
	'''
	_check_beam(beam_size)
	candidates = np.array(generable_ids(vocab_size), dtype=np.int64)
	if candidates.size == 0:
		raise DecodeError("Vocabulary of {} has no generable tokens".format(vocab_size))

	alive = [([], 0.0)]
	finished = []
	for step in range(max_len):
		scores = np.asarray(step_fn([[BOS] + tokens for tokens, _ in alive]), dtype=np.float64)
		cumulative = np.array([lp for _, lp in alive])[:, None] + scores[:, candidates]
		flat = cumulative.ravel()
		parent = np.repeat(np.arange(len(alive)), candidates.size)
		token = np.tile(candidates, len(alive))
		order = np.lexsort((parent, token, -flat))[:beam_size]

		survivors = []
		for k in order:
			tokens = alive[parent[k]][0] + [int(token[k])]
			if token[k] == EOS:
				finished.append((tokens[:-1], float(flat[k]), len(tokens), True))
			elif step + 1 == max_len:
				finished.append((tokens, float(flat[k]), len(tokens), False))
			else:
				survivors.append((tokens, float(flat[k])))
		alive = survivors
		if len(alive) == 0:
			break

	hypotheses = [
		Hypothesis(tokens, lp, lp / (length ** length_penalty), length, done)
		for tokens, lp, length, done in finished
	]
	ranked = sorted(enumerate(hypotheses), key=lambda ih: (-ih[1].Score, ih[0]))
	return [h for _, h in ranked[:beam_size]]


def greedy_decode_fn(step_fn, vocab_size, max_len=20):
	'''
	Argmax decoding over generable tokens, lowest id on ties.
	'''
	candidates = np.array(generable_ids(vocab_size), dtype=np.int64)
	tokens = []
	total = 0.0
	for _ in range(max_len):
		scores = np.asarray(step_fn([[BOS] + tokens]), dtype=np.float64)[0]
		k = int(np.argmax(scores[candidates]))
		total += float(scores[candidates[k]])
		if candidates[k] == EOS:
			return Hypothesis(tokens, total, total / (len(tokens) + 1), len(tokens) + 1, True)
		tokens.append(int(candidates[k]))
	return Hypothesis(tokens, total, total / max(len(tokens), 1), len(tokens), False)


class ModelStepper(object):
	'''
	Caches the encoder pass of one source and scores decoder prefixes against it.
	'''

	def __init__(self, model, source):
		self.Model = model
		self.State = model.encode([source])


	def __call__(self, prefixes):
		logits, packing = self.Model.decode(self.State, prefixes, source_of_segment=np.zeros(len(prefixes), dtype=np.int64))
		return log_softmax(logits).Data[packing.last_rows()]


def _max_len(model, max_len):
	return model.ModelConfig.MaxLen if max_len is None else min(max_len, model.ModelConfig.MaxLen)


def reusable_len(models, max_len=None):
	'''
	Longest output that can be fed back to a model as source or target (EOS or BOS is added).
	'''
	limit = min(m.ModelConfig.MaxLen for m in models) - 1
	return limit if max_len is None else min(max_len, limit)


def logprobs(model, source, prefix):
	'''
	log P(next token | source, prefix) over the whole vocabulary.
	'''
	prefix = strip_sequence(prefix)
	if len(prefix) + 1 > model.ModelConfig.MaxLen:
		raise DecodeError("Prefix of length {} exceeds max length {}".format(len(prefix), model.ModelConfig.MaxLen))
	return ModelStepper(model, strip_sequence(source))([[BOS] + prefix])[0]


def beam_search(model, source, beam_size=5, length_penalty=1.0, max_len=None):
	source = strip_sequence(source)
	_check_beam(beam_size)
	hyps = beam_decode(ModelStepper(model, source), model.vocab_size, beam_size, length_penalty, _max_len(model, max_len))
	return NBestList([NBestEntry(source, hyps)])


def greedy_decode(model, source, max_len=None):
	source = strip_sequence(source)
	return greedy_decode_fn(ModelStepper(model, source), model.vocab_size, _max_len(model, max_len))


def score_sequence(model, source, target, reversed=False):
	'''
	Sum of per-token log-probabilities of target+EOS under teacher forcing.
	With `reversed`, the target is reversed first (right-to-left models).
	'''
	target = strip_sequence(target)
	if len(target) == 0:
		raise DecodeError("score_sequence() requires a non-empty target")
	if reversed:
		target = target[::-1]
	return float(score_batch(model, [(source, target)])[0])


def score_batch(model, pairs):
	'''
	Per-pair summed log-probabilities (target+EOS), one teacher-forced pass.
	'''
	logits, gold, packing = model.teacher_forcing(pairs)
	lp = token_logprobs(logits, gold).Data
	return np.array([lp[packing.segment_rows(i)].sum() for i in range(len(packing))])


def translate(model, sources, beam_size=1, length_penalty=1.0, max_len=None):
	'''
	Best hypothesis per source, in natural (left-to-right) order even for right-to-left models.
	'''
	out = []
	for source in sources:
		if beam_size == 1:
			tokens = greedy_decode(model, source, max_len).Tokens
		else:
			tokens = beam_search(model, source, beam_size, length_penalty, max_len).best().Tokens
		out.append(tokens[::-1] if model.Reversed else tokens)
	return out


class DecodeConfig(Configurable):

	ConfigDefaults = {
		'beam_size': 5,
		'length_penalty': 1.0,
		'max_len': 0,  # 0 means the model's max length
	}


	def __init__(self, config_section_name='decode', config=None):
		super().__init__(config_section_name, config=config)
		self.BeamSize = self.Config.getint('beam_size')
		self.LengthPenalty = self.Config.getfloat('length_penalty')
		max_len = self.Config.getint('max_len')
		self.MaxLen = max_len if max_len > 0 else None
		_check_beam(self.BeamSize)
