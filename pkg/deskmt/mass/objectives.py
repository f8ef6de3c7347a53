import logging
import collections

import numpy as np

from ..exceptions import CorpusError
from ..numerics import Tensor
from ..numerics import token_logprobs
from ..seq2seq.training import sequence_nll
from ..seq2seq.vocabulary import BOS
from ..seq2seq.vocabulary import SEP
from ..seq2seq.vocabulary import strip_sequence
from .masking import apply_mask
from .masking import sample_mask

#

L = logging.getLogger(__name__)

#

MIN_LENGTH = 4

SUPERVISED_TERMS = (
	'y|x_masked',
	'x|y_masked',
	'x_fragment|x_masked;y_masked',
	'y_fragment|x_masked;y_masked',
	'y_fragment|x_masked',
	'x_fragment|y_masked',
)


def fragment_nll(model, examples, training=False, rng=None):
	'''
	-(1/|B|) sum of log P(fragment | encoder input); decoder input is BOS + fragment[:-1], no EOS is predicted.
	`examples` is a list of `(encoder input, fragment)`.
	'''
	if len(examples) == 0:
		raise CorpusError("Empty batch")
	state = model.encode([e for e, _ in examples], training=training, rng=rng)
	prefixes = [[BOS] + list(f[:-1]) for _, f in examples]
	logits, _ = model.decode(state, prefixes, training=training, rng=rng)
	gold = np.array([t for _, f in examples for t in f], dtype=np.int64)
	return token_logprobs(logits, gold).sum() * (-1.0 / len(examples))


def _usable(sentences, what):
	kept = []
	for s in sentences:
		s = strip_sequence(s)
		if len(s) < MIN_LENGTH:
			L.warning("Sentence too short for masking, skipped", struct_data={'length': len(s), 'objective': what})
			continue
		kept.append(s)
	return kept


def mass_unsup_loss(model, batch, rng, ratio=0.5, training=False, dropout_rng=None):
	'''
	Masked fragment prediction on monolingual sentences, one random mask per sentence.
	Sentences shorter than 4 tokens are skipped with a warning; an all-short batch yields a constant 0.
	'''
	sentences = _usable(batch, 'unsupervised')
	if len(sentences) == 0:
		return Tensor(0.0)
	examples = []
	for x in sentences:
		masked, fragment = apply_mask(x, sample_mask(len(x), ratio, rng))
		examples.append((masked, fragment))
	return fragment_nll(model, examples, training=training, rng=dropout_rng)


def mass_sup_terms(model, batch, rng, ratio=0.5, training=False, dropout_rng=None):
	'''
	The six supervised terms, each a batch-mean negative log-likelihood, keyed as in `SUPERVISED_TERMS`.
	Independent masks are drawn for x and y; [x_masked; y_masked] joins both with the SEP token.
	Pairs whose joined input exceeds the model's max length only count in the four other terms;
	when no pair can be joined the two joint terms are a constant 0.
	'''
	pairs = []
	for x, y in batch:
		x = strip_sequence(x)
		y = strip_sequence(y)
		if len(x) < MIN_LENGTH or len(y) < MIN_LENGTH:
			L.warning("Pair too short for masking, skipped", struct_data={'x_len': len(x), 'y_len': len(y)})
			continue
		pairs.append((x, y))
	if len(pairs) == 0:
		return collections.OrderedDict((name, Tensor(0.0)) for name in SUPERVISED_TERMS)

	full_x = []
	full_y = []
	joint_x = []
	joint_y = []
	cross_y = []
	cross_x = []
	# the joined input plus EOS must fit the encoder
	joint_limit = model.ModelConfig.MaxLen - 1
	for x, y in pairs:
		xm, xf = apply_mask(x, sample_mask(len(x), ratio, rng))
		ym, yf = apply_mask(y, sample_mask(len(y), ratio, rng))
		full_x.append((xm, y))
		full_y.append((ym, x))
		cross_y.append((xm, yf))
		cross_x.append((ym, xf))
		joined = xm + [SEP] + ym
		if len(joined) <= joint_limit:
			joint_x.append((joined, xf))
			joint_y.append((joined, yf))
	if len(joint_x) < len(pairs):
		L.warning("Pairs too long to join, left out of the joint terms", struct_data={
			'skipped': len(pairs) - len(joint_x), 'max_len': model.ModelConfig.MaxLen,
		})

	kw = {'training': training, 'rng': dropout_rng}
	terms = collections.OrderedDict()
	terms[SUPERVISED_TERMS[0]] = sequence_nll(model, full_x, **kw)
	terms[SUPERVISED_TERMS[1]] = sequence_nll(model, full_y, **kw)
	terms[SUPERVISED_TERMS[2]] = fragment_nll(model, joint_x, **kw) if len(joint_x) > 0 else Tensor(0.0)
	terms[SUPERVISED_TERMS[3]] = fragment_nll(model, joint_y, **kw) if len(joint_y) > 0 else Tensor(0.0)
	terms[SUPERVISED_TERMS[4]] = fragment_nll(model, cross_y, **kw)
	terms[SUPERVISED_TERMS[5]] = fragment_nll(model, cross_x, **kw)
	return terms


def mass_sup_loss(model, batch, rng, ratio=0.5, training=False, dropout_rng=None):
	'''
	Unweighted sum of the six supervised terms.
	'''
	terms = list(mass_sup_terms(model, batch, rng, ratio, training, dropout_rng).values())
	loss = terms[0]
	for t in terms[1:]:
		loss = loss + t
	return loss
