import logging

import numpy as np

from ..config import Configurable
from ..exceptions import NumericsError
from ..numerics import Tensor
from ..numerics import as_tensor
from ..numerics import concat_rows
from ..numerics import reshape
from ..numerics import stream
from ..numerics import take_rows
from ..seq2seq.training import sequence_nll
from ..seq2seq.vocabulary import BOS
from ..seq2seq.vocabulary import EOS
from ..seq2seq.vocabulary import strip_sequence

#

L = logging.getLogger(__name__)

#

SIDES = ('source', 'target')


class ScaConfig(Configurable):

	ConfigDefaults = {
		'gamma': 0.15,
		'temperature': 1.0,
		'sides': 'source',
	}


	def __init__(self, config_section_name='sca', config=None):
		super().__init__(config_section_name, config=config)
		self.Gamma = self.Config.getfloat('gamma')
		self.Temperature = self.Config.getfloat('temperature')
		self.Sides = self.Config.getlist('sides')
		if not (0.0 <= self.Gamma <= 1.0):
			raise ValueError("gamma must lie in [0, 1], got {}".format(self.Gamma))
		if self.Temperature <= 0.0:
			raise ValueError("temperature must be positive, got {}".format(self.Temperature))
		for side in self.Sides:
			if side not in SIDES:
				raise ValueError("Unknown augmentation side '{}'".format(side))


def soft_embedding(dist, embedding):
	'''
	Expected embedding sum_j dist_j * E_j, for one distribution or a matrix of them (one per row).
	'''
	E = as_tensor(embedding)
	p = np.asarray(dist.Data if isinstance(dist, Tensor) else dist, dtype=np.float64)
	if p.shape[-1] != E.Data.shape[0]:
		raise NumericsError("Distribution over {} tokens does not fit an embedding of {} rows".format(p.shape[-1], E.Data.shape[0]))
	if p.ndim == 1:
		return reshape(Tensor(p[None, :]) @ E, (E.Data.shape[1],))
	return Tensor(p) @ E


class AugmentedRows(object):
	'''
	Embedded rows of one side of a batch.

	:ivar Replaced: boolean mask over the packed rows, True where a soft embedding was used.
	'''

	def __init__(self, embedded, replaced):
		self.Embedded = embedded
		self.Replaced = replaced


def _rows(sentences, side):
	'''
	Packed token rows as the model feeds them, plus `(row, sentence index, prefix length)` for each word.
	'''
	ids = []
	words = []
	for n, s in enumerate(sentences):
		s = strip_sequence(s)
		row = s + [EOS] if side == 'source' else [BOS] + s
		start = len(ids)
		offset = 0 if side == 'source' else 1
		for t in range(len(s)):
			words.append((start + offset + t, n, t))
		ids.extend(row)
	return np.array(ids, dtype=np.int64), words


def augment_rows(sentences, lm, embedding, gamma, rng, side='source', temperature=1.0):
	'''
	Each word position is independently, with probability `gamma`, embedded as the expectation of
	`embedding` under the LM distribution given the preceding words; other rows are a plain lookup.
	Special rows (EOS on the source side, BOS on the target side) are never replaced.
	'''
	sentences = [strip_sequence(s) for s in sentences]
	ids, words = _rows(sentences, side)
	draws = rng.random(len(words))
	replaced = np.zeros(len(ids), dtype=bool)
	chosen = [w for w, u in zip(words, draws) if u < gamma]
	if len(chosen) == 0:
		return AugmentedRows(take_rows(embedding, ids), replaced)

	E = as_tensor(embedding)
	if lm.vocab_size != E.Data.shape[0]:
		raise NumericsError("Language model vocabulary {} does not fit an embedding of {} rows".format(lm.vocab_size, E.Data.shape[0]))
	cache = {}
	dists = []
	for row, n, t in chosen:
		if n not in cache:
			cache[n] = lm.distributions(sentences[n], temperature)
		dists.append(cache[n][t])
		replaced[row] = True

	soft = soft_embedding(np.vstack(dists), E)
	index = ids.copy()
	for k, (row, _, _) in enumerate(chosen):
		index[row] = E.Data.shape[0] + k
	return AugmentedRows(take_rows(concat_rows([E, soft]), index), replaced)


def augment_batch(batch, lm, gamma, rng, model, sides=('source',), temperature=1.0):
	'''
	Embedded source (and optionally target) rows for a batch of `(x, y)` pairs; returns a dict side -> `AugmentedRows`.
	'''
	out = {}
	if 'source' in sides:
		out['source'] = augment_rows([x for x, _ in batch], lm, model.SourceEmbedding, gamma, rng, 'source', temperature)
	if 'target' in sides:
		out['target'] = augment_rows([y for _, y in batch], lm, model.TargetEmbedding, gamma, rng, 'target', temperature)
	return out


class ScaLoss(object):
	'''
	Training loss with soft contextual augmentation, usable as a `Trainer` loss function.
	Evaluation calls (`training=False`) see the plain embedding lookup.
	'''

	def __init__(self, lm, config=None, seed=0):
		self.LM = lm
		self.ScaConfig = config if config is not None else ScaConfig()
		self.Seed = seed
		self.Calls = 0
		self.Replaced = 0
		self.Positions = 0


	def __call__(self, model, batch, training=False, rng=None):
		if not training:
			return sequence_nll(model, batch)
		cfg = self.ScaConfig
		aug = augment_batch(batch, self.LM, cfg.Gamma, stream(self.Seed, 'sca', self.Calls), model, cfg.Sides, cfg.Temperature)
		self.Calls += 1
		for rows in aug.values():
			self.Replaced += int(rows.Replaced.sum())
			self.Positions += int(rows.Replaced.size)
		return sequence_nll(
			model, batch, training=True, rng=rng,
			source_embedded=aug['source'].Embedded if 'source' in aug else None,
			target_embedded=aug['target'].Embedded if 'target' in aug else None,
		)


def sca_loss(model, batch, lm, config=None, rng=None, training=False, dropout_rng=None):
	cfg = config if config is not None else ScaConfig()
	aug = augment_batch(batch, lm, cfg.Gamma, rng, model, cfg.Sides, cfg.Temperature)
	return sequence_nll(
		model, batch, training=training, rng=dropout_rng,
		source_embedded=aug['source'].Embedded if 'source' in aug else None,
		target_embedded=aug['target'].Embedded if 'target' in aug else None,
	)
