import math
import collections

from ..exceptions import RerankError

#

ORDER = 4


class BleuResult(object):
	'''
	Corpus BLEU with its ingredients.

	:ivar Score: BLEU in [0, 100].
	:ivar Precisions: n-gram precisions in percent, n = 1..order.
	'''

	def __init__(self, score, precisions, brevity_penalty, hyp_len, ref_len, matches, totals):
		self.Score = score
		self.Precisions = precisions
		self.BrevityPenalty = brevity_penalty
		self.HypLen = hyp_len
		self.RefLen = ref_len
		self.Matches = matches
		self.Totals = totals


	def __float__(self):
		return float(self.Score)


	def __repr__(self):
		return "BLEU = {:.2f} {} (BP = {:.3f} hyp_len = {} ref_len = {})".format(
			self.Score,
			'/'.join('{:.1f}'.format(p) for p in self.Precisions),
			self.BrevityPenalty, self.HypLen, self.RefLen
		)


def _tokens(x):
	if isinstance(x, str):
		return x.split()
	return list(x)


def ngram_counts(tokens, n):
	return collections.Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def sentence_ngram_stats(hypothesis, reference, order=ORDER):
	'''
	Clipped n-gram matches and hypothesis n-gram totals for n = 1..order, plus both lengths.
	'''
	hyp = _tokens(hypothesis)
	ref = _tokens(reference)
	matches = []
	totals = []
	for n in range(1, order + 1):
		h = ngram_counts(hyp, n)
		r = ngram_counts(ref, n)
		matches.append(sum(min(c, r[g]) for g, c in h.items()))
		totals.append(max(len(hyp) - n + 1, 0))
	return matches, totals, len(hyp), len(ref)


def bleu_details(hypotheses, references, order=ORDER, smooth=False):
	'''
	Corpus BLEU over tokenized sentences (token lists or whitespace-separated strings).

	Orders with no hypothesis n-grams at all (every sentence shorter than n) are left out of the
	geometric mean. Without smoothing, a zero match count at any remaining order gives 0;
	`smooth` adds one to matches and totals of every order.
	'''
	if len(hypotheses) != len(references):
		raise RerankError("{} hypotheses but {} references".format(len(hypotheses), len(references)))
	if len(references) == 0:
		raise RerankError("BLEU needs at least one reference")

	matches = [0] * order
	totals = [0] * order
	hyp_len = 0
	ref_len = 0
	for hyp, ref in zip(hypotheses, references):
		m, t, hl, rl = sentence_ngram_stats(hyp, ref, order)
		for n in range(order):
			matches[n] += m[n]
			totals[n] += t[n]
		hyp_len += hl
		ref_len += rl

	precisions = []
	log_sum = 0.0
	effective = 0
	zero = False
	for n in range(order):
		if smooth:
			p = (matches[n] + 1.0) / (totals[n] + 1.0)
		elif totals[n] == 0:
			precisions.append(0.0)
			continue
		else:
			p = matches[n] / totals[n]
		precisions.append(100.0 * p)
		if p == 0.0:
			zero = True
		else:
			log_sum += math.log(p)
		effective += 1

	if hyp_len == 0:
		return BleuResult(0.0, precisions, 0.0, hyp_len, ref_len, matches, totals)

	bp = math.exp(min(0.0, 1.0 - ref_len / hyp_len))
	if zero or effective == 0:
		score = 0.0
	else:
		score = 100.0 * bp * math.exp(log_sum / effective)
	return BleuResult(score, precisions, bp, hyp_len, ref_len, matches, totals)


def corpus_bleu(hypotheses, references, order=ORDER, smooth=False):
	return bleu_details(hypotheses, references, order, smooth).Score
