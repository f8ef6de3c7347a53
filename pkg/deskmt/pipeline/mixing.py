import logging

from ..numerics import stream
from .corpus import MonoCorpus
from .corpus import ParallelCorpus

#

L = logging.getLogger(__name__)

#


def mix_corpora(parts, seed=0):
	'''
	Each `(corpus, factor)` part repeated `factor` times (an integer >= 1), concatenated and shuffled.
	'''
	pairs = []
	tags = []
	for corpus, factor in parts:
		if int(factor) != factor or factor < 1:
			raise ValueError("Up-sampling factors must be integers >= 1, got {}".format(factor))
		for _ in range(int(factor)):
			pairs.extend(corpus.Pairs)
			tags.extend(corpus.Tags)
	order = stream(seed, 'mix').permutation(len(pairs))
	mixed = ParallelCorpus([pairs[i] for i in order], tags=[tags[i] for i in order])
	L.info("Corpora mixed", struct_data=dict(sorted(mixed.provenance_counts().items())))
	return mixed


def shard_mono(mono, shards=5, seed=0):
	'''
	`shards` resamples of the same size as `mono`, drawn with replacement, one per independently trained model.
	'''
	if shards < 1:
		raise ValueError("shards must be at least 1")
	out = []
	for k in range(shards):
		index = stream(seed, 'shard', k).integers(0, len(mono), size=len(mono)) if len(mono) > 0 else []
		out.append(MonoCorpus([mono[i] for i in index], mono.Language))
	return out
