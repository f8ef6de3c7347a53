import logging

from ..abc.service import Service
from ..config import Config
from .corpus import ParallelCorpus
from .evaluation import train_model
from .generation import back_translate
from .generation import distill

#

L = logging.getLogger(__name__)

#


def split_shards(items, shards):
	'''
	Contiguous `(start, chunk)` pieces; concatenating the chunks gives `items` back.
	'''
	items = list(items)
	shards = max(1, min(shards, len(items)))
	size = -(-len(items) // shards) if len(items) > 0 else 0
	return [(start, items[start:start + size]) for start in range(0, len(items), size)] if size > 0 else []


class PipelineService(Service):
	'''
	Runs back translation, distillation and model training on the proactor's worker pool.

	Decoding fans out over contiguous shards of the input. A shard carries its start offset, so the
	noise of sentence `n` is the same however the input is split.
	'''

	def __init__(self, app, service_name):
		super().__init__(app, service_name)
		self.Proactor = app.get_service('deskmt.ProactorService')
		self.Shards = Config.getint('deskmt:pipeline', 'decode_shards')
		metrics = app.get_service('deskmt.MetricsService')
		self.Metrics = metrics
		self.PairsCounter = metrics.create_counter('pipeline.pairs', reset=False)
		self.SentencesCounter = metrics.create_counter('decode.sentences', reset=False)


	def _count(self, corpus, sentences):
		for tag, n in corpus.provenance_counts().items():
			self.PairsCounter.add(tag, n)
		self.SentencesCounter.add("sentences", sentences)


	async def back_translate(self, model, mono, beam_size=5, noise=None, seed=0):
		shards = split_shards(mono, self.Shards)
		parts = await self.Proactor.map(
			lambda i, shard: back_translate(model, shard[1], beam_size, noise, seed=seed, start=shard[0]),
			shards
		)
		corpus = _concat(parts)
		self._count(corpus, len(mono))
		return corpus


	async def distill(self, teachers, sources, beam_size=5):
		shards = split_shards(sources, self.Shards)
		parts = await self.Proactor.map(lambda i, shard: distill(teachers, shard[1], beam_size), shards)
		corpus = _concat(parts)
		self._count(corpus, len(sources))
		return corpus


	async def train(self, pairs, model_config=None, train_config=None, seed=0, genotype=None, name='model', steps=None, reversed=False):
		L.info("Training", struct_data={'model': name, 'pairs': len(pairs), 'reversed': reversed})
		return await self.offload(
			lambda: train_model(
				pairs, model_config, train_config, seed=seed, genotype=genotype, name=name, steps=steps,
				reversed=reversed, pubsub=self.App.PubSub, metrics=self.Metrics,
			)
		)


	async def run(self, func, *args):
		'''
		Any other pipeline step (filtering, mixing, iterative rounds, fine-tuning) on one worker.
		'''
		return await self.offload(func, *args)


def _concat(parts):
	pairs = []
	tags = []
	for part in parts:
		pairs.extend(part.Pairs)
		tags.extend(part.Tags)
	return ParallelCorpus(pairs, tags=tags)
