import asyncio
import logging

from ..abc.service import Service
from ..numerics import derive_seed
from .search import NaoConfig
from .search import nao_search
from .supernet import shared_weight_eval
from .supernet import warm_up

#

L = logging.getLogger(__name__)

#


class NaoService(Service):
	'''
	Architecture search with the shared-weight evaluations of each batch of candidates
	fanned out over the proactor's worker pool.

	The search loop itself occupies one worker; with a pool of one worker the candidates
	are evaluated in turn on that worker.
	'''

	def __init__(self, app, service_name):
		super().__init__(app, service_name)
		self.Proactor = app.get_service('deskmt.ProactorService')


	async def search(self, model_config, train_pairs, dev_pairs, config=None, seed=0, directory=None):
		config = config if config is not None else NaoConfig()
		loop = self.App.Loop
		state = {}

		def evaluate(genotypes, iteration):
			if 'supernet' not in state:
				state['supernet'] = warm_up(model_config, train_pairs, config.WarmupSteps, seed, directory)
			supernet = state['supernet']
			eval_seed = derive_seed(seed, 'eval')

			def one(i, genotype):
				return shared_weight_eval(supernet, genotype, train_pairs, dev_pairs, config.EvalBudget, seed=eval_seed, iteration=iteration)

			if self.Proactor.MaxWorkers < 2:
				return [one(i, g) for i, g in enumerate(genotypes)]
			return asyncio.run_coroutine_threadsafe(self.Proactor.map(one, genotypes), loop).result()

		ranked = await self.offload(
			lambda: nao_search(model_config, train_pairs, dev_pairs, config, seed, directory, evaluate=evaluate)
		)
		self.publish("Nao.done!", len(ranked), ranked[0].Score if len(ranked) > 0 else None)
		return ranked
