import logging

from ..abc.service import Service
from .ensemble import load_ensemble
from .trainer import MadlTrainer

#

L = logging.getLogger(__name__)

#


class MadlService(Service):
	'''
	Dual learning on the proactor's worker pool, with ``Madl.step!`` progress on the PubSub
	and the ``madl.loss`` gauge in the metrics.
	'''

	def __init__(self, app, service_name):
		super().__init__(app, service_name)
		self.Metrics = app.get_service('deskmt.MetricsService')


	async def load(self, manifest_path):
		return await self.offload(load_ensemble, manifest_path)


	async def train(self, f_ensemble, g_ensemble, corpora, config=None, train_config=None, decode_config=None, seed=0, output_dir=None, epochs=None):
		trainer = MadlTrainer(
			f_ensemble, g_ensemble, config, train_config, decode_config, seed, output_dir,
			pubsub=self.App.PubSub, metrics=self.Metrics,
		)
		return await self.offload(trainer.train, corpora, epochs)
