import logging

from ..abc.service import Service
from .experiment import ExperimentConfig
from .runner import ExperimentRunner

#

L = logging.getLogger(__name__)

#


class ExperimentService(Service):
	'''
	Runs experiment files with the toolkit's services doing the heavy lifting.

	Publishes ``Experiment.stage!`` (stage, seed) when a stage starts and ``Experiment.done!``
	(name, score table) at the end.
	'''

	def __init__(self, app, service_name):
		super().__init__(app, service_name)
		self.Pipeline = app.get_service('deskmt.PipelineService')
		self.Mass = app.get_service('deskmt.MassService')
		self.Madl = app.get_service('deskmt.MadlService')
		self.Nao = app.get_service('deskmt.NaoService')


	def load(self, path):
		return ExperimentConfig.load(path)


	async def run(self, experiment):
		runner = ExperimentRunner(
			experiment, pipeline=self.Pipeline, mass=self.Mass, madl=self.Madl, nao=self.Nao, pubsub=self.App.PubSub
		)
		return await runner.run()
