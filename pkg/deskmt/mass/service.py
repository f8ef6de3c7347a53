import logging

from ..abc.service import Service
from .pretrain import MassPretrainer

#

L = logging.getLogger(__name__)

#


class MassService(Service):
	'''
	Pre-trains and fine-tunes shared models on the proactor's worker pool.
	Publishes ``Mass.pretrained!`` with the model name and the number of pre-training updates.
	'''

	def __init__(self, app, service_name):
		super().__init__(app, service_name)


	async def pretrain(self, model, mono_x, mono_y, bitext=None, config=None, train_config=None, seed=0, finetune_steps=None):
		'''
		Pre-training followed by fine-tuning on `bitext`; returns the model and the pre-training losses.
		'''
		def work():
			pretrainer = MassPretrainer(model, config, train_config, seed)
			losses = pretrainer.pretrain(mono_x, mono_y, bitext)
			if bitext is not None and len(bitext) > 0:
				pretrainer.finetune(bitext, steps=finetune_steps)
			return losses

		losses = await self.offload(work)
		self.publish("Mass.pretrained!", model.Name, len(losses))
		return model, losses
