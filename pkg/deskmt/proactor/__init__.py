import logging

from ..abc.module import Module
from ..config import Config
from .service import ProactorService

#

L = logging.getLogger(__name__)

#

Config.add_defaults(
	{
		'deskmt:proactor': {
			'max_workers': '0',
			'default_executor': True,
		}
	}
)


class ProactorModule(Module):
	'''
	Worker pool for training and decoding; see `ProactorService`.
	'''

	def __init__(self, app):
		super().__init__(app)
		self.Service = ProactorService(app, "deskmt.ProactorService")


__all__ = ['ProactorModule', 'ProactorService']
