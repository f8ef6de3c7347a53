import logging

from ..abc.module import Module
from .service import MetricsService
from .metrics import Metric, Counter, Gauge

#

L = logging.getLogger(__name__)

#


class MetricsModule(Module):

	def __init__(self, app):
		super().__init__(app)
		self.Service = MetricsService(app, "deskmt.MetricsService")


__all__ = ['MetricsModule', 'MetricsService', 'Metric', 'Counter', 'Gauge']
