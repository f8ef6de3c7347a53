import logging

from ..abc.module import Module
from ..mass import MassModule
from ..madl import MadlModule
from ..nao import NaoModule
from ..pipeline import PipelineModule
from .experiment import ExperimentConfig, ExperimentSettings, DataConfig, SpeculationConfig, SECTIONS, SCHEMA, validate_sections
from .runner import ExperimentRunner, RunState
from .service import ExperimentService
from .gradsuite import gradient_suite, objective_check, OBJECTIVES, TOLERANCE

#

L = logging.getLogger(__name__)

#


class ExperimentModule(Module):

	Requires = (PipelineModule, MassModule, MadlModule, NaoModule)

	def __init__(self, app):
		super().__init__(app)
		self.Service = ExperimentService(app, "deskmt.ExperimentService")


__all__ = [
	'ExperimentConfig', 'ExperimentSettings', 'DataConfig', 'SpeculationConfig', 'SECTIONS', 'SCHEMA', 'validate_sections',
	'ExperimentRunner', 'RunState',
	'ExperimentModule', 'ExperimentService',
	'gradient_suite', 'objective_check', 'OBJECTIVES', 'TOLERANCE',
]
