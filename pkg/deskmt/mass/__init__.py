from ..abc.module import Module
from ..metrics import MetricsModule
from ..proactor import ProactorModule
from .masking import MaskSpec, sample_mask, apply_mask, reconstruct, mask_length
from .objectives import (
	SUPERVISED_TERMS, fragment_nll, mass_unsup_loss, mass_sup_terms, mass_sup_loss,
)
from .pretrain import MassConfig, MassPretrainer, steps_to_threshold, dev_nll
from .service import MassService


class MassModule(Module):

	Requires = (ProactorModule, MetricsModule)

	def __init__(self, app):
		super().__init__(app)
		self.Service = MassService(app, "deskmt.MassService")


__all__ = [
	'MaskSpec', 'sample_mask', 'apply_mask', 'reconstruct', 'mask_length',
	'SUPERVISED_TERMS', 'fragment_nll', 'mass_unsup_loss', 'mass_sup_terms', 'mass_sup_loss',
	'MassConfig', 'MassPretrainer', 'steps_to_threshold', 'dev_nll',
	'MassModule', 'MassService',
]
