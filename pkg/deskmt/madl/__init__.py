from ..abc.module import Module
from ..metrics import MetricsModule
from ..proactor import ProactorModule
from .ensemble import (
	AgentEnsemble, EnsembleStepper, validate_weights, combined_logprob, combined_decode,
	ensemble_translate, read_manifest, write_manifest, load_ensemble, WEIGHT_TOLERANCE,
)
from .objective import MadlCorpora, TERMS, round_trip_sources, reconstruction_term, madl_terms, madl_loss
from .trainer import MadlConfig, MadlTrainer, madl_train, subsample
from .service import MadlService


class MadlModule(Module):

	Requires = (ProactorModule, MetricsModule)

	def __init__(self, app):
		super().__init__(app)
		self.Service = MadlService(app, "deskmt.MadlService")


__all__ = [
	'AgentEnsemble', 'EnsembleStepper', 'validate_weights', 'combined_logprob', 'combined_decode',
	'ensemble_translate', 'read_manifest', 'write_manifest', 'load_ensemble', 'WEIGHT_TOLERANCE',
	'MadlCorpora', 'TERMS', 'round_trip_sources', 'reconstruction_term', 'madl_terms', 'madl_loss',
	'MadlConfig', 'MadlTrainer', 'madl_train', 'subsample',
	'MadlModule', 'MadlService',
]
