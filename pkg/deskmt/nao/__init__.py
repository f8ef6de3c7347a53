from ..abc.module import Module
from ..metrics import MetricsModule
from ..proactor import ProactorModule
from .archseq import (
	GO, ARCH_VOCAB_SIZE, encode_genotype, decode_sequence, sequence_length, slots, allowed_tokens,
	grammar_masks, token_text,
)
from .surrogate import Surrogate
from .supernet import Supernet, PerfRecord, shared_weight_eval, evaluate_genotype, activated_branches, warm_up
from .archive import Archive
from .search import NaoConfig, nao_search, sample_pool, fit_surrogate, propose, normalize_scores, rank_correlation
from .service import NaoService


class NaoModule(Module):

	Requires = (ProactorModule, MetricsModule)

	def __init__(self, app):
		super().__init__(app)
		self.Service = NaoService(app, "deskmt.NaoService")


__all__ = [
	'GO', 'ARCH_VOCAB_SIZE', 'encode_genotype', 'decode_sequence', 'sequence_length', 'slots', 'allowed_tokens',
	'grammar_masks', 'token_text',
	'Surrogate',
	'Supernet', 'PerfRecord', 'shared_weight_eval', 'evaluate_genotype', 'activated_branches', 'warm_up',
	'Archive',
	'NaoConfig', 'nao_search', 'sample_pool', 'fit_surrogate', 'propose', 'normalize_scores', 'rank_correlation',
	'NaoModule', 'NaoService',
]
