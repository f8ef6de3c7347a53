from .lm import CausalLM, lm_nll, lm_token_nll, lm_distribution, train_lm, save_lm, load_lm
from .augment import ScaConfig, ScaLoss, AugmentedRows, soft_embedding, augment_rows, augment_batch, sca_loss

__all__ = [
	'CausalLM', 'lm_nll', 'lm_token_nll', 'lm_distribution', 'train_lm', 'save_lm', 'load_lm',
	'ScaConfig', 'ScaLoss', 'AugmentedRows', 'soft_embedding', 'augment_rows', 'augment_batch', 'sca_loss',
]
