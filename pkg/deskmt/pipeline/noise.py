import numpy as np

from ..config import Configurable
from ..seq2seq.vocabulary import BLANK
from ..seq2seq.vocabulary import SPECIAL_TOKENS


class NoiseConfig(Configurable):

	ConfigDefaults = {
		'p_drop': 0.1,
		'p_blank': 0.1,
		'p_swap': 1.0,  # probability that a sentence is locally shuffled
		'swap_window': 3,
	}


	def __init__(self, config_section_name='noise', config=None):
		super().__init__(config_section_name, config=config)
		self.PDrop = self.Config.getfloat('p_drop')
		self.PBlank = self.Config.getfloat('p_blank')
		self.PSwap = self.Config.getfloat('p_swap')
		self.SwapWindow = self.Config.getint('swap_window')
		for name, p in (('p_drop', self.PDrop), ('p_blank', self.PBlank), ('p_swap', self.PSwap)):
			if not (0.0 <= p <= 1.0):
				raise ValueError("{} must lie in [0, 1], got {}".format(name, p))
		if self.SwapWindow < 0:
			raise ValueError("swap_window must be nonnegative")


	@classmethod
	def identity(cls):
		return cls(config={'p_drop': 0.0, 'p_blank': 0.0, 'p_swap': 0.0})


def add_noise(sentence, config, rng):
	'''
	Token dropout, then filler replacement, then a local shuffle where no token moves more than
	`swap_window - 1` positions. A sentence dropped entirely keeps one random token.
	'''
	tokens = list(sentence)
	if len(tokens) == 0:
		return tokens
	filler = SPECIAL_TOKENS[BLANK] if isinstance(tokens[0], str) else BLANK

	if config.PDrop > 0:
		keep = rng.random(len(tokens)) >= config.PDrop
		kept = [t for t, k in zip(tokens, keep) if k]
		if len(kept) == 0:
			kept = [tokens[int(rng.integers(0, len(tokens)))]]
		tokens = kept

	if config.PBlank > 0:
		blank = rng.random(len(tokens)) < config.PBlank
		tokens = [filler if b else t for t, b in zip(tokens, blank)]

	if config.PSwap > 0 and config.SwapWindow > 1 and rng.random() < config.PSwap:
		keys = np.arange(len(tokens)) + rng.uniform(0, config.SwapWindow, size=len(tokens))
		tokens = [tokens[i] for i in np.argsort(keys, kind='stable')]
	return tokens
