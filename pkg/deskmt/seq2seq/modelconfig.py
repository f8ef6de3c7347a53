from ..config import Configurable


class ModelConfig(Configurable):
	'''
	Shape of a sequence-to-sequence model.

	Toy-scale defaults; a section of an experiment file or the global configuration overrides them.
	'''

	ConfigDefaults = {
		'vocab_size': 32,
		'd_model': 64,
		'n_heads': 4,
		'd_ffn': 128,
		'layers': 2,
		'dropout': 0.1,
		'max_len': 64,
		'tied_embeddings': False,
		'shared_vocabulary': True,
		'activation': 'relu',  # relu, tanh or sigmoid
		'output_init': 'fan_in',  # fan_in or zeros
	}


	def __init__(self, config_section_name='model', config=None):
		super().__init__(config_section_name, config=config)
		self.VocabSize = self.Config.getint('vocab_size')
		self.DModel = self.Config.getint('d_model')
		self.NHeads = self.Config.getint('n_heads')
		self.DFfn = self.Config.getint('d_ffn')
		self.Layers = self.Config.getint('layers')
		self.Dropout = self.Config.getfloat('dropout')
		self.MaxLen = self.Config.getint('max_len')
		self.TiedEmbeddings = self.Config.getboolean('tied_embeddings')
		self.SharedVocabulary = self.Config.getboolean('shared_vocabulary')
		self.Activation = str(self.Config['activation'])
		self.OutputInit = str(self.Config['output_init'])

		if self.DModel % self.NHeads != 0:
			raise ValueError("d_model ({}) must be divisible by n_heads ({})".format(self.DModel, self.NHeads))
		if self.Layers < 1:
			raise ValueError("A model needs at least one layer")
		if self.OutputInit not in ('fan_in', 'zeros'):
			raise ValueError("output_init must be 'fan_in' or 'zeros'")
		if self.TiedEmbeddings and not self.SharedVocabulary:
			raise ValueError("tied_embeddings requires shared_vocabulary")


	@classmethod
	def from_text(cls, text):
		values = {}
		for line in text.strip().split('\n'):
			if len(line.strip()) == 0:
				continue
			key, _, value = line.partition('=')
			values[key.strip()] = value.strip()
		return cls(config=values)


	def replace(self, **changes):
		values = dict(self.Config)
		values.update(changes)
		return ModelConfig(config=values)
