'''
Experiment files: INI sections validated against a JSON schema before any work starts.

	[experiment]
	name=reverse-bt
	stages=baseline bt madl
	seeds=0 1 2

	[data]
	task=reverse
	bitext=500

	[model]
	d_model=16

Every section maps onto one configurable component; the schema is generated from the components'
`ConfigDefaults`, so a key is valid exactly when the component knows it.
'''

import os
import re
import logging
import collections
import configparser

import fastjsonschema

from ..config import Config
from ..config import Configurable
from ..exceptions import SchemaError
from ..madl.trainer import MadlConfig
from ..mass.pretrain import MassConfig
from ..nao.search import NaoConfig
from ..pipeline.filtering import FilterRuleSet
from ..pipeline.iterative import IterativeConfig
from ..pipeline.noise import NoiseConfig
from ..pipeline.recipes import RECIPES
from ..pipeline.recipes import STAGES
from ..pipeline.tasks import TASKS
from ..rerank.rerank import RerankGrid
from ..sca.augment import ScaConfig
from ..seq2seq.decoding import DecodeConfig
from ..seq2seq.modelconfig import ModelConfig
from ..seq2seq.training import TrainConfig

#

L = logging.getLogger(__name__)

#


class ExperimentSettings(Configurable):

	ConfigDefaults = {
		'name': 'experiment',
		'recipe': '',
		'stages': '',  # overrides the recipe's stage list
		'seeds': '0',
		'output_dir': '',  # default: [general] output_dir / name
		'models': 1,  # models trained per direction (ensembles, KD teachers)
	}


	def __init__(self, config_section_name='experiment', config=None):
		super().__init__(config_section_name, config=config)
		self.Name = str(self.Config['name'])
		self.Recipe = str(self.Config['recipe'])
		self.Seeds = [int(s) for s in self.Config.getlist('seeds')]
		self.Models = self.Config.getint('models')
		stages = self.Config.getlist('stages')
		if len(stages) == 0 and len(self.Recipe) > 0:
			stages = list(RECIPES[self.Recipe].stages)
		self.Stages = stages if len(stages) > 0 else ['baseline']
		output_dir = str(self.Config['output_dir'])
		self.OutputDir = output_dir if len(output_dir) > 0 else os.path.join(Config['general']['output_dir'], self.Name)


class DataConfig(Configurable):

	ConfigDefaults = {
		'task': 'reverse',  # copy, reverse, number-words or files
		'vocab_size': 20,
		'min_len': 3,
		'max_len': 12,
		'bitext': 500,
		'mono': 5000,
		'dev': 100,
		'test': 100,
		'noisy': 0,  # injected misaligned pairs, provenance 'noisy'
		'source_file': '',
		'target_file': '',
		'mono_source_file': '',
		'mono_target_file': '',
		'dev_file': '',  # TSV source<TAB>target
		'test_file': '',
		'bpe_merges': 1000,
	}


	def __init__(self, config_section_name='data', config=None):
		super().__init__(config_section_name, config=config)
		self.Task = str(self.Config['task'])
		self.VocabSize = self.Config.getint('vocab_size')
		self.MinLen = self.Config.getint('min_len')
		self.MaxLen = self.Config.getint('max_len')
		self.Bitext = self.Config.getint('bitext')
		self.Mono = self.Config.getint('mono')
		self.Dev = self.Config.getint('dev')
		self.Test = self.Config.getint('test')
		self.Noisy = self.Config.getint('noisy')
		self.BpeMerges = self.Config.getint('bpe_merges')
		self.Files = {
			key: str(self.Config[key])
			for key in ('source_file', 'target_file', 'mono_source_file', 'mono_target_file', 'dev_file', 'test_file')
		}


class SpeculationConfig(Configurable):

	ConfigDefaults = {
		'max_epochs': 10,
	}


	def __init__(self, config_section_name='speculation', config=None):
		super().__init__(config_section_name, config=config)
		self.MaxEpochs = self.Config.getint('max_epochs')


SECTIONS = collections.OrderedDict([
	('experiment', ExperimentSettings),
	('data', DataConfig),
	('model', ModelConfig),
	('train', TrainConfig),
	('decode', DecodeConfig),
	('noise', NoiseConfig),
	('filter', FilterRuleSet),
	('mass', MassConfig),
	('madl', MadlConfig),
	('sca', ScaConfig),
	('nao', NaoConfig),
	('iterative', IterativeConfig),
	('speculation', SpeculationConfig),
	('rerank', RerankGrid),
])


def _word_list(words):
	alternatives = '|'.join(re.escape(w) for w in words)
	return r'^[\s,]*((' + alternatives + r')([\s,]+|$))*$'


SCHEMA_REFINEMENTS = {
	'experiment': {
		'recipe': {'enum': [''] + list(RECIPES)},
		'stages': {'pattern': _word_list(STAGES)},
		'seeds': {'pattern': r'^[\s,]*(\d+([\s,]+|$))+$'},
		'models': {'minimum': 1},
	},
	'data': {
		'task': {'enum': list(TASKS) + ['files']},
		'bitext': {'minimum': 1},
		'mono': {'minimum': 0},
		'dev': {'minimum': 1},
		'test': {'minimum': 1},
		'noisy': {'minimum': 0},
		'bpe_merges': {'minimum': 0},
	},
	'model': {
		'layers': {'minimum': 1},
		'activation': {'enum': ['relu', 'tanh', 'sigmoid']},
		'output_init': {'enum': ['fan_in', 'zeros']},
	},
	'filter': {
		'max_ratio': {'exclusiveMinimum': 1},
		'english_side': {'enum': ['source', 'target', 'both']},
	},
	'iterative': {
		'rounds': {'minimum': 1},
		'forward_upsample': {'minimum': 1},
		'reverse_upsample': {'minimum': 1},
	},
}


def _defaults(cls):
	merged = collections.OrderedDict()
	for base_class in reversed(cls.__mro__):
		merged.update(getattr(base_class, 'ConfigDefaults', {}))
	return merged


def _json_type(value):
	if isinstance(value, bool):
		return 'boolean'
	if isinstance(value, int):
		return 'integer'
	if isinstance(value, float):
		return 'number'
	return 'string'


def build_schema():
	properties = {}
	for section, cls in SECTIONS.items():
		fields = {}
		for key, value in _defaults(cls).items():
			fields[key] = {'type': _json_type(value)}
			fields[key].update(SCHEMA_REFINEMENTS.get(section, {}).get(key, {}))
		properties[section] = {
			'type': 'object',
			'properties': fields,
			'additionalProperties': False,
		}
	return {
		'type': 'object',
		'properties': properties,
		'additionalProperties': False,
	}


SCHEMA = build_schema()
_validate = fastjsonschema.compile(SCHEMA)

_INT = re.compile(r'^[+-]?\d+$')


def _coerce(value, json_type):
	'''
	INI text to the schema's type; a value that does not parse stays a string and fails validation.
	'''
	text = value.strip()
	if json_type == 'integer' and _INT.match(text):
		return int(text)
	if json_type == 'number':
		try:
			return float(text)
		except ValueError:
			return value
	if json_type == 'boolean' and text.lower() in configparser.ConfigParser.BOOLEAN_STATES:
		return configparser.ConfigParser.BOOLEAN_STATES[text.lower()]
	return value


def _error_path(e):
	'''
	Dotted location of the offending value, e.g. ``model.d_model``; the validator's root name is dropped.
	'''
	path = e.name[len('data'):].lstrip('.') if e.name.startswith('data') else e.name
	if e.rule == 'additionalProperties' and isinstance(e.value, dict):
		known = set((e.definition or {}).get('properties', {}))
		extra = sorted(k for k in e.value if k not in known)
		if len(extra) > 0:
			path = '{}.{}'.format(path, extra[0]) if path else extra[0]
	return path


def validate_sections(sections):
	'''
	Coerce and validate `{section: {key: text}}`; returns the coerced copy or raises `SchemaError`.
	'''
	data = {}
	for section, values in sections.items():
		fields = SCHEMA['properties'].get(section, {}).get('properties', {})
		data[section] = {
			key: _coerce(value, fields[key]['type']) if key in fields and isinstance(value, str) else value
			for key, value in values.items()
		}
	try:
		_validate(data)
	except fastjsonschema.JsonSchemaValueException as e:
		raise SchemaError(e.message, _error_path(e)) from None
	return data


class ExperimentConfig(object):
	'''
	A validated experiment file; `component(section)` builds the section's configurable component.
	'''

	def __init__(self, sections, path=None):
		self.Path = path
		self.Sections = validate_sections(sections)
		recipe = self.Sections.get('experiment', {}).get('recipe', '')
		if recipe:
			for section, overrides in RECIPES[recipe].overrides.items():
				for key, value in overrides.items():
					self.Sections.setdefault(section, {}).setdefault(key, value)
		self.Experiment = self.component('experiment')


	@classmethod
	def from_text(cls, text, path=None):
		parser = configparser.ConfigParser(interpolation=None)
		parser.optionxform = str
		try:
			parser.read_string(os.path.expandvars(text), source=path or '<experiment>')
		except configparser.Error as e:
			raise SchemaError(str(e).replace('\n', ' '), path or '<experiment>') from None
		return cls({section: dict(parser.items(section)) for section in parser.sections()}, path=path)


	@classmethod
	def load(cls, path):
		with open(path, 'r', encoding='utf-8') as f:
			return cls.from_text(f.read(), path=path)


	def override(self, section, **values):
		'''
		A revalidated copy with `values` replacing keys of `section` (e.g. seeds from ``--seed``).
		'''
		sections = {name: dict(v) for name, v in self.Sections.items()}
		sections.setdefault(section, {}).update(values)
		return ExperimentConfig(sections, path=self.Path)


	def values(self, section):
		return dict(self.Sections.get(section, {}))


	def component(self, section):
		return SECTIONS[section](config=self.values(section))


	def text(self):
		'''
		Canonical rendering (sections in schema order, keys sorted), stored next to the results.
		'''
		lines = []
		for section in SECTIONS:
			values = self.Sections.get(section)
			if not values:
				continue
			lines.append('[{}]'.format(section))
			for key in sorted(values):
				lines.append('{}={}'.format(key, values[key]))
			lines.append('')
		return '\n'.join(lines)
