import logging
import collections

from ..exceptions import CheckpointError
from ..numerics import format_metadata
from ..numerics import load_checkpoint
from ..numerics import parse_metadata
from ..numerics import save_checkpoint
from .genotype import Genotype
from .model import GenotypeModel
from .modelconfig import ModelConfig

#

L = logging.getLogger(__name__)

#


def save_model(path, model, role='translation', extra=None):
	'''
	Model checkpoint: the numerics container with the canonical genotype and model config texts as metadata.
	'''
	sections = collections.OrderedDict()
	sections['deskmt'] = '\n'.join([
		'role={}'.format(role),
		'name={}'.format(model.Name),
		'seed={}'.format(model.Seed),
		'reversed={}'.format(1 if model.Reversed else 0),
	])
	sections['genotype'] = model.Genotype.text()
	sections['model'] = model.ModelConfig.canonical_text()
	if extra is not None:
		for k, v in extra.items():
			sections[k] = v
	save_checkpoint(path, model.Parameters.state(), format_metadata(sections))


def load_model(path, name=None, expected_role=None):
	'''
	Rebuild a `GenotypeModel` from a checkpoint. Returns the model; its `Role` and `Metadata` are set.
	'''
	tensors, metadata = load_checkpoint(path)
	sections = parse_metadata(metadata)
	for required in ('deskmt', 'genotype', 'model'):
		if required not in sections:
			raise CheckpointError("Checkpoint lacks the [{}] metadata section".format(required), path=path)

	header = dict(
		line.split('=', 1) for line in sections['deskmt'].split('\n') if '=' in line
	)
	role = header.get('role', 'translation')
	if expected_role is not None and role != expected_role:
		raise CheckpointError("Checkpoint role is '{}', expected '{}'".format(role, expected_role), path=path)

	config = ModelConfig.from_text(sections['model'])
	genotype = Genotype.parse(sections['genotype'])
	model = GenotypeModel(genotype, config, int(header.get('seed', 0)), name=name or header.get('name', 'model'))
	try:
		model.Parameters.load_state(tensors)
	except Exception as e:
		raise CheckpointError("Checkpoint does not fit its model: {}".format(e), path=path)
	model.Reversed = header.get('reversed', '0') == '1'
	model.Role = role
	model.Metadata = sections
	L.debug("Model loaded", struct_data={'path': path, 'role': role})
	return model
