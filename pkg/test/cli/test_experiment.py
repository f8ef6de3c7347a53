import unittest

from deskmt.cli import ExperimentConfig
from deskmt.cli import validate_sections
from deskmt.exceptions import SchemaError


EXPERIMENT = '''
[experiment]
name=reverse-bt
stages=baseline bt
seeds=0 1
output_dir=/tmp/deskmt-test

[data]
task=reverse
bitext=50

[model]
d_model=16
dropout=0.0
'''


class ExperimentConfigTestCase(unittest.TestCase):

	def test_valid_file(self):
		experiment = ExperimentConfig.from_text(EXPERIMENT)
		self.assertEqual(experiment.Experiment.Stages, ['baseline', 'bt'])
		self.assertEqual(experiment.Experiment.Seeds, [0, 1])
		self.assertEqual(experiment.Sections['data']['bitext'], 50)
		self.assertEqual(experiment.component('model').DModel, 16)
		self.assertEqual(experiment.component('data').Task, 'reverse')


	def test_unknown_key(self):
		with self.assertRaises(SchemaError) as cm:
			ExperimentConfig.from_text(EXPERIMENT + 'd_modle=16\n')
		self.assertEqual(cm.exception.Path, 'model.d_modle')


	def test_unknown_section(self):
		with self.assertRaises(SchemaError) as cm:
			validate_sections({'modle': {'d_model': '16'}})
		self.assertEqual(cm.exception.Path, 'modle')


	def test_wrong_type(self):
		with self.assertRaises(SchemaError) as cm:
			validate_sections({'model': {'d_model': 'sixteen'}})
		self.assertEqual(cm.exception.Path, 'model.d_model')
		with self.assertRaises(SchemaError) as cm:
			validate_sections({'experiment': {'stages': 'baseline finetuning'}})
		self.assertEqual(cm.exception.Path, 'experiment.stages')
		with self.assertRaises(SchemaError):
			validate_sections({'data': {'task': 'sort'}})
		with self.assertRaises(SchemaError):
			validate_sections({'filter': {'max_ratio': '1'}})


	def test_coercion(self):
		data = validate_sections({'model': {'dropout': '0.25', 'tied_embeddings': 'yes'}, 'train': {'lr': '1e-3'}})
		self.assertEqual(data['model'], {'dropout': 0.25, 'tied_embeddings': True})
		self.assertEqual(data['train']['lr'], 0.001)


	def test_syntax_error(self):
		with self.assertRaises(SchemaError) as cm:
			ExperimentConfig.from_text('d_model=16\n', path='bad.ini')
		self.assertEqual(cm.exception.Path, 'bad.ini')


	def test_recipe(self):
		experiment = ExperimentConfig.from_text('[experiment]\nrecipe=en-kk\noutput_dir=/tmp/deskmt-test\n')
		self.assertEqual(experiment.Experiment.Stages, ['filter', 'baseline', 'iterative'])
		self.assertEqual(experiment.component('iterative').Rounds, 6)
		self.assertEqual(experiment.component('iterative').ReverseUpsample, 3)
		explicit = ExperimentConfig.from_text('[experiment]\nrecipe=en-kk\noutput_dir=/tmp/x\n[iterative]\nrounds=2\n')
		self.assertEqual(explicit.component('iterative').Rounds, 2)
		with self.assertRaises(SchemaError):
			ExperimentConfig.from_text('[experiment]\nrecipe=en-xx\n')


	def test_override_and_text(self):
		experiment = ExperimentConfig.from_text(EXPERIMENT).override('experiment', seeds='7')
		self.assertEqual(experiment.Experiment.Seeds, [7])
		with self.assertRaises(SchemaError):
			experiment.override('experiment', seeds='seven')
		text = experiment.text()
		self.assertTrue(text.startswith('[experiment]\nname=reverse-bt\noutput_dir=/tmp/deskmt-test\nseeds=7\n'))
		self.assertLess(text.index('[data]'), text.index('[model]'))
		self.assertEqual(ExperimentConfig.from_text(text).text(), text)
