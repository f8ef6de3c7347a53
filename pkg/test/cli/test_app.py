import os
import shutil
import tempfile
import unittest

from deskmt import Singleton
from deskmt.cli.app import DeskMTApplication


class ApplicationTestCase(unittest.TestCase):

	def setUp(self):
		Singleton.delete(DeskMTApplication)
		self.tmpdir = tempfile.mkdtemp()


	def tearDown(self):
		Singleton.delete(DeskMTApplication)
		shutil.rmtree(self.tmpdir)


	def write(self, name, text):
		path = os.path.join(self.tmpdir, name)
		with open(path, 'w') as f:
			f.write(text)
		return path


	def run_app(self, *args):
		return DeskMTApplication(args=list(args)).run()


	def test_schema_violation_is_usage_error(self):
		path = self.write('bad.ini', '[experiment]\nname=x\n[model]\nd_modle=16\n')
		self.assertEqual(self.run_app('run', path), DeskMTApplication.EXIT_USAGE)


	def test_missing_file_fails(self):
		self.assertEqual(self.run_app('run', os.path.join(self.tmpdir, 'missing.ini')), DeskMTApplication.EXIT_FAILURE)


	def test_eval_of_hypotheses(self):
		reference = self.write('ref.txt', 'the cat sat\n')
		hypotheses = self.write('hyp.txt', 'the cat sat\n')
		self.assertEqual(self.run_app('eval', '--reference', reference, '--hypotheses', hypotheses), DeskMTApplication.EXIT_OK)
		empty = self.write('empty.txt', '')
		self.assertEqual(self.run_app('eval', '--reference', empty, '--hypotheses', hypotheses), DeskMTApplication.EXIT_FAILURE)


	def test_grad_check(self):
		self.assertEqual(self.run_app('grad-check', '--objective', 'nll'), DeskMTApplication.EXIT_OK)


	def test_filter_command(self):
		source = self.write('src.txt', 'the house\nthe house\nUser x\n')
		target = self.write('tgt.txt', 'das haus\ndas haus\ny\n')
		out = os.path.join(self.tmpdir, 'filtered')
		self.assertEqual(self.run_app('filter', '--source', source, '--target', target, '--output-dir', out), DeskMTApplication.EXIT_OK)
		with open(os.path.join(out, 'dropped.tsv')) as f:
			self.assertEqual(f.read(), '2\tdedupe\tthe house ||| das haus\n3\tprefix\tUser x ||| y\n')


	def test_search_writes_best_genotype(self):
		output = os.path.join(self.tmpdir, 'out')
		path = self.write('search.ini', '\n'.join([
			'[experiment]', 'name=tiny-search', 'output_dir={}'.format(output),
			'[data]', 'task=copy', 'vocab_size=10', 'min_len=2', 'max_len=4', 'bitext=8', 'mono=2', 'dev=2', 'test=2',
			'[model]', 'd_model=8', 'n_heads=2', 'd_ffn=16', 'layers=1', 'dropout=0.0', 'max_len=8',
			'[nao]', 'pool=3', 'iterations=0', 'top_k=2', 'd_arch=8', 'predictor_hidden=8',
			'surrogate_steps=2', 'warmup_steps=2', 'eval_budget=2',
			'',
		]))
		self.assertEqual(self.run_app('search', path), DeskMTApplication.EXIT_OK)
		with open(os.path.join(output, 'nao', 'best_genotype.txt')) as f:
			self.assertGreater(len(f.read().strip()), 0)
