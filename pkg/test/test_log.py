import os
import shutil
import logging
import tempfile
import unittest

from deskmt.log import StructuredDataFormatter
from deskmt.log import run_log


class StructuredDataTestCase(unittest.TestCase):

	def record(self, struct_data):
		record = logging.LogRecord('deskmt.test', logging.INFO, __file__, 1, "Epoch finished", None, None)
		if struct_data is not None:
			record._struct_data = struct_data
		return record


	def test_render(self):
		formatter = StructuredDataFormatter(fmt="%(struct_data)s%(message)s")
		line = formatter.format(self.record({'epoch': 3, 'loss': 0.42}))
		self.assertEqual(line, '[sd epoch="3" loss="0.4200"] Epoch finished')


	def test_no_struct_data(self):
		formatter = StructuredDataFormatter(fmt="%(struct_data)s%(message)s")
		self.assertEqual(formatter.format(self.record(None)), "Epoch finished")


	def test_run_log(self):
		tmpdir = tempfile.mkdtemp()
		try:
			logger = logging.getLogger('deskmt.test.runlog')
			logger.setLevel(logging.INFO)
			with run_log(tmpdir):
				logger.info("Stage started", struct_data={'stage': 'bt'})
			logger.info("After the run")
			with open(os.path.join(tmpdir, 'run.log'), encoding='utf-8') as f:
				text = f.read()
			self.assertIn('[sd stage="bt"] Stage started', text)
			self.assertNotIn("After the run", text)
		finally:
			shutil.rmtree(tmpdir)
