import unittest

from deskmt.metrics.metrics import Counter
from deskmt.metrics.metrics import Gauge


class MetricsTestCase(unittest.TestCase):

	def test_counter_per_provenance(self):
		counter = Counter('pipeline.pairs', {'stage': 'bt'})
		counter.add('bt', 3)
		counter.add('kd', 2)
		counter.add('bt')
		self.assertEqual(counter.flush(), {'bt': 4, 'kd': 2})
		self.assertEqual(counter.flush(), {})


	def test_counter_without_reset(self):
		counter = Counter('decode.sentences', {}, reset=False)
		counter.add('sentences', 5)
		counter.flush()
		counter.add('sentences', 5)
		self.assertEqual(counter.flush(), {'sentences': 10})


	def test_gauge_keeps_lowest(self):
		gauge = Gauge('train.loss', {})
		gauge.set('loss', 1.5)
		gauge.set('loss', 0.5)
		gauge.set('loss', 0.75)
		self.assertEqual(gauge.flush(), {'loss': 0.75, 'loss.min': 0.5})
		self.assertEqual(gauge.flush(), {'loss': 0.75, 'loss.min': 0.5})
