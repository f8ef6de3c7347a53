import abc
import threading

#


class Metric(abc.ABC):
	'''
	Named set of numeric fields. Training loops update metrics from proactor workers
	while the flush runs on the event loop, so every access holds the metric's lock.
	'''

	def __init__(self, name: str, tags: dict):
		assert(name is not None)
		assert(tags is not None)
		self.Name = name
		self.Tags = tags
		self.Lock = threading.Lock()


	@abc.abstractmethod
	def flush(self) -> dict:
		pass


class Gauge(Metric):
	'''
	Last value of each field plus the lowest value seen, e.g. ``train.loss`` flushes
	``{'loss': 0.51, 'loss.min': 0.48, 'lr': 0.0005, 'lr.min': 0.0005}``.
	'''

	def __init__(self, name: str, tags: dict):
		super().__init__(name=name, tags=tags)
		self.Values = {}
		self.Lowest = {}


	def set(self, name, value):
		value = float(value)
		with self.Lock:
			self.Values[name] = value
			if name not in self.Lowest or value < self.Lowest[name]:
				self.Lowest[name] = value


	def flush(self) -> dict:
		with self.Lock:
			ret = {}
			for name, value in self.Values.items():
				ret[name] = value
				ret[name + '.min'] = self.Lowest[name]
			return ret


class Counter(Metric):
	'''
	Running totals, e.g. ``pipeline.pairs`` counts produced pairs per provenance tag.
	With `reset` the totals restart from zero after each flush.
	'''

	def __init__(self, name, tags, reset: bool = True):
		super().__init__(name=name, tags=tags)
		self.Values = {}
		self.Reset = reset


	def add(self, name, value=1):
		with self.Lock:
			self.Values[name] = self.Values.get(name, 0) + value


	def flush(self) -> dict:
		with self.Lock:
			ret = dict(self.Values)
			if self.Reset:
				self.Values = {}
			return ret
