import logging

from ..abc.service import Service

from .metrics import Counter, Gauge

#

L = logging.getLogger('deskmt.metrics')

#


def metric_dimension(metric_name, tags):
	dim = metric_name
	if tags is not None:
		for k in sorted(tags.keys()):
			dim += ',{}={}'.format(k, tags[k])
	return dim


class MetricsService(Service):
	'''
	Registry of counters and gauges; values are flushed into the log every minute and on exit.

	To see the flushed values, enable the logger:

		[logging]
		levels=
			deskmt.metrics INFO
	'''

	def __init__(self, app, service_name):
		super().__init__(app, service_name)
		self.Metrics = {}  # A key is dimension (combination of metric name and tags)
		self.Tags = {
			"host": app.HostName,
		}
		app.PubSub.subscribe("Application.tick/60!", self._on_flushing_event)


	async def finalize(self, app):
		self._on_flushing_event("finalize!")


	def _on_flushing_event(self, event_type):
		for metric in self.Metrics.values():
			values = metric.flush()
			if len(values) == 0:
				continue
			struct_data = {'name': metric.Name}
			for fk, fv in values.items():
				struct_data['field.{}'.format(fk)] = fv
			for tk, tv in metric.Tags.items():
				struct_data['tag.{}'.format(tk)] = tv
			L.info("Metrics", struct_data=struct_data)


	def _create(self, metric_class, metric_name, tags, **kwargs):
		dimension = metric_dimension(metric_name, tags)
		existing = self.Metrics.get(dimension)
		if existing is not None:
			if not isinstance(existing, metric_class):
				raise RuntimeError("Metric '{}' already present with another type".format(dimension))
			return existing

		t = self.Tags.copy()
		if tags is not None:
			t.update(tags)

		m = metric_class(metric_name, tags=t, **kwargs)
		self.Metrics[dimension] = m
		return m


	def create_gauge(self, metric_name, tags=None):
		return self._create(Gauge, metric_name, tags)


	def create_counter(self, metric_name, tags=None, reset: bool = True):
		return self._create(Counter, metric_name, tags, reset=reset)
