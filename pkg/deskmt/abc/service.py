import abc


class Service(abc.ABC):
	"""
	A named, application-wide object that exposes one concern of the toolkit
	(back translation, dual learning, architecture search) to the command handlers.

	Training and decoding block for seconds to minutes; `offload()` moves such work
	to the proactor's worker pool so the event loop keeps ticking.
	"""

	def __init__(self, app, service_name):
		self.Name = service_name
		self.App = app
		app._register_service(self)


	def offload(self, func, *args):
		return self.App.get_service('deskmt.ProactorService').execute(func, *args)


	def publish(self, event_name, *args):
		self.App.PubSub.publish(event_name, *args)

	# Lifecycle

	async def initialize(self, app):
		pass

	async def finalize(self, app):
		pass
