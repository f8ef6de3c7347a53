import abc


class Module(abc.ABC):
	"""
	A unit of the toolkit that is plugged into the application.

	`Requires` lists the modules whose services this module's services look up;
	they are loaded before the module constructs its own services.
	"""

	Requires = ()

	def __init__(self, app):
		for module_class in self.Requires:
			app.add_module(module_class)

	# Lifecycle

	async def initialize(self, app):
		pass

	async def finalize(self, app):
		pass
