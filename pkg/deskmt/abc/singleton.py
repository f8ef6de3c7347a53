class Singleton(type):
	"""
	Metaclass of the application: the first construction wins and later calls return the same object.
	The instance is stored on the class itself, so a subclass (e.g. the command-line application)
	is a singleton of its own.
	"""

	def __call__(cls, *args, **kwargs):
		instance = cls.__dict__.get('_singleton_instance')
		if instance is None:
			instance = super().__call__(*args, **kwargs)
			cls._singleton_instance = instance
		return instance


	@staticmethod
	def delete(singleton_cls):
		'''
		Forget the instance; unit tests build a fresh application per test case.
		'''
		if '_singleton_instance' in singleton_cls.__dict__:
			del singleton_cls._singleton_instance
