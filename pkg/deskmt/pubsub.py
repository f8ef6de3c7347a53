import logging
import asyncio
import weakref
import functools
import threading


L = logging.getLogger(__name__)


class PubSub(object):
	'''
	In-process publish/subscribe used for lifecycle and experiment progress events,
	e.g. ``Experiment.stage!`` or ``Train.step!``.
	Subscribers are held by weak reference. Messages published from a worker thread are
	delivered on the event loop thread.
	'''

	def __init__(self, app=None):
		self.Subscribers = {}
		self.Loop = app.Loop if app is not None else None
		self.LoopThread = threading.get_ident()


	def subscribe(self, message_type, callback):
		"""
		Subscribe a callback (plain function, method or coroutine function) to a message type.
		"""

		# Bound methods need a WeakMethod, a plain weakref to them dies immediately
		if hasattr(callback, '__self__'):
			callback = weakref.WeakMethod(callback)
		else:
			callback = weakref.ref(callback)

		self.Subscribers.setdefault(message_type, []).append(callback)


	def subscribe_all(self, obj):
		"""
		Find all @deskmt.subscribe decorated methods on the obj and do subscription
		"""
		for member_name in dir(obj):
			member = getattr(obj, member_name)
			message_types = getattr(member, 'deskmt_pubsub_subscribe_to_message_types', None)
			if message_types is not None:
				for message_type in message_types:
					self.subscribe(message_type, member)


	def unsubscribe(self, message_type, callback):
		""" Remove a subscriber of an message type from the set. """

		callback_list = self.Subscribers.get(message_type)
		if callback_list is None:
			L.warning("Message type subscription '{}' not found.".format(message_type))
			return

		for ref in list(callback_list):
			c = ref()
			if c is None or c == callback:
				callback_list.remove(ref)

		if len(callback_list) == 0:
			del self.Subscribers[message_type]


	def _callback_iter(self, message_type):

		def _deliver_async(loop, callback, message_type, *args, **kwargs):
			asyncio.ensure_future(callback(message_type, *args, **kwargs), loop=loop)

		callback_list = self.Subscribers.get(message_type)
		if callback_list is None:
			return

		for callback_ref in list(callback_list):
			callback = callback_ref()

			if callback is None:  # a reference is lost
				callback_list.remove(callback_ref)
				continue

			if asyncio.iscoroutinefunction(callback):
				if self.Loop is None:
					L.warning("Coroutine subscriber for '{}' skipped, no event loop".format(message_type))
					continue
				callback = functools.partial(_deliver_async, self.Loop, callback)

			yield callback


	def publish(self, message_type, *args, **kwargs):
		""" Notify subscribers of an message type. Including arguments. """

		asynchronously = kwargs.pop('asynchronously', False)

		if self.Loop is not None and threading.get_ident() != self.LoopThread:
			self.Loop.call_soon_threadsafe(functools.partial(self.publish, message_type, *args, **kwargs))
			return

		if asynchronously and self.Loop is not None:
			for callback in self._callback_iter(message_type):
				self.Loop.call_soon(functools.partial(callback, message_type, *args, **kwargs))

		else:
			for callback in self._callback_iter(message_type):
				callback(message_type, *args, **kwargs)


class subscribe(object):

	'''
	Decorator

	Usage:

	@deskmt.subscribe("Train.step!")
	def on_step(self, message_type, step, loss):
		...
	'''

	def __init__(self, message_type):
		self.message_type = message_type

	def __call__(self, f):
		if getattr(f, 'deskmt_pubsub_subscribe_to_message_types', None) is None:
			f.deskmt_pubsub_subscribe_to_message_types = [self.message_type]
		else:
			f.deskmt_pubsub_subscribe_to_message_types.append(self.message_type)
		return f
