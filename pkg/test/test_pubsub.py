import unittest

from deskmt.pubsub import PubSub
from deskmt.pubsub import subscribe


class Listener(object):

	def __init__(self):
		self.Seen = []


	@subscribe("Train.step!")
	@subscribe("Train.done!")
	def on_train(self, message_type, *args):
		self.Seen.append((message_type,) + args)


class PubSubTestCase(unittest.TestCase):

	def test_publish_to_function(self):
		pubsub = PubSub()
		seen = []

		def on_stage(message_type, stage, seed):
			seen.append((stage, seed))

		pubsub.subscribe("Experiment.stage!", on_stage)
		pubsub.publish("Experiment.stage!", 'bt', 0)
		pubsub.publish("Experiment.done!", 'x', None)
		self.assertEqual(seen, [('bt', 0)])
		pubsub.unsubscribe("Experiment.stage!", on_stage)
		pubsub.publish("Experiment.stage!", 'kd', 0)
		self.assertEqual(seen, [('bt', 0)])


	def test_subscribe_all(self):
		pubsub = PubSub()
		listener = Listener()
		pubsub.subscribe_all(listener)
		pubsub.publish("Train.step!", 1, 0.5)
		pubsub.publish("Train.done!", 100)
		self.assertEqual(listener.Seen, [("Train.step!", 1, 0.5), ("Train.done!", 100)])


	def test_subscribers_are_weak(self):
		pubsub = PubSub()
		listener = Listener()
		pubsub.subscribe_all(listener)
		del listener
		pubsub.publish("Train.step!", 1, 0.5)
		self.assertEqual(pubsub.Subscribers.get("Train.step!"), [])
