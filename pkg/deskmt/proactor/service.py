import os
import asyncio
import logging
import concurrent.futures

from ..abc.service import Service
from ..config import Config

#

L = logging.getLogger(__name__)

#


class ProactorService(Service):
	'''
	Worker pool for CPU-bound work items (decoding shards, shared-weight evaluations).

	Each work item must derive its random stream from its own index so that results
	do not depend on scheduling.
	'''

	def __init__(self, app, service_name):
		super().__init__(app, service_name)
		self.Loop = app.Loop

		max_workers = Config.get('deskmt:proactor', 'max_workers')
		try:
			max_workers = int(max_workers)
		except (TypeError, ValueError):
			max_workers = 0
		if max_workers <= 0:
			max_workers = min(32, (os.cpu_count() or 1) + 4)
		self.MaxWorkers = max_workers

		self.Executor = concurrent.futures.ThreadPoolExecutor(
			max_workers=max_workers,
			thread_name_prefix="DeskMTProactorThread"
		)

		if Config.getboolean('deskmt:proactor', 'default_executor'):
			self.Loop.set_default_executor(self.Executor)


	async def finalize(self, app):
		self.Executor.shutdown(wait=True)


	def execute(self, func, *args):
		return self.Loop.run_in_executor(self.Executor, func, *args)


	async def map(self, func, items):
		'''
		Run `func(index, item)` for every item on the pool; results keep the input order.
		'''
		futures = [self.execute(func, i, item) for i, item in enumerate(items)]
		if len(futures) == 0:
			return []
		return list(await asyncio.gather(*futures))
