import os
import sys
import signal
import asyncio
import logging
import platform
import argparse
import itertools

from .config import Config
from .abc.singleton import Singleton
from .log import Logging, _loop_exception_handler

L = logging.getLogger(__name__)


class Application(metaclass=Singleton):
	'''
	Lifecycle of one deskmt command: parse arguments, load configuration, initialize services,
	run `main()` to completion, finalize services and return the exit code.

	Exit codes: 0 success, 1 runtime failure, 2 usage or schema violation.
	'''

	Description = "Desk-scale neural machine translation research toolkit."

	EXIT_OK = 0
	EXIT_FAILURE = 1
	EXIT_USAGE = 2

	def __init__(self, args=None):
		self.ExitCode = self.EXIT_OK

		# Parse command line
		self.Args = self.parse_arguments(args=args)

		# Load configuration
		Config._load()

		self.HostName = platform.node()

		# A fresh event loop per application, commands may be run repeatedly from one process
		self.Loop = asyncio.new_event_loop()
		asyncio.set_event_loop(self.Loop)

		# Setup logging
		self.Logging = Logging(self)

		self.Loop.set_exception_handler(_loop_exception_handler)
		if Config["logging"].getboolean("verbose"):
			self.Loop.set_debug(True)

		if platform.system() != "Windows":
			try:
				self.Loop.add_signal_handler(signal.SIGINT, self.stop)
				self.Loop.add_signal_handler(signal.SIGTERM, self.stop)
			except (RuntimeError, ValueError):
				# Not in the main thread (e.g. under a test runner thread)
				pass

		self._stop_event = asyncio.Event()
		self._stop_counter = 0

		from .pubsub import PubSub
		self.PubSub = PubSub(self)

		self.Modules = []
		self.Services = {}
		self._init_futures = []

		L.info("Initializing ...")


	def create_argument_parser(self, prog=None, description=None, epilog=None):
		'''
		This method can be overriden to adjust argparse configuration.
		'''

		parser = argparse.ArgumentParser(
			prog=prog,
			description=description if description is not None else self.Description,
			epilog=epilog,
			formatter_class=argparse.RawDescriptionHelpFormatter,
		)
		parser.add_argument('-c', '--config', help='specify a path to a configuration file')
		parser.add_argument('-v', '--verbose', action='store_true', help='print more information (enable debug output)')
		parser.add_argument('-l', '--log-file', help='specify a path to a log file')
		return parser


	def parse_arguments(self, args=None):
		parser = self.create_argument_parser()
		args = parser.parse_args(args=args)

		if args.config is not None:
			Config._default_values['general']['config_file'] = args.config

		if args.verbose:
			Config._default_values['logging']['verbose'] = True

		if args.log_file:
			Config._default_values['logging:file']['path'] = args.log_file

		return args


	def run(self):
		# Init-time
		try:
			self.Loop.run_until_complete(self._initialize_all())
		except BaseException:
			L.exception("Failed to initialize")
			self.set_exit_code(self.EXIT_FAILURE)
			self._close_loop()
			return self.ExitCode

		# Run-time and application main() function
		L.info("Running ...")
		self._stop_event.clear()
		main_task = self.Loop.create_task(self._main_wrapper())
		governor_task = self.Loop.create_task(self._run_time_governor())
		self.Loop.run_until_complete(asyncio.wait([main_task, governor_task], return_when=asyncio.ALL_COMPLETED))
		if not main_task.cancelled() and main_task.exception() is not None:
			L.error("Exception in main()", exc_info=main_task.exception())
			self.set_exit_code(self.EXIT_FAILURE)

		# Exit-time
		L.info("Exiting ...")
		try:
			self.Loop.run_until_complete(self._exit_time_governor())
		except BaseException:
			L.exception("Exception during finalization")

		self._close_loop()
		return self.ExitCode


	def _close_loop(self):
		self.Loop.run_until_complete(self.Loop.shutdown_asyncgens())
		self.Loop.close()


	async def _main_wrapper(self):
		try:
			await self.main()
		finally:
			self.stop()


	def stop(self, exit_code: int = None):
		if exit_code is not None:
			self.set_exit_code(exit_code)

		self._stop_event.set()
		self._stop_counter += 1
		self.PubSub.publish("Application.stop!", self._stop_counter)

		if self._stop_counter >= 3:
			L.fatal("Emergency exit")
			return os._exit(self.EXIT_FAILURE)


	# Modules

	def add_module(self, module_class):
		""" Load a new module. """

		for module in self.Modules:
			if isinstance(module, module_class):
				# Already loaded and registered
				return module

		module = module_class(self)
		self.Modules.append(module)
		self._init_futures.append(module.initialize(self))
		return module

	# Services

	def get_service(self, service_name):
		""" Get a service by its name. """

		try:
			return self.Services[service_name]
		except KeyError:
			pass

		L.error("Cannot find service '{}' - not registered?".format(service_name))
		raise KeyError("Cannot find service '{}'".format(service_name))


	def _register_service(self, service):
		""" Register a new service using its name. """

		if service.Name in self.Services:
			L.error("Service '{}' already registered (existing:{} new:{})".format(
				service.Name, self.Services[service.Name], service))
			raise RuntimeError("Service {} already registered".format(service.Name))

		self.Services[service.Name] = service
		self._init_futures.append(service.initialize(self))

	# Lifecycle callback

	async def initialize(self):
		pass

	async def main(self):
		pass

	async def finalize(self):
		pass

	# Governors

	async def _initialize_all(self):
		await self.initialize()
		# Services may register further services while initializing
		while len(self._init_futures) > 0:
			pending, self._init_futures = self._init_futures, []
			await asyncio.gather(*pending)
		self.PubSub.publish("Application.init!")


	async def _run_time_governor(self):
		timeout = Config.getfloat('general', 'tick_period')
		self.PubSub.publish("Application.run!")

		# Wait for stop event & tick in meanwhile
		for cycle_no in itertools.count(1):
			try:
				await asyncio.wait_for(self._stop_event.wait(), timeout=timeout)
				break
			except asyncio.TimeoutError:
				self.PubSub.publish("Application.tick!")
				if (cycle_no % 60) == 0:
					self.PubSub.publish("Application.tick/60!")


	async def _exit_time_governor(self):
		self.PubSub.publish("Application.exit!")
		await self.finalize()

		for component in list(self.Services.values()) + list(self.Modules):
			try:
				await component.finalize(self)
			except Exception:
				L.exception("Exception when finalizing {}".format(component))


	def set_exit_code(self, exit_code: int, force: bool = False):
		if (self.ExitCode < exit_code) or force:
			L.debug("Exit code set to {}".format(exit_code))
			self.ExitCode = exit_code


def main_entry(app_class, args=None):
	'''
	Console entry point: build the application, run it and exit with its code.
	'''
	app = app_class(args=args)
	sys.exit(app.run())
