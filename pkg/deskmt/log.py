import os
import sys
import pprint
import logging
import datetime
import traceback
import contextlib

from .config import Config

# Progress messages (stage started, round finished) that are visible without -v
LOG_NOTICE = 25
logging.addLevelName(LOG_NOTICE, "NOTICE")

RUN_LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s %(struct_data)s%(message)s"


class Logging(object):
	'''
	Root logger setup of one deskmt command.

	A console handler is attached when stdin is a terminal (or ``DESKMTFORCECONSOLE=1``),
	a file handler when ``[logging:file] path`` is set.
	'''

	def __init__(self, app):
		self.RootLogger = logging.getLogger()
		self.ConsoleHandler = None
		self.FileHandler = None

		if self.RootLogger.hasHandlers():
			self.RootLogger.warning("Logging seems to be already configured. Proceed with caution.")

		else:
			if _is_console() or os.environ.get('DESKMTFORCECONSOLE', '0') != '0':
				self.ConsoleHandler = _handler(logging.StreamHandler(stream=sys.stderr), "logging:console")
				self.RootLogger.addHandler(self.ConsoleHandler)

			file_path = Config["logging:file"]["path"]
			if len(file_path) > 0:
				self.FileHandler = _handler(logging.FileHandler(file_path, encoding='utf-8'), "logging:file")
				self.RootLogger.addHandler(self.FileHandler)

		if Config["logging"].getboolean("verbose"):
			self.RootLogger.setLevel(logging.DEBUG)
		else:
			self.RootLogger.setLevel(Config["logging"]["level"])

		# Per-logger levels, one "<logger> <LEVEL>" per line
		for levelconf in Config["logging"].get('levels').split('\n'):
			levelconf = levelconf.strip()
			if len(levelconf) == 0 or levelconf.startswith('#') or levelconf.startswith(';'):
				continue
			loggername, levelname = levelconf.split(' ', 1)
			logging.getLogger(loggername).setLevel(logging.getLevelName(levelname.strip().upper()))


def _handler(handler, section):
	handler.setLevel(logging.DEBUG)
	handler.setFormatter(StructuredDataFormatter(
		fmt=Config[section]["format"],
		datefmt=Config[section]["datefmt"],
		sd_id=Config["logging"]["sd_id"],
	))
	return handler


def _is_console():
	try:
		return os.isatty(sys.stdin.fileno())
	except (AttributeError, ValueError, OSError):
		# stdin is replaced or closed (e.g. under a test runner)
		return False


@contextlib.contextmanager
def run_log(directory, file_name='run.log'):
	'''
	Copies every record emitted inside the block into ``<directory>/<file_name>``.
	An experiment keeps its own log next to its score tables and checkpoints.
	'''
	handler = logging.FileHandler(os.path.join(directory, file_name), encoding='utf-8')
	handler.setLevel(logging.DEBUG)
	handler.setFormatter(StructuredDataFormatter(fmt=RUN_LOG_FORMAT))
	root = logging.getLogger()
	root.addHandler(handler)
	try:
		yield handler
	finally:
		root.removeHandler(handler)
		handler.close()


class _StructuredDataLogger(logging.Logger):
	'''
	Adds the ``struct_data`` keyword to the logging calls, e.g.
	``L.info("Epoch finished", struct_data={'epoch': 3, 'loss': 0.42})``.
	'''

	def _log(self, level, msg, args, exc_info=None, struct_data=None, extra=None, stack_info=False, stacklevel=1):
		if struct_data is not None:
			if extra is None:
				extra = dict()
			extra['_struct_data'] = struct_data

		super()._log(level, msg, args, exc_info=exc_info, extra=extra, stack_info=stack_info, stacklevel=stacklevel)


logging.setLoggerClass(_StructuredDataLogger)


class StructuredDataFormatter(logging.Formatter):
	'''
	Renders ``struct_data`` as ``[sd key="value" ...]`` in front of the message.
	Floats are printed with four decimals so that losses and scores line up across records.
	'''

	def __init__(self, fmt=None, datefmt=None, style='%', sd_id='sd'):
		super().__init__(fmt, datefmt, style)
		self.SD_id = sd_id


	def format(self, record):
		record.struct_data = self.render_struct_data(record.__dict__.get("_struct_data"))
		return super().format(record)


	def formatTime(self, record, datefmt=None):
		ct = datetime.datetime.fromtimestamp(record.created)
		if datefmt is None:
			return "{}.{:03d}".format(ct.strftime("%Y-%m-%d %H:%M:%S"), int(record.msecs))
		return ct.strftime(datefmt)


	def render_struct_data(self, struct_data):
		if struct_data is None or len(struct_data) == 0:
			return ""
		return "[{} {}] ".format(
			self.SD_id,
			" ".join('{}="{}"'.format(key, _render_value(val)) for key, val in struct_data.items())
		)


def _render_value(value):
	if isinstance(value, float):
		return '{:.4f}'.format(value)
	return value


def _loop_exception_handler(loop, context):
	'''
	Logs an exception that escaped an asyncio task, with its traceback.
	'''
	exception = context.pop('exception', None)

	message = context.pop('message', '')
	if len(context) > 0:
		message += '\n' + pprint.pformat(context)

	if exception is not None:
		message += '\n' + ''.join(traceback.format_exception(exception.__class__, exception, exception.__traceback__)).rstrip('\n')

	logging.getLogger().error(message)
