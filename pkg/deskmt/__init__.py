from .abc.module import Module
from .abc.service import Service
from .abc.singleton import Singleton
from .application import Application
from .config import Config, Configurable
from .exceptions import (
	DeskMTError, NumericsError, CheckpointError, GenotypeError, VocabularyError, DecodeError, MaskError,
	WeightsError, EnsembleError, MadlDivergence, CorpusError, ArchiveError, RerankError, SchemaError, StageError,
)
from .log import LOG_NOTICE
from .pubsub import subscribe, PubSub
from .mass import MassModule, MassService
from .madl import MadlModule, MadlService
from .nao import NaoModule, NaoService
from .pipeline import PipelineModule, PipelineService

from .__version__ import __version__, __build__


__all__ = (
	'Module',
	'Service',
	'Singleton',
	'Application',
	'Config',
	'Configurable',
	'DeskMTError',
	'NumericsError',
	'CheckpointError',
	'GenotypeError',
	'VocabularyError',
	'DecodeError',
	'MaskError',
	'WeightsError',
	'EnsembleError',
	'MadlDivergence',
	'CorpusError',
	'ArchiveError',
	'RerankError',
	'SchemaError',
	'StageError',
	'LOG_NOTICE',
	'subscribe',
	'PubSub',
	'MassModule',
	'MassService',
	'MadlModule',
	'MadlService',
	'NaoModule',
	'NaoService',
	'PipelineModule',
	'PipelineService',
	'__version__',
	'__build__',
)
