from .module import Module
from .service import Service
from .singleton import Singleton

__all__ = (
	'Module',
	'Service',
	'Singleton',
)
