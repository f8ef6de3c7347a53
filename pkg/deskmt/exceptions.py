
class DeskMTError(RuntimeError):
	pass


class NumericsError(DeskMTError):

	def __init__(self, message, node=None):
		super().__init__(message)
		self.Node = node


class CheckpointError(DeskMTError):

	def __init__(self, message, path=None):
		super().__init__(message)
		self.Path = path


class GenotypeError(DeskMTError):

	def __init__(self, message, node_path=None):
		super().__init__(message if node_path is None else "{}: {}".format(node_path, message))
		self.NodePath = node_path


class VocabularyError(DeskMTError):
	pass


class DecodeError(DeskMTError):
	pass


class MaskError(DeskMTError):
	pass


class WeightsError(DeskMTError):

	def __init__(self, message, weight_sum):
		super().__init__(message)
		self.Sum = weight_sum


class EnsembleError(DeskMTError):
	pass


class MadlDivergence(DeskMTError):

	def __init__(self, message, checkpoint_path=None):
		super().__init__(message)
		self.CheckpointPath = checkpoint_path


class CorpusError(DeskMTError):
	pass


class ArchiveError(DeskMTError):

	def __init__(self, message, line_no=None):
		super().__init__(message if line_no is None else "line {}: {}".format(line_no, message))
		self.LineNo = line_no


class RerankError(DeskMTError):
	pass


class SchemaError(DeskMTError):

	def __init__(self, message, path):
		super().__init__("{}: {}".format(path, message))
		self.Path = path


class StageError(DeskMTError):

	def __init__(self, message, stage):
		super().__init__("stage '{}': {}".format(stage, message))
		self.Stage = stage
