import numpy as np

from ..numerics import NEG_INF


class Packing(object):
	'''
	Row layout of several sequences stacked into one matrix.

	Sentences of a batch are concatenated row-wise; attention masks keep them independent,
	so one 2-D forward pass serves the whole batch.
	'''

	def __init__(self, lengths):
		self.Lengths = [int(n) for n in lengths]
		self.Offsets = np.concatenate([[0], np.cumsum(self.Lengths)]).astype(np.int64)
		self.Total = int(self.Offsets[-1])
		self.Segment = np.repeat(np.arange(len(self.Lengths)), self.Lengths).astype(np.int64)
		if self.Total > 0:
			self.Position = np.concatenate([np.arange(n) for n in self.Lengths]).astype(np.int64)
		else:
			self.Position = np.zeros(0, dtype=np.int64)


	def __len__(self):
		return len(self.Lengths)


	def self_mask(self, causal=False):
		allowed = self.Segment[:, None] == self.Segment[None, :]
		if causal:
			allowed &= self.Position[None, :] <= self.Position[:, None]
		return np.where(allowed, 0.0, NEG_INF)


	def cross_mask(self, memory_packing, source_of_segment=None):
		'''
		Mask of queries in this packing against rows of `memory_packing`.
		`source_of_segment[i]` names the memory segment that query segment `i` reads; identity by default.
		'''
		if source_of_segment is None:
			source_of_segment = np.arange(len(self.Lengths))
		source_of_segment = np.asarray(source_of_segment, dtype=np.int64)
		row_source = source_of_segment[self.Segment]
		return np.where(row_source[:, None] == memory_packing.Segment[None, :], 0.0, NEG_INF)


	def shift_index(self, k):
		'''
		For every row, the index of the row `k` positions earlier in the same sentence (later for negative `k`), or -1.
		'''
		source_pos = self.Position - k
		lengths = np.asarray(self.Lengths, dtype=np.int64)[self.Segment] if self.Total > 0 else np.zeros(0, dtype=np.int64)
		valid = (source_pos >= 0) & (source_pos < lengths)
		return np.where(valid, self.Offsets[self.Segment] + source_pos, -1)


	def last_rows(self):
		return self.Offsets[1:] - 1


	def segment_rows(self, i):
		return slice(int(self.Offsets[i]), int(self.Offsets[i + 1]))
