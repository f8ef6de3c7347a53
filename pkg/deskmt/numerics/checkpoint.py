'''
Checkpoint container.

Layout, all integers little-endian::

	8 bytes   magic  b"DMTCKPT\\0"
	uint32    format version (1)
	uint32    metadata length, followed by that many bytes of UTF-8 text
	uint32    tensor count
	per tensor:
		uint32  name length, UTF-8 name
		uint32  rank, then rank x uint64 dimensions
		product(shape) x float64 ('<f8'), row-major

Round-trips are bit-exact.
'''

import os
import struct
import logging
import collections

import numpy as np

from ..exceptions import CheckpointError

#

L = logging.getLogger(__name__)

#

MAGIC = b'DMTCKPT\x00'
VERSION = 1


def save_checkpoint(path, tensors, metadata=''):
	dirname = os.path.dirname(path)
	if len(dirname) > 0:
		os.makedirs(dirname, exist_ok=True)

	meta = metadata.encode('utf-8')
	tmp_path = path + '.tmp'
	with open(tmp_path, 'wb') as f:
		f.write(MAGIC)
		f.write(struct.pack('<II', VERSION, len(meta)))
		f.write(meta)
		f.write(struct.pack('<I', len(tensors)))
		for name, data in tensors.items():
			data = np.ascontiguousarray(data, dtype='<f8')
			bname = name.encode('utf-8')
			f.write(struct.pack('<I', len(bname)))
			f.write(bname)
			f.write(struct.pack('<I', data.ndim))
			if data.ndim > 0:
				f.write(struct.pack('<{}Q'.format(data.ndim), *data.shape))
			f.write(data.tobytes())
	os.replace(tmp_path, path)
	L.debug("Checkpoint saved", struct_data={'path': path, 'tensors': len(tensors)})


def _read(f, n, path):
	data = f.read(n)
	if len(data) != n:
		raise CheckpointError("Truncated checkpoint", path=path)
	return data


def load_checkpoint(path):
	'''
	Returns `(OrderedDict name -> ndarray, metadata text)`.
	'''
	try:
		f = open(path, 'rb')
	except OSError as e:
		raise CheckpointError("Cannot open checkpoint: {}".format(e), path=path)

	with f:
		if _read(f, len(MAGIC), path) != MAGIC:
			raise CheckpointError("Not a checkpoint file (bad magic)", path=path)
		version, meta_len = struct.unpack('<II', _read(f, 8, path))
		if version != VERSION:
			raise CheckpointError("Unsupported checkpoint version {}".format(version), path=path)
		try:
			metadata = _read(f, meta_len, path).decode('utf-8')
		except UnicodeDecodeError:
			raise CheckpointError("Corrupt metadata block", path=path)

		count, = struct.unpack('<I', _read(f, 4, path))
		tensors = collections.OrderedDict()
		for _ in range(count):
			name_len, = struct.unpack('<I', _read(f, 4, path))
			name = _read(f, name_len, path).decode('utf-8')
			ndim, = struct.unpack('<I', _read(f, 4, path))
			shape = struct.unpack('<{}Q'.format(ndim), _read(f, 8 * ndim, path)) if ndim > 0 else ()
			size = int(np.prod(shape)) if ndim > 0 else 1
			data = np.frombuffer(_read(f, 8 * size, path), dtype='<f8').astype(np.float64).reshape(shape)
			tensors[name] = data

		if len(f.read(1)) != 0:
			raise CheckpointError("Trailing bytes after last tensor", path=path)

	return tensors, metadata


def parse_metadata(text):
	'''
	Metadata is a sequence of ``[section]`` blocks of free text; returns section name to body.
	'''
	sections = collections.OrderedDict()
	current = None
	for line in text.split('\n'):
		if line.startswith('[') and line.endswith(']'):
			current = line[1:-1]
			sections[current] = []
		elif current is not None:
			sections[current].append(line)
	return collections.OrderedDict((k, '\n'.join(v).strip('\n')) for k, v in sections.items())


def format_metadata(sections):
	return '\n'.join('[{}]\n{}'.format(k, v) for k, v in sections.items()) + '\n'
