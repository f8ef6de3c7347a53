import os
import shutil
import tempfile
import unittest

from deskmt.exceptions import VocabularyError
from deskmt.seq2seq import BOS
from deskmt.seq2seq import EOS
from deskmt.seq2seq import FIRST_CONTENT_ID
from deskmt.seq2seq import PAD
from deskmt.seq2seq import UNK
from deskmt.seq2seq import Vocabulary
from deskmt.seq2seq import generable_ids
from deskmt.seq2seq import strip_sequence


class VocabularyTestCase(unittest.TestCase):

	def setUp(self):
		self.tmpdir = tempfile.mkdtemp()


	def tearDown(self):
		shutil.rmtree(self.tmpdir)


	def test_specials_come_first(self):
		v = Vocabulary(['a', 'b'])
		self.assertEqual(len(v), FIRST_CONTENT_ID + 2)
		self.assertEqual(v.id('a'), FIRST_CONTENT_ID)
		self.assertEqual(v.token(EOS), '</s>')
		self.assertEqual(v.content_ids(), [FIRST_CONTENT_ID, FIRST_CONTENT_ID + 1])


	def test_encode_unknown_and_decode(self):
		v = Vocabulary(['a', 'b'])
		ids = v.encode('a c b')
		self.assertEqual(ids, [FIRST_CONTENT_ID, UNK, FIRST_CONTENT_ID + 1])
		self.assertEqual(v.decode([BOS] + ids + [EOS, FIRST_CONTENT_ID]), ['a', 'b'])
		self.assertEqual(v.decode(ids, strip_special=False), ['a', '<unk>', 'b'])


	def test_add_is_idempotent(self):
		v = Vocabulary(['a'])
		self.assertEqual(v.add('a'), FIRST_CONTENT_ID)
		self.assertEqual(len(v), FIRST_CONTENT_ID + 1)


	def test_invalid_tokens(self):
		v = Vocabulary()
		with self.assertRaises(VocabularyError):
			v.add('<s>')
		with self.assertRaises(VocabularyError):
			v.add('a b')
		with self.assertRaises(VocabularyError):
			v.add('')
		with self.assertRaises(VocabularyError):
			v.token(99)


	def test_save_load(self):
		v = Vocabulary.from_corpora(['x y', 'y z'], [['w']])
		path = os.path.join(self.tmpdir, 'vocab.txt')
		v.save(path)
		self.assertEqual(Vocabulary.load(path), v)
		self.assertEqual(v.decode(v.content_ids()), ['x', 'y', 'z', 'w'])


	def test_load_rejects_file_without_specials(self):
		path = os.path.join(self.tmpdir, 'vocab.txt')
		with open(path, 'w') as f:
			f.write('a\nb\n')
		with self.assertRaises(VocabularyError):
			Vocabulary.load(path)


	def test_generable_and_strip(self):
		self.assertEqual(generable_ids(9), [EOS, 7, 8])
		self.assertEqual(strip_sequence([PAD, 7, 8, EOS, 9]), [7, 8])
