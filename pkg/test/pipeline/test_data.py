import os
import shutil
import tempfile
import unittest

from deskmt.exceptions import CorpusError
from deskmt.numerics import stream
from deskmt.pipeline import MonoCorpus
from deskmt.pipeline import NoiseConfig
from deskmt.pipeline import ParallelCorpus
from deskmt.pipeline import RECIPES
from deskmt.pipeline import STAGES
from deskmt.pipeline import add_noise
from deskmt.pipeline import make_task
from deskmt.pipeline import mix_corpora
from deskmt.pipeline import normalize_text
from deskmt.pipeline import number_words
from deskmt.pipeline import recipe
from deskmt.pipeline import shard_mono
from deskmt.pipeline import split_shards
from deskmt.seq2seq import BLANK


class TaskTestCase(unittest.TestCase):

	def test_reverse_task(self):
		task = make_task('reverse', vocab_size=20, bitext=30, mono=10, dev=5, test=5, seed=1)
		self.assertEqual(len(task.Vocabulary), 20)
		for x, y in task.Bitext:
			self.assertEqual(y, x[::-1])
			self.assertTrue(3 <= len(x) <= 12)
			self.assertTrue(all(7 <= t < 20 for t in x))
		self.assertEqual(len(task.MonoSource), 10)
		self.assertEqual(task.MonoSource.Language, 'src')


	def test_parts_are_independent_of_other_sizes(self):
		a = make_task('copy', bitext=10, mono=5, dev=4, seed=3)
		b = make_task('copy', bitext=20, mono=50, dev=4, seed=3)
		self.assertEqual(a.Bitext.Pairs, b.Bitext.Pairs[:10])
		self.assertEqual(a.Dev, b.Dev)
		c = make_task('copy', bitext=10, mono=5, dev=4, seed=4)
		self.assertNotEqual(a.Dev, c.Dev)


	def test_noisy_partition(self):
		task = make_task('reverse', bitext=20, mono=0, noisy=7, seed=0)
		self.assertEqual(task.Bitext.provenance_counts(), {'bitext': 20, 'noisy': 7})
		self.assertEqual(len(task.Bitext.tagged('bitext')), 20)


	def test_number_words(self):
		self.assertEqual(number_words(0), ['zero'])
		self.assertEqual(number_words(40), ['forty'])
		self.assertEqual(number_words(115), ['one', 'hundred', 'fifteen'])
		self.assertEqual(number_words(999), ['nine', 'hundred', 'ninety', 'nine'])
		task = make_task('number-words', bitext=5, mono=0, seed=0)
		v = task.Vocabulary
		for x, y in task.Bitext:
			self.assertEqual(v.decode(y), number_words(int(''.join(v.decode(x)))))


	def test_invalid_task(self):
		with self.assertRaises(ValueError):
			make_task('sort')
		with self.assertRaises(ValueError):
			make_task('copy', vocab_size=8)


class NoiseTestCase(unittest.TestCase):

	def test_identity(self):
		s = [7, 8, 9, 10]
		self.assertEqual(add_noise(s, NoiseConfig.identity(), stream(0)), s)


	def test_local_shuffle_bound(self):
		config = NoiseConfig(config={'p_drop': 0.0, 'p_blank': 0.0, 'p_swap': 1.0, 'swap_window': 3})
		rng = stream(0, 'noise')
		s = list(range(100, 130))
		for _ in range(20):
			out = add_noise(s, config, rng)
			self.assertEqual(sorted(out), s)
			self.assertTrue(all(abs(out.index(t) - i) <= 2 for i, t in enumerate(s)))


	def test_drop_everything_keeps_one_token(self):
		config = NoiseConfig(config={'p_drop': 1.0, 'p_blank': 0.0, 'p_swap': 0.0})
		out = add_noise([7, 8, 9], config, stream(1))
		self.assertEqual(len(out), 1)
		self.assertIn(out[0], [7, 8, 9])


	def test_blank_filler(self):
		config = NoiseConfig(config={'p_drop': 0.0, 'p_blank': 1.0, 'p_swap': 0.0})
		self.assertEqual(add_noise([7, 8], config, stream(0)), [BLANK, BLANK])
		self.assertEqual(add_noise(['a', 'b'], config, stream(0)), ['<blank>', '<blank>'])


	def test_invalid(self):
		with self.assertRaises(ValueError):
			NoiseConfig(config={'p_drop': 1.5})


class MixingTestCase(unittest.TestCase):

	def test_upsampling(self):
		bitext = ParallelCorpus([([7], [8]), ([9], [10])])
		bt = ParallelCorpus([([11], [12])], provenance='bt')
		mixed = mix_corpora([(bitext, 3), (bt, 1)], seed=0)
		self.assertEqual(mixed.provenance_counts(), {'bitext': 6, 'bt': 1})
		self.assertEqual(mixed.Pairs, mix_corpora([(bitext, 3), (bt, 1)], seed=0).Pairs)
		for pair, tag in zip(mixed.Pairs, mixed.Tags):
			self.assertEqual(tag, 'bt' if pair == ([11], [12]) else 'bitext')
		with self.assertRaises(ValueError):
			mix_corpora([(bitext, 1.5)])
		with self.assertRaises(ValueError):
			mix_corpora([(bitext, 0)])


	def test_shard_mono(self):
		mono = MonoCorpus([[7], [8], [9]], 'src')
		shards = shard_mono(mono, shards=4, seed=0)
		self.assertEqual(len(shards), 4)
		self.assertTrue(all(len(s) == 3 and s.Language == 'src' for s in shards))


	def test_split_shards(self):
		items = list(range(10))
		pieces = split_shards(items, 3)
		self.assertEqual([start for start, _ in pieces], [0, 4, 8])
		self.assertEqual(sum((chunk for _, chunk in pieces), []), items)
		self.assertEqual(split_shards([], 4), [])
		self.assertEqual(len(split_shards([1, 2], 8)), 2)


class CorpusTestCase(unittest.TestCase):

	def setUp(self):
		self.tmpdir = tempfile.mkdtemp()


	def tearDown(self):
		shutil.rmtree(self.tmpdir)


	def test_tags_follow_pairs(self):
		corpus = ParallelCorpus([('a', 'b')]) + ParallelCorpus([('c', 'd')], provenance='bt')
		self.assertEqual(corpus.reversed().Pairs, [('b', 'a'), ('d', 'c')])
		self.assertEqual(corpus.without('bt').Pairs, [('a', 'b')])
		self.assertEqual(corpus.subset([1]).Tags, ['bt'])
		self.assertEqual(corpus.map(str.upper).Pairs, [('A', 'B'), ('C', 'D')])
		with self.assertRaises(CorpusError):
			ParallelCorpus([('a', 'b')], tags=[])


	def test_files(self):
		path = os.path.join(self.tmpdir, 'pairs.tsv')
		corpus = ParallelCorpus([('a b', 'c'), ('d', 'e f')], tags=['bitext', 'kd'])
		corpus.write_tsv(path, with_tags=True)
		loaded = ParallelCorpus.read_tsv(path)
		self.assertEqual(loaded.Pairs, corpus.Pairs)
		self.assertEqual(loaded.Tags, corpus.Tags)

		src = os.path.join(self.tmpdir, 'src.txt')
		tgt = os.path.join(self.tmpdir, 'tgt.txt')
		MonoCorpus(['a', 'b'], 'src').write(src)
		MonoCorpus(['c'], 'tgt').write(tgt)
		with self.assertRaises(CorpusError):
			ParallelCorpus.read_aligned(src, tgt)
		with self.assertRaises(CorpusError):
			MonoCorpus(['a'], '')


	def test_normalize_text(self):
		self.assertEqual(normalize_text('\uff21\uff22\uff23  x\u200b\ty'), 'ABC x y')


class RecipeTestCase(unittest.TestCase):

	def test_recipes_use_known_stages(self):
		for r in RECIPES.values():
			self.assertTrue(set(r.stages) <= set(STAGES))
		self.assertEqual(recipe('en-kk').overrides['iterative']['rounds'], '6')
		with self.assertRaises(KeyError):
			recipe('en-xx')
