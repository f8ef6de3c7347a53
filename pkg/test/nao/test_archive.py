import os
import shutil
import tempfile
import unittest

from deskmt.exceptions import ArchiveError
from deskmt.nao import Archive
from deskmt.nao import PerfRecord
from deskmt.numerics import stream
from deskmt.seq2seq import random_genotype
from deskmt.seq2seq import transformer_genotype


class ArchiveTestCase(unittest.TestCase):

	def setUp(self):
		self.tmpdir = tempfile.mkdtemp()
		self.path = os.path.join(self.tmpdir, 'archive.tsv')


	def tearDown(self):
		shutil.rmtree(self.tmpdir)


	def test_persist_and_reload(self):
		rng = stream(0, 'archive')
		genotypes = [random_genotype(1, rng) for _ in range(3)]
		archive = Archive(self.path)
		for n, g in enumerate(genotypes):
			self.assertTrue(archive.append(PerfRecord(g, 0.1 * (n + 1), seed=7, budget=5, iteration=n)))
		self.assertFalse(archive.append(PerfRecord(genotypes[0], 0.9)))

		reloaded = Archive(self.path)
		self.assertEqual(len(reloaded), 3)
		self.assertIn(genotypes[2], reloaded)
		self.assertEqual(reloaded.get(genotypes[1]).Score, archive.get(genotypes[1]).Score)
		self.assertEqual(reloaded.best().Genotype, genotypes[2])
		self.assertEqual(reloaded.get(genotypes[0]).Budget, 5)


	def test_ranking_and_progress(self):
		rng = stream(1, 'archive')
		archive = Archive()
		scores = [(0.3, 0), (0.5, 0), (0.5, 1), (0.2, 2)]
		records = [PerfRecord(random_genotype(1, rng), s, iteration=i) for s, i in scores]
		for r in records:
			archive.append(r)
		self.assertEqual([r.Score for r in archive.ranked()], [0.5, 0.5, 0.3, 0.2])
		self.assertIs(archive.ranked()[0], records[1])
		self.assertEqual(archive.best_by_iteration(), [(0, 0.5), (1, 0.5), (2, 0.5)])
		self.assertIsNone(Archive().best())


	def test_corrupt_line_reports_its_number(self):
		text = transformer_genotype(1).text()
		with open(self.path, 'w') as f:
			f.write('#genotype\tscore\tseed\tbudget\titeration\n')
			f.write('{}\t0.5\t0\t10\t0\n'.format(text))
			f.write('{}\t0.5\t0\t10\n'.format(text))
		with self.assertRaises(ArchiveError) as cm:
			Archive(self.path)
		self.assertEqual(cm.exception.LineNo, 3)
		self.assertTrue(str(cm.exception).startswith('line 3:'))


	def test_invalid_genotype_line(self):
		with open(self.path, 'w') as f:
			f.write('encoder=0:lstm+0:zero,1:ffn+1:zero;decoder=0:ffn+0:zero,1:ffn+1:zero,2:ffn+2:zero\t0.5\t0\t10\t0\n')
		with self.assertRaises(ArchiveError) as cm:
			Archive(self.path)
		self.assertEqual(cm.exception.LineNo, 1)


	def test_non_numeric_score(self):
		with open(self.path, 'w') as f:
			f.write('{}\thigh\t0\t10\t0\n'.format(transformer_genotype(1).text()))
		with self.assertRaises(ArchiveError):
			Archive(self.path)


	def test_view_of_earlier_iterations(self):
		rng = stream(2, 'archive')
		archive = Archive(self.path)
		records = [PerfRecord(random_genotype(1, rng), 0.1 * n, iteration=it) for n, it in enumerate([0, 0, 1, 2, 1])]
		for r in records:
			archive.append(r)
		view = archive.before(2)
		self.assertIsNone(view.Path)
		self.assertEqual([r.Genotype for r in view.Records], [records[i].Genotype for i in (0, 1, 2, 4)])
		self.assertNotIn(records[3].Genotype, view)
		self.assertEqual(len(archive.before(0)), 0)
		self.assertEqual(len(Archive(self.path)), 5)
