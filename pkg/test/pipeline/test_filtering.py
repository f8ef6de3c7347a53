import os
import shutil
import tempfile
import unittest

from deskmt.pipeline import FilterRuleSet
from deskmt.pipeline import ParallelCorpus
from deskmt.pipeline import filter_corpus
from deskmt.pipeline import write_drop_log


class FilterTestCase(unittest.TestCase):

	def setUp(self):
		self.tmpdir = tempfile.mkdtemp()


	def tearDown(self):
		shutil.rmtree(self.tmpdir)


	def test_each_rule(self):
		rules = FilterRuleSet()
		self.assertIsNone(rules.check('the house', 'das haus'))
		self.assertEqual(rules.check('the house', ''), 'length')
		self.assertEqual(rules.check('a', 'one two three four five'), 'ratio')
		self.assertEqual(rules.check('User said hi', 'er sagte hallo'), 'prefix')
		self.assertEqual(rules.check('ok', 'NGC 2345'), 'prefix')
		self.assertEqual(rules.check('THE HOUSE', 'das haus'), 'lowercase')
		self.assertIsNone(rules.check('the house', 'DAS HAUS'))
		self.assertEqual(rules.check('the\x07 house', 'das haus'), 'printable')


	def test_first_rule_wins(self):
		self.assertEqual(FilterRuleSet().check('USER', 'a b c d e f g'), 'ratio')


	def test_configurable_rules(self):
		rules = FilterRuleSet(config={'lowercase': False, 'prefixes': '', 'english_side': 'both'})
		self.assertIsNone(rules.check('THE HOUSE', 'User'))
		rules = FilterRuleSet(config={'english_side': 'target'})
		self.assertEqual(rules.check('the house', 'DAS HAUS'), 'lowercase')
		rules = FilterRuleSet(config={'alignment': True, 'alignment_threshold': 0.5})
		self.assertEqual(rules.check('the house', 'das haus', score=0.1), 'alignment')
		self.assertIsNone(rules.check('the house', 'das haus', score=0.9))


	def test_invalid_config(self):
		with self.assertRaises(ValueError):
			FilterRuleSet(config={'max_ratio': 1.0})
		with self.assertRaises(ValueError):
			FilterRuleSet(config={'english_side': 'neither'})


	def test_filter_corpus(self):
		corpus = ParallelCorpus([
			('the house', 'das haus'),
			('the house', 'das haus'),
			('User x', 'y'),
			('a cat', 'eine katze'),
		], tags=['bitext', 'bitext', 'noisy', 'bt'])
		kept, dropped = filter_corpus(corpus)
		self.assertEqual(kept.Pairs, [('the house', 'das haus'), ('a cat', 'eine katze')])
		self.assertEqual(kept.Tags, ['bitext', 'bt'])
		self.assertEqual([(d.line_no, d.rule) for d in dropped], [(2, 'dedupe'), (3, 'prefix')])

		path = os.path.join(self.tmpdir, 'dropped.tsv')
		write_drop_log(path, dropped)
		with open(path) as f:
			lines = f.read().splitlines()
		self.assertEqual(lines, ['2\tdedupe\tthe house ||| das haus', '3\tprefix\tUser x ||| y'])


	def test_id_sequences_skip_text_rules(self):
		corpus = ParallelCorpus([([7, 8], [9, 8]), ([7, 8], [9, 8]), ([7], [7, 8, 9, 10, 11])])
		kept, dropped = filter_corpus(corpus)
		self.assertEqual(len(kept), 1)
		self.assertEqual([d.rule for d in dropped], ['dedupe', 'ratio'])
