'''
Named recipes: the ordered stage lists of the submitted systems, replayed at toy scale.

A recipe is only a default; an experiment file may list its own ``stages``. Every stage name is
one the experiment runner knows (see `STAGES`).
'''

import collections

#

STAGES = (
	'filter',  # corpus filtering rules over the bitext
	'baseline',  # forward and reverse models on the bitext
	'mass',  # pre-training on mono + bitext, then fine-tuning
	'bt',  # noised back translation mixed with the bitext
	'kd',  # sequence-level distillation mixed with the bitext
	'madl',  # multi-agent dual learning over the trained agents
	'sca',  # soft contextual augmentation with a source LM
	'iterative',  # rounds of BT and KD in both directions
	'finetune',  # one epoch on the clean (provenance bitext) subset
	'speculation',  # distillation of the test sources, fine-tuned with early stop
	'r2l',  # right-to-left model used as a reranking scorer
	'nao',  # architecture search, best genotype trained as a scorer
	'rerank',  # n-best reranking over all scorers, weights tuned on dev
	'ensemble',  # equal-weight ensemble of the forward models
)


Recipe = collections.namedtuple('Recipe', ['name', 'stages', 'overrides'])


RECIPES = collections.OrderedDict((r.name, r) for r in (
	Recipe('en-de', ('baseline', 'bt', 'madl', 'speculation'), {
		'madl': {'epochs': '1'},
	}),
	Recipe('zh-en', ('mass', 'iterative', 'r2l', 'rerank'), {
		'iterative': {'rounds': '2'},
	}),
	Recipe('en-fi', ('baseline', 'bt', 'kd', 'finetune', 'r2l', 'nao', 'rerank'), {
		'rerank': {'beam': '12'},
	}),
	Recipe('ru-en', ('baseline', 'bt', 'kd', 'sca', 'ensemble'), {}),
	Recipe('en-kk', ('filter', 'baseline', 'iterative'), {
		'iterative': {'rounds': '6', 'forward_upsample': '2', 'reverse_upsample': '3'},
	}),
))


def recipe(name):
	try:
		return RECIPES[name]
	except KeyError:
		raise KeyError("Unknown recipe '{}', expected one of {}".format(name, ', '.join(RECIPES))) from None
