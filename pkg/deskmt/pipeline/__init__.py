import logging

from ..abc.module import Module
from ..config import Config
from ..metrics import MetricsModule
from ..proactor import ProactorModule
from .text import normalize_text, tokenize, detokenize
from .bpe import BpeModel, END_OF_WORD, learn_bpe, apply_bpe, balance_corpora, detokenize_subwords, word_symbols
from .corpus import ParallelCorpus, MonoCorpus, PROVENANCE
from .filtering import FilterRuleSet, DroppedPair, RULES, filter_corpus, write_drop_log
from .noise import NoiseConfig, add_noise
from .generation import translator, back_translate, distill, reranked_distill
from .mixing import mix_corpora, shard_mono
from .evaluation import evaluate_bleu, train_model, best_model
from .iterative import IterativeConfig, RoundRecord, iterate_bt_kd, final_models
from .finetune import finetune_clean_subset, build_speculation_set, speculation_finetune
from .tasks import TASKS, TaskData, make_task, number_words
from .recipes import STAGES, RECIPES, Recipe, recipe
from .service import PipelineService, split_shards

#

L = logging.getLogger(__name__)

#

Config.add_defaults(
	{
		'deskmt:pipeline': {
			'decode_shards': 4,
		}
	}
)


class PipelineModule(Module):

	Requires = (ProactorModule, MetricsModule)

	def __init__(self, app):
		super().__init__(app)
		self.Service = PipelineService(app, "deskmt.PipelineService")


__all__ = [
	'normalize_text', 'tokenize', 'detokenize',
	'BpeModel', 'END_OF_WORD', 'learn_bpe', 'apply_bpe', 'balance_corpora', 'detokenize_subwords', 'word_symbols',
	'ParallelCorpus', 'MonoCorpus', 'PROVENANCE',
	'FilterRuleSet', 'DroppedPair', 'RULES', 'filter_corpus', 'write_drop_log',
	'NoiseConfig', 'add_noise',
	'translator', 'back_translate', 'distill', 'reranked_distill',
	'mix_corpora', 'shard_mono',
	'evaluate_bleu', 'train_model', 'best_model',
	'IterativeConfig', 'RoundRecord', 'iterate_bt_kd', 'final_models',
	'finetune_clean_subset', 'build_speculation_set', 'speculation_finetune',
	'TASKS', 'TaskData', 'make_task', 'number_words',
	'STAGES', 'RECIPES', 'Recipe', 'recipe',
	'PipelineModule', 'PipelineService', 'split_shards',
]
