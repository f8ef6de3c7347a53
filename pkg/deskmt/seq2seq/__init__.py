from .vocabulary import (
	Vocabulary, PAD, BOS, EOS, UNK, MASK, SEP, BLANK, SPECIAL_TOKENS, FIRST_CONTENT_ID,
	generable_ids, strip_sequence,
)
from .genotype import (
	Genotype, LayerGene, Branch, OPS, ENCODER_OPS, DECODER_OPS, NODE_COUNT,
	validate_genotype, transformer_genotype, zero_genotype, random_genotype,
)
from .modelconfig import ModelConfig
from .packing import Packing
from .model import Seq2SeqBase, GenotypeModel, EncoderState, build_model, branch_prefix
from .transformer import TransformerModel
from .decoding import (
	Hypothesis, NBestEntry, NBestList, beam_decode, greedy_decode_fn, ModelStepper,
	logprobs, beam_search, greedy_decode, score_sequence, score_batch, translate, DecodeConfig, reusable_len,
)
from .training import TrainConfig, Trainer, sequence_nll, train_step, apply_gradients, reverse_targets, iterate_batches
from .persist import save_model, load_model

__all__ = [
	'Vocabulary', 'PAD', 'BOS', 'EOS', 'UNK', 'MASK', 'SEP', 'BLANK', 'SPECIAL_TOKENS', 'FIRST_CONTENT_ID',
	'generable_ids', 'strip_sequence',
	'Genotype', 'LayerGene', 'Branch', 'OPS', 'ENCODER_OPS', 'DECODER_OPS', 'NODE_COUNT',
	'validate_genotype', 'transformer_genotype', 'zero_genotype', 'random_genotype',
	'ModelConfig', 'Packing',
	'Seq2SeqBase', 'GenotypeModel', 'EncoderState', 'build_model', 'branch_prefix',
	'TransformerModel',
	'Hypothesis', 'NBestEntry', 'NBestList', 'beam_decode', 'greedy_decode_fn', 'ModelStepper',
	'logprobs', 'beam_search', 'greedy_decode', 'score_sequence', 'score_batch', 'translate', 'DecodeConfig', 'reusable_len',
	'TrainConfig', 'Trainer', 'sequence_nll', 'train_step', 'apply_gradients', 'reverse_targets', 'iterate_batches',
	'save_model', 'load_model',
]
