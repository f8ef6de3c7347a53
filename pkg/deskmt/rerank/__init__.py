from .bleu import BleuResult, corpus_bleu, bleu_details, sentence_ngram_stats, ngram_counts
from .rerank import RerankConfig, RerankGrid, rerank, attach_scores, tune_rerank, unit_vectors
from .nbest import read_nbest, write_nbest
from .report import ScoreTable, bleu_report_lines

__all__ = [
	'BleuResult', 'corpus_bleu', 'bleu_details', 'sentence_ngram_stats', 'ngram_counts',
	'RerankConfig', 'RerankGrid', 'rerank', 'attach_scores', 'tune_rerank', 'unit_vectors',
	'read_nbest', 'write_nbest',
	'ScoreTable', 'bleu_report_lines',
]
