import os
import sys
import logging

from ..application import Application
from ..application import main_entry
from ..config import Config
from ..exceptions import CorpusError
from ..exceptions import DeskMTError
from ..exceptions import SchemaError
from ..exceptions import StageError
from ..log import LOG_NOTICE
from ..numerics import derive_seed
from ..pipeline.bpe import BpeModel
from ..pipeline.bpe import learn_bpe
from ..pipeline.corpus import MonoCorpus
from ..pipeline.corpus import ParallelCorpus
from ..pipeline.filtering import FilterRuleSet
from ..pipeline.filtering import filter_corpus
from ..pipeline.filtering import write_drop_log
from ..pipeline.generation import translator
from ..pipeline.noise import NoiseConfig
from ..pipeline.text import normalize_text
from ..rerank.bleu import bleu_details
from ..rerank.nbest import read_nbest
from ..rerank.rerank import RerankGrid
from ..rerank.rerank import rerank
from ..rerank.rerank import tune_rerank
from ..rerank.report import bleu_report_lines
from ..seq2seq.decoding import DecodeConfig
from ..seq2seq.persist import load_model
from ..seq2seq.vocabulary import Vocabulary
from . import ExperimentModule
from .gradsuite import OBJECTIVES
from .gradsuite import TOLERANCE
from .gradsuite import gradient_suite
from .runner import ExperimentRunner

#

L = logging.getLogger(__name__)

#


class DeskMTApplication(Application):
	'''
	The ``deskmt`` command line: one sub-command per pipeline, every one replayable from its inputs and ``--seed``.

	Text inputs of the model-facing commands (eval, backtranslate, distill, rerank) are whitespace-separated
	tokens of the given vocabulary, e.g. the output of ``bpe-apply``.
	'''

	def create_argument_parser(self, prog=None, description=None, epilog=None):
		parser = super().create_argument_parser(prog=prog or 'deskmt', description=description, epilog=epilog)
		commands = parser.add_subparsers(dest='command', metavar='command')
		commands.required = True

		def command(name, help):
			p = commands.add_parser(name, help=help)
			p.add_argument('--seed', type=int, default=None, help='random seed (default: the experiment\'s or 0)')
			return p

		p = command('run', 'run an experiment file stage by stage')
		p.add_argument('experiment', help='experiment INI file')

		p = command('eval', 'decode a corpus (or read hypotheses) and print corpus BLEU')
		p.add_argument('--model', action='append', default=[], help='model checkpoint; repeat for an ensemble')
		p.add_argument('--vocabulary', help='vocabulary file of the models')
		p.add_argument('--source', help='source sentences, one per line')
		p.add_argument('--reference', required=True, help='reference sentences, one per line')
		p.add_argument('--hypotheses', help='score this file instead of decoding')
		p.add_argument('--output', help='write the decoded hypotheses here')
		p.add_argument('--beam', type=int, default=None, help='beam size (default [decode] beam_size, 5)')
		p.add_argument('--length-penalty', type=float, default=None, help='length penalty (default [decode] length_penalty, 1.0)')

		p = command('search', 'architecture search over the data of an experiment file (resumable)')
		p.add_argument('experiment', help='experiment INI file with [data], [model] and [nao]')

		p = command('bpe-learn', 'learn a shared BPE merge table')
		p.add_argument('corpus', nargs='+', help='one text file per language')
		p.add_argument('--merges', type=int, default=1000)
		p.add_argument('--balance', action='store_true', help='down-sample the larger corpora to the smallest one')
		p.add_argument('--output', required=True, help='merge table file')
		p.add_argument('--vocabulary', help='also write the subword vocabulary here')

		p = command('bpe-apply', 'normalize and segment text with a merge table')
		p.add_argument('--merges', required=True, help='merge table file')
		p.add_argument('--input', required=True)
		p.add_argument('--output', required=True)

		p = command('filter', 'apply the corpus filtering rules ([filter] section) to a bitext')
		p.add_argument('--source', required=True)
		p.add_argument('--target', required=True)
		p.add_argument('--output-dir', help='where kept.tsv and dropped.tsv go')

		p = command('backtranslate', 'translate target-language text with a reverse model into synthetic pairs')
		p.add_argument('--model', required=True, help='reverse (target to source) model checkpoint')
		p.add_argument('--vocabulary', required=True)
		p.add_argument('--input', required=True, help='target-language sentences')
		p.add_argument('--output', required=True, help='TSV of synthetic source, target, provenance')
		p.add_argument('--beam', type=int, default=None)
		p.add_argument('--noise', action='store_true', help='noise the translations ([noise] section)')

		p = command('distill', 'translate source text with teacher models into distilled pairs')
		p.add_argument('--model', action='append', required=True, help='teacher checkpoint; repeat for an ensemble')
		p.add_argument('--vocabulary', required=True)
		p.add_argument('--input', required=True, help='source-language sentences')
		p.add_argument('--output', required=True, help='TSV of source, distilled target, provenance')
		p.add_argument('--beam', type=int, default=None)

		p = command('rerank', 'tune reranking weights on an n-best list and rerank')
		p.add_argument('--nbest', required=True, help='n-best list the weights are tuned on')
		p.add_argument('--reference', required=True, help='references of the tuning n-best list')
		p.add_argument('--vocabulary', required=True)
		p.add_argument('--apply', help='n-best list to rerank with the tuned weights (default: the tuning list)')
		p.add_argument('--output', help='write the reranked hypotheses here')

		p = command('grad-check', 'check analytic gradients of every training objective against finite differences')
		p.add_argument('--objective', action='append', choices=OBJECTIVES, help='check only these objectives')
		p.add_argument('--eps', type=float, default=1e-5)

		return parser


	async def initialize(self):
		self.add_module(ExperimentModule)
		self.Proactor = self.get_service('deskmt.ProactorService')
		self.Pipeline = self.get_service('deskmt.PipelineService')
		self.Nao = self.get_service('deskmt.NaoService')
		self.Experiments = self.get_service('deskmt.ExperimentService')


	async def main(self):
		handler = getattr(self, 'cmd_' + self.Args.command.replace('-', '_'))
		try:
			exit_code = await handler(self.Args)
		except SchemaError as e:
			L.error("Invalid experiment file", struct_data={'path': e.Path})
			print("deskmt: {}".format(e), file=sys.stderr)
			exit_code = self.EXIT_USAGE
		except StageError as e:
			L.error("Stage failed", struct_data={'stage': e.Stage})
			print("deskmt: {}".format(e), file=sys.stderr)
			exit_code = self.EXIT_FAILURE
		except (DeskMTError, OSError, ValueError) as e:
			L.error("Command failed", struct_data={'command': self.Args.command, 'reason': str(e)})
			print("deskmt: {}".format(e), file=sys.stderr)
			exit_code = self.EXIT_FAILURE
		self.set_exit_code(exit_code if exit_code is not None else self.EXIT_OK)


	def _seed(self, default=0):
		return self.Args.seed if self.Args.seed is not None else default


	def _output_dir(self, *names):
		directory = os.path.join(Config['general']['output_dir'], *names)
		os.makedirs(directory, exist_ok=True)
		return directory

	# Commands

	async def cmd_run(self, args):
		experiment = self.Experiments.load(args.experiment)
		if args.seed is not None:
			experiment = experiment.override('experiment', seeds=str(args.seed))
		table = await self.Experiments.run(experiment)
		print(table.to_markdown(), end='')
		return self.EXIT_OK


	async def cmd_eval(self, args):
		references = _read_nonempty(args.reference)
		if args.hypotheses is not None:
			hypotheses = _read_nonempty(args.hypotheses)
		else:
			if len(args.model) == 0 or args.vocabulary is None or args.source is None:
				raise CorpusError("eval needs --hypotheses, or --model, --vocabulary and --source to decode")
			decode = DecodeConfig()
			vocabulary = Vocabulary.load(args.vocabulary)
			sources = [vocabulary.encode(s) for s in _read_nonempty(args.source)]
			models = [load_model(path, expected_role='translation') for path in args.model]
			run = translator(
				models,
				args.beam if args.beam is not None else decode.BeamSize,
				args.length_penalty if args.length_penalty is not None else decode.LengthPenalty,
				decode.MaxLen,
			)
			hypotheses = await self.Proactor.execute(
				lambda: [' '.join(vocabulary.decode(run(s))) for s in sources]
			)
			if args.output is not None:
				_write_lines(args.output, hypotheses)

		result = bleu_details(hypotheses, references)
		print(bleu_report_lines(result, os.path.basename(args.reference)))
		return self.EXIT_OK


	async def cmd_search(self, args):
		experiment = self.Experiments.load(args.experiment)
		seed = self._seed(experiment.Experiment.Seeds[0])
		runner = ExperimentRunner(experiment, pipeline=self.Pipeline, nao=self.Nao, pubsub=self.PubSub)
		state = await runner.prepare(seed)
		directory = os.path.join(experiment.Experiment.OutputDir, 'nao')
		os.makedirs(directory, exist_ok=True)
		ranked = await self.Nao.search(
			state.ModelConfig, state.Bitext.Pairs, state.Dev, experiment.component('nao'), derive_seed(seed, 'nao'), directory
		)
		best = ranked[0]
		with open(os.path.join(directory, 'best_genotype.txt'), 'w', encoding='utf-8') as f:
			f.write(best.Genotype.text() + '\n')
		L.log(LOG_NOTICE, "Search finished", struct_data={'archive': len(ranked), 'best': '{:.4f}'.format(best.Score)})
		print("{}\t{:.4f}".format(best.Genotype.text(), best.Score))
		return self.EXIT_OK


	async def cmd_bpe_learn(self, args):
		corpora = [[normalize_text(s) for s in MonoCorpus.read(path, 'lang{}'.format(k))] for k, path in enumerate(args.corpus)]
		model = await self.Proactor.execute(
			lambda: learn_bpe(corpora, args.merges, shared=True, balance=args.balance, seed=self._seed())
		)
		model.save(args.output)
		if args.vocabulary is not None:
			model.Vocabulary.save(args.vocabulary)
		print("{} merges, {} symbols".format(len(model.Merges), len(model.Vocabulary)))
		return self.EXIT_OK


	async def cmd_bpe_apply(self, args):
		model = BpeModel.load(args.merges)
		lines = MonoCorpus.read(args.input, 'text')
		_write_lines(args.output, [' '.join(model.apply(normalize_text(s))) for s in lines])
		return self.EXIT_OK


	async def cmd_filter(self, args):
		corpus = ParallelCorpus.read_aligned(args.source, args.target).map(normalize_text)
		kept, dropped = filter_corpus(corpus, FilterRuleSet())
		directory = args.output_dir if args.output_dir is not None else self._output_dir('filter')
		os.makedirs(directory, exist_ok=True)
		kept.write_tsv(os.path.join(directory, 'kept.tsv'))
		write_drop_log(os.path.join(directory, 'dropped.tsv'), dropped)
		print("kept {} dropped {}".format(len(kept), len(dropped)))
		return self.EXIT_OK


	async def cmd_backtranslate(self, args):
		vocabulary = Vocabulary.load(args.vocabulary)
		model = load_model(args.model, expected_role='translation')
		mono = [vocabulary.encode(s) for s in _read_nonempty(args.input)]
		beam = args.beam if args.beam is not None else DecodeConfig().BeamSize
		noise = NoiseConfig() if args.noise else None
		corpus = await self.Pipeline.back_translate(model, mono, beam, noise, self._seed())
		_decoded(corpus, vocabulary).write_tsv(args.output, with_tags=True)
		print("{} synthetic pairs".format(len(corpus)))
		return self.EXIT_OK


	async def cmd_distill(self, args):
		vocabulary = Vocabulary.load(args.vocabulary)
		teachers = [load_model(path, expected_role='translation') for path in args.model]
		sources = [vocabulary.encode(s) for s in _read_nonempty(args.input)]
		beam = args.beam if args.beam is not None else DecodeConfig().BeamSize
		corpus = await self.Pipeline.distill(teachers, sources, beam)
		_decoded(corpus, vocabulary).write_tsv(args.output, with_tags=True)
		print("{} distilled pairs".format(len(corpus)))
		return self.EXIT_OK


	async def cmd_rerank(self, args):
		vocabulary = Vocabulary.load(args.vocabulary)
		tuning = read_nbest(args.nbest)
		references = [vocabulary.encode(s) for s in _read_nonempty(args.reference)]
		grid = RerankGrid()
		config = await self.Proactor.execute(
			lambda: tune_rerank(tuning, references, grid.weight_grid(len(tuning.ScorerNames)), grid.LengthWeights)
		)
		target = read_nbest(args.apply) if args.apply is not None else tuning
		chosen = rerank(target, config)
		if args.output is not None:
			_write_lines(args.output, [' '.join(vocabulary.decode(h.Tokens)) for h in chosen])
		print("weights\t{}".format('\t'.join(
			'{}={}'.format(name, w) for name, w in zip(tuning.ScorerNames, config.Weights)
		)))
		print("length_weight\t{}".format(config.LengthWeight))
		return self.EXIT_OK


	async def cmd_grad_check(self, args):
		objectives = tuple(args.objective) if args.objective else OBJECTIVES
		results = await self.Proactor.execute(lambda: gradient_suite(self._seed(), args.eps, objectives))
		failed = 0
		for name, (err, params) in results.items():
			ok = err < TOLERANCE
			failed += 0 if ok else 1
			print("{}\t{}\t{:.3e}\t{}".format(name, params, err, 'ok' if ok else 'FAIL'))
		return self.EXIT_OK if failed == 0 else self.EXIT_FAILURE


def _read_nonempty(path):
	lines = MonoCorpus.read(path, 'text').Sentences
	if len(lines) == 0:
		raise CorpusError("'{}' is empty".format(path))
	return lines


def _write_lines(path, lines):
	with open(path, 'w', encoding='utf-8') as f:
		for line in lines:
			f.write(line + '\n')


def _decoded(corpus, vocabulary):
	return ParallelCorpus(
		[(' '.join(vocabulary.decode(s)), ' '.join(vocabulary.decode(t))) for s, t in corpus.Pairs],
		tags=corpus.Tags,
	)


def main(args=None):
	main_entry(DeskMTApplication, args)
