import logging

from ..config import Configurable
from ..exceptions import CorpusError
from ..log import LOG_NOTICE
from ..numerics import derive_seed
from ..seq2seq.model import build_model
from ..seq2seq.training import Trainer
from .corpus import ParallelCorpus
from .evaluation import best_model
from .evaluation import train_model
from .generation import back_translate
from .generation import distill
from .generation import reranked_distill
from .mixing import mix_corpora
from .noise import NoiseConfig

#

L = logging.getLogger(__name__)

#


class IterativeConfig(Configurable):

	ConfigDefaults = {
		'rounds': 1,
		'models_per_round': 1,
		'beam_size': 5,
		'from_scratch': True,  # False continues training the previous round's models
		'forward_upsample': 1,  # bitext factor when training x -> y
		'reverse_upsample': 1,  # bitext factor when training y -> x
		'noised_bt': True,
		'rerank_kd': False,  # rerank the distillation n-best with the reverse model's score of the source
		'rerank_weight': 0.5,  # weight of that reverse score, the forward score gets 1 - weight
		'tolerance': 0.0,  # allowed dev BLEU regression before a round is flagged
		'steps': 0,  # per model and round; 0 uses [train] steps
	}


	def __init__(self, config_section_name='iterative', config=None):
		super().__init__(config_section_name, config=config)
		self.Rounds = self.Config.getint('rounds')
		self.ModelsPerRound = self.Config.getint('models_per_round')
		self.BeamSize = self.Config.getint('beam_size')
		self.FromScratch = self.Config.getboolean('from_scratch')
		self.ForwardUpsample = self.Config.getint('forward_upsample')
		self.ReverseUpsample = self.Config.getint('reverse_upsample')
		self.NoisedBT = self.Config.getboolean('noised_bt')
		self.RerankKD = self.Config.getboolean('rerank_kd')
		self.RerankWeight = self.Config.getfloat('rerank_weight')
		self.Tolerance = self.Config.getfloat('tolerance')
		steps = self.Config.getint('steps')
		self.Steps = steps if steps > 0 else None
		if self.Rounds < 1:
			raise ValueError("rounds must be at least 1")
		if self.ModelsPerRound < 1:
			raise ValueError("models_per_round must be at least 1")
		if not 0.0 <= self.RerankWeight <= 1.0:
			raise ValueError("rerank_weight must lie in [0, 1]")


class RoundRecord(object):

	def __init__(self, round_no, forward_bleu, reverse_bleu, flagged, forward_models, reverse_models):
		self.Round = round_no
		self.ForwardBleu = forward_bleu
		self.ReverseBleu = reverse_bleu
		self.Flagged = flagged
		self.ForwardModels = forward_models
		self.ReverseModels = reverse_models


	def __repr__(self):
		return "<RoundRecord {} forward={:.2f} reverse={:.2f}{}>".format(
			self.Round, self.ForwardBleu, self.ReverseBleu, ' flagged' if self.Flagged else ''
		)


def _synthetic(bitext, upsample, mono_source, mono_target, forward, reverse, config, noise, seed, round_no):
	'''
	Training data for x -> y: up-sampled bitext, back translation of target mono with the best reverse
	model, distillation of source mono by the forward ensemble (reranked with the reverse model when
	`rerank_kd` is on).
	'''
	bt = back_translate(reverse, mono_target, config.BeamSize, noise, seed=derive_seed(seed, 'bt', round_no))
	if config.RerankKD:
		kd = reranked_distill(forward, reverse, mono_source, config.BeamSize, config.RerankWeight)
	else:
		kd = distill(forward, mono_source, config.BeamSize)
	return mix_corpora([(bitext, upsample), (bt, 1), (kd, 1)], seed=derive_seed(seed, 'mix', round_no))


def iterate_bt_kd(bitext, mono_source, mono_target, dev, forward_models, reverse_models, config=None, model_config=None, train_config=None, seed=0, on_round=None):
	'''
	Rounds of back translation plus distillation in both directions.

	Every round builds synthetic data with the previous models (best reverse model on dev for BT, the
	ensemble of the forward models for KD), then trains `models_per_round` models per direction.
	A round whose best forward dev BLEU drops by more than `tolerance` is flagged and the previous
	models are kept. Returns one `RoundRecord` per round.
	'''
	config = config if config is not None else IterativeConfig()
	if not isinstance(bitext, ParallelCorpus):
		bitext = ParallelCorpus(bitext)
	if len(bitext) == 0:
		raise CorpusError("Iterative back translation needs a bitext")
	noise = NoiseConfig() if config.NoisedBT else None
	reverse_dev = [(y, x) for x, y in dev]
	forward_models = list(forward_models)
	reverse_models = list(reverse_models)
	_, best_forward = best_model(forward_models, dev)
	records = []

	for round_no in range(1, config.Rounds + 1):
		reverse_best, _ = best_model(reverse_models, reverse_dev)
		forward_best, _ = best_model(forward_models, dev)
		forward_data = _synthetic(bitext, config.ForwardUpsample, mono_source, mono_target, forward_models, reverse_best, config, noise, seed, (round_no, 'forward'))
		reverse_data = _synthetic(
			bitext.reversed(), config.ReverseUpsample, mono_target, mono_source,
			reverse_models, forward_best, config, noise, seed, (round_no, 'reverse')
		)

		new_forward = []
		new_reverse = []
		for k in range(config.ModelsPerRound):
			fseed = derive_seed(seed, 'forward', round_no, k)
			rseed = derive_seed(seed, 'reverse', round_no, k)
			base_f = None if config.FromScratch else forward_models[k % len(forward_models)]
			base_r = None if config.FromScratch else reverse_models[k % len(reverse_models)]
			new_forward.append(_train(forward_data, base_f, model_config, train_config, fseed, 'forward{}.{}'.format(round_no, k), config.Steps))
			new_reverse.append(_train(reverse_data, base_r, model_config, train_config, rseed, 'reverse{}.{}'.format(round_no, k), config.Steps))

		_, forward_bleu = best_model(new_forward, dev)
		_, reverse_bleu = best_model(new_reverse, reverse_dev)
		flagged = forward_bleu < best_forward - config.Tolerance
		if flagged:
			L.warning("Round regressed, previous models kept", struct_data={
				'round': round_no, 'bleu': '{:.2f}'.format(forward_bleu), 'best': '{:.2f}'.format(best_forward),
			})
		else:
			forward_models = new_forward
			reverse_models = new_reverse
			best_forward = forward_bleu

		record = RoundRecord(round_no, forward_bleu, reverse_bleu, flagged, list(forward_models), list(reverse_models))
		records.append(record)
		L.log(LOG_NOTICE, "BT/KD round finished", struct_data={
			'round': round_no, 'forward_bleu': '{:.2f}'.format(forward_bleu), 'reverse_bleu': '{:.2f}'.format(reverse_bleu),
			'pairs': len(forward_data), 'flagged': flagged,
		})
		if on_round is not None:
			on_round(record)
	return records


def _train(data, base, model_config, train_config, seed, name, steps):
	if base is None:
		return train_model(data.Pairs, model_config, train_config, seed=seed, name=name, steps=steps)
	model = build_model(base.Genotype, base.ModelConfig, seed, name=name, parameters=base.Parameters.clone())
	model.Reversed = base.Reversed
	Trainer(model, train_config, seed=seed).train(data.Pairs, steps=steps)
	return model


def final_models(records):
	return records[-1].ForwardModels, records[-1].ReverseModels
