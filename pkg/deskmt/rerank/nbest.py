'''
N-best interchange file: tab-separated lines

	sent_id  hyp_rank  tokens  gen_score  score_1 ... score_k

with a header line ``#scorers<TAB>name_1<TAB>...``; tokens are space-separated ids.
'''

import logging

from ..exceptions import RerankError
from ..seq2seq.decoding import Hypothesis
from ..seq2seq.decoding import NBestEntry
from ..seq2seq.decoding import NBestList

#

L = logging.getLogger(__name__)

#


def write_nbest(path, nbest):
	with open(path, 'w', encoding='utf-8') as f:
		f.write('#scorers\t' + '\t'.join(nbest.ScorerNames) + '\n')
		for sent_id, entry in enumerate(nbest):
			f.write('#source\t{}\t{}\n'.format(sent_id, ' '.join(str(t) for t in entry.Source)))
			for rank, h in enumerate(entry.Hypotheses):
				fields = [
					str(sent_id), str(rank),
					' '.join(str(t) for t in h.Tokens),
					repr(h.Score),
				] + [repr(s) for s in h.Scores]
				f.write('\t'.join(fields) + '\n')


def read_nbest(path):
	entries = {}
	sources = {}
	scorer_names = []
	with open(path, 'r', encoding='utf-8') as f:
		for line_no, line in enumerate(f, start=1):
			line = line.rstrip('\n')
			if len(line) == 0:
				continue
			fields = line.split('\t')
			if fields[0] == '#scorers':
				scorer_names = [n for n in fields[1:] if len(n) > 0]
				continue
			if fields[0] == '#source':
				sources[int(fields[1])] = [int(t) for t in fields[2].split()] if len(fields) > 2 else []
				continue
			try:
				sent_id = int(fields[0])
				tokens = [int(t) for t in fields[2].split()]
				gen_score = float(fields[3])
				scores = [float(s) for s in fields[4:]]
			except (IndexError, ValueError):
				raise RerankError("{}:{}: malformed n-best line".format(path, line_no))
			if len(scores) != len(scorer_names):
				raise RerankError("{}:{}: expected {} scorer columns, got {}".format(path, line_no, len(scorer_names), len(scores)))
			entries.setdefault(sent_id, []).append(
				Hypothesis(tokens, gen_score, gen_score, len(tokens) + 1, True, scores=scores)
			)

	count = max(list(entries) + list(sources), default=-1) + 1
	return NBestList(
		[NBestEntry(sources.get(i, []), entries.get(i, [])) for i in range(count)],
		scorer_names=scorer_names
	)
