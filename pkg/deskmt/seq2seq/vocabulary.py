import logging

from ..exceptions import VocabularyError

#

L = logging.getLogger(__name__)

#

PAD = 0
BOS = 1
EOS = 2
UNK = 3
MASK = 4  # masked-fragment symbol
SEP = 5  # joins two masked sequences into one encoder input
BLANK = 6  # filler token of the back-translation noise

SPECIAL_TOKENS = ('<pad>', '<s>', '</s>', '<unk>', '<mask>', '<sep>', '<blank>')
FIRST_CONTENT_ID = len(SPECIAL_TOKENS)

# Ids a decoder may emit
NON_GENERABLE = frozenset([PAD, BOS, UNK, MASK, SEP, BLANK])


class Vocabulary(object):
	'''
	Dense, stable mapping between subword strings and ids. Ids 0..6 are the special symbols.
	'''

	def __init__(self, tokens=()):
		self.Tokens = list(SPECIAL_TOKENS)
		self.Index = {t: i for i, t in enumerate(self.Tokens)}
		for token in tokens:
			self.add(token)


	def add(self, token):
		i = self.Index.get(token)
		if i is not None:
			if i < FIRST_CONTENT_ID:
				raise VocabularyError("Token '{}' collides with a special symbol".format(token))
			return i
		if len(token) == 0 or any(c.isspace() for c in token):
			raise VocabularyError("Invalid token {!r}".format(token))
		i = len(self.Tokens)
		self.Tokens.append(token)
		self.Index[token] = i
		return i


	def __len__(self):
		return len(self.Tokens)


	def __contains__(self, token):
		return token in self.Index


	def __eq__(self, other):
		return isinstance(other, Vocabulary) and self.Tokens == other.Tokens


	def id(self, token):
		return self.Index.get(token, UNK)


	def token(self, i):
		if i < 0 or i >= len(self.Tokens):
			raise VocabularyError("Id {} out of range for vocabulary of {}".format(i, len(self.Tokens)))
		return self.Tokens[i]


	def encode(self, tokens):
		if isinstance(tokens, str):
			tokens = tokens.split()
		return [self.Index.get(t, UNK) for t in tokens]


	def decode(self, ids, strip_special=True):
		'''
		Ids to tokens; stops at the first EOS. With `strip_special`, other special ids are dropped.
		'''
		out = []
		for i in ids:
			if i == EOS:
				break
			if strip_special and i < FIRST_CONTENT_ID:
				continue
			out.append(self.token(i))
		return out


	def validate(self, ids):
		for i in ids:
			if i < 0 or i >= len(self.Tokens):
				raise VocabularyError("Id {} out of range for vocabulary of {}".format(i, len(self.Tokens)))
		return ids


	def content_ids(self):
		return list(range(FIRST_CONTENT_ID, len(self.Tokens)))


	def save(self, path):
		with open(path, 'w', encoding='utf-8') as f:
			for t in self.Tokens:
				f.write(t + '\n')


	@classmethod
	def load(cls, path):
		with open(path, 'r', encoding='utf-8') as f:
			tokens = [line.rstrip('\n') for line in f if len(line.strip()) > 0]
		if tuple(tokens[:FIRST_CONTENT_ID]) != SPECIAL_TOKENS:
			raise VocabularyError("Vocabulary file '{}' does not start with the special symbols".format(path))
		return cls(tokens[FIRST_CONTENT_ID:])


	@classmethod
	def from_corpora(cls, *sentence_lists):
		'''
		Collect whitespace tokens in first-seen order.
		'''
		vocab = cls()
		for sentences in sentence_lists:
			for sentence in sentences:
				for token in (sentence.split() if isinstance(sentence, str) else sentence):
					vocab.add(token)
		return vocab


def generable_ids(vocab_size):
	return [i for i in range(vocab_size) if i not in NON_GENERABLE]


def strip_sequence(ids):
	'''
	Drop PAD and everything from the first EOS on.
	'''
	out = []
	for i in ids:
		if i == EOS:
			break
		if i == PAD:
			continue
		out.append(int(i))
	return out
