import unicodedata


def normalize_text(text):
	'''
	NFKC normalization (full-width forms fold to their ASCII counterparts), non-printable characters
	removed, whitespace collapsed to single spaces.
	'''
	text = unicodedata.normalize('NFKC', text)
	text = ''.join(c if c.isprintable() else ' ' for c in text)
	return ' '.join(text.split())


def tokenize(text):
	return normalize_text(text).split()


def detokenize(tokens):
	return ' '.join(tokens)
