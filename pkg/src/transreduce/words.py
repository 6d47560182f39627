"""Words are tuples of letter names so that letters like ``i1`` stay atomic.

Text forms: a word whose letters are all single characters is written as
their concatenation; otherwise the letters are joined with ``.``.  The empty
word is written ``-``.
"""

from typing import Iterable, Sequence, Tuple, Union

Word = Tuple[str, ...]
EMPTY_TOKEN = "-"


def as_word(w: Union[str, Sequence[str]]) -> Word:
    """Coerce a string (one letter per character) or letter sequence to a word."""
    if isinstance(w, str):
        return tuple(w)
    return tuple(w)


def parse_word(token: str, alphabet=()) -> Word:
    """Inverse of :func:`format_word`; a token naming a known letter is that letter."""
    if token == EMPTY_TOKEN:
        return ()
    if token in alphabet:
        return (token,)
    if "." in token:
        parts = tuple(token.split("."))
        if any(not p for p in parts):
            raise ValueError(f"empty letter in word {token!r}")
        return parts
    return tuple(token)


def format_word(word: Iterable[str]) -> str:
    word = tuple(word)
    if not word:
        return EMPTY_TOKEN
    if all(len(letter) == 1 for letter in word):
        return "".join(word)
    return ".".join(word)


def shortlex_key(word: Sequence) -> tuple:
    return (len(word), tuple(word))


def read_lines(path):
    """Yield ``(line_no, fields)`` for non-blank, non-comment lines."""
    with open(path) as fh:
        for no, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if line:
                yield no, line
