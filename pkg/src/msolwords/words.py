"""Words, their logical encoding as structures, and variable assignments.

A word ``w`` of length ``n`` is encoded by the structure with universe
``{0, 1, ..., n}``: position 0 carries no letter, position ``i >= 1``
carries ``w[i]``.  Subsets of the universe are stored internally as bit
masks (bit ``i`` set iff ``i`` is in the set).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Mapping

from .errors import UnknownLetter

DEFAULT_ALPHABET = "01"


@dataclass(frozen=True)
class Word:
    letters: str
    alphabet: str = DEFAULT_ALPHABET

    def __post_init__(self):
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError(f"alphabet {self.alphabet!r} repeats a letter")
        for ch in self.letters:
            if ch not in self.alphabet:
                raise UnknownLetter(f"letter {ch!r} not in alphabet {self.alphabet!r}")

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        return self.letters

    def __add__(self, other: "Word") -> "Word":
        return Word(self.letters + as_word(other, self.alphabet).letters, self.alphabet)


def as_word(w, alphabet: str = DEFAULT_ALPHABET) -> Word:
    if isinstance(w, Word):
        return w
    return Word(str(w), alphabet)


@dataclass(frozen=True)
class WordStructure:
    """``<{0} u [n], <, (P_a)_a>`` for a word of length ``n``.

    ``letter_masks[a]`` is the bit mask of positions carrying ``a``.
    """

    alphabet: str
    n: int
    letters: tuple  # letters[i] for i in 1..n; letters[0] is None
    letter_masks: Mapping[str, int]

    @property
    def universe(self) -> range:
        return range(self.n + 1)

    @property
    def size(self) -> int:
        return self.n + 1

    def predicate(self, a: str) -> frozenset:
        return mask_to_set(self.letter_masks[a])


def word_to_structure(w, alphabet: str | None = None) -> WordStructure:
    w = as_word(w, alphabet or DEFAULT_ALPHABET)
    masks = {a: 0 for a in w.alphabet}
    for i, ch in enumerate(w.letters, start=1):
        masks[ch] |= 1 << i
    return WordStructure(w.alphabet, len(w), (None,) + tuple(w.letters), masks)


def enumerate_words(alphabet: str, max_len: int) -> Iterator[Word]:
    """All words of length ``0..max_len``, by length then in alphabet order."""
    if max_len < 0:
        raise ValueError("max_len must be >= 0")
    for k in range(max_len + 1):
        for letters in itertools.product(alphabet, repeat=k):
            yield Word("".join(letters), alphabet)


def mask_to_set(mask: int) -> frozenset:
    out, i = [], 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return frozenset(out)


def set_to_mask(s) -> int:
    mask = 0
    for i in s:
        if i < 0:
            raise ValueError("negative element")
        mask |= 1 << i
    return mask


@dataclass(frozen=True)
class Assignment:
    """Values for free variables: elements for first-order, sets for set variables."""

    first_order: Mapping[str, int] = field(default_factory=dict)
    second_order: Mapping[str, frozenset] = field(default_factory=dict)

    def env(self) -> dict:
        """Flat evaluation environment (set values as bit masks)."""
        env = dict(self.first_order)
        for name, s in self.second_order.items():
            env[name] = set_to_mask(s)
        return env

    def fits(self, structure: WordStructure) -> bool:
        n = structure.n
        return all(0 <= v <= n for v in self.first_order.values()) and all(
            all(0 <= v <= n for v in s) for s in self.second_order.values()
        )

    def with_fo(self, name: str, value: int) -> "Assignment":
        return Assignment({**self.first_order, name: value}, self.second_order)

    def with_so(self, name: str, value) -> "Assignment":
        return Assignment(self.first_order, {**self.second_order, name: frozenset(value)})


EMPTY = Assignment()


def as_env(sigma) -> dict:
    if sigma is None:
        return {}
    if isinstance(sigma, Assignment):
        return sigma.env()
    return {k: (set_to_mask(v) if isinstance(v, (set, frozenset)) else v) for k, v in sigma.items()}
