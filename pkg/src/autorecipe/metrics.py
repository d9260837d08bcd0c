"""Lexical metrics used to compare generated documents across iterations.

All metrics share one tokenizer: case-fold, then split on runs of
non-alphanumeric characters.  Vocabulary comparisons are binary set
containment unless the count-weighted variant is requested.
"""

from __future__ import annotations

import math
import warnings
from collections import Counter
from dataclasses import dataclass, field

from .errors import EmptyTextError

__all__ = [
    "TokenProfile",
    "tokenize",
    "type_token_ratio",
    "coverage",
    "similarity",
    "EmbedderError",
]


class EmbedderError(Exception):
    """Raised by embedding clients; similarity() falls back to lexical mode."""


@dataclass
class TokenProfile:
    """Token multiset of one document plus derived counts."""

    tokens: list[str]
    counts: Counter = field(default_factory=Counter)

    def __post_init__(self):
        if not self.counts:
            self.counts = Counter(self.tokens)

    @property
    def total(self) -> int:
        return len(self.tokens)

    @property
    def vocabulary(self) -> set[str]:
        return set(self.counts)

    @property
    def unique(self) -> int:
        return len(self.counts)


def tokenize(text: str) -> TokenProfile:
    """Case-fold and split on non-alphanumeric runs; drops empty pieces."""
    parts = []
    word = []
    for ch in text.casefold():
        if ch.isalnum():
            word.append(ch)
        elif word:
            parts.append("".join(word))
            word = []
    if word:
        parts.append("".join(word))
    return TokenProfile(parts)


def type_token_ratio(text: str) -> float:
    """Unique token count divided by the square root of the total token count."""
    profile = tokenize(text)
    if profile.total == 0:
        raise EmptyTextError("cannot compute type-token ratio of a token-free text")
    return profile.unique / math.sqrt(profile.total)


def coverage(base: str, other: str, weighted: bool = False) -> float:
    """Percentage of the base vocabulary that also occurs in the other text.

    The default is binary containment over vocabularies.  With
    ``weighted=True`` each covered type counts as many times as it occurs
    in the base text.
    """
    base_profile = tokenize(base)
    if base_profile.total == 0:
        raise EmptyTextError("coverage base text has no tokens")
    other_vocab = tokenize(other).vocabulary
    shared = base_profile.vocabulary & other_vocab
    if weighted:
        covered = sum(base_profile.counts[t] for t in shared)
        return 100.0 * covered / base_profile.total
    return 100.0 * len(shared) / base_profile.unique


def _cosine(u: list[float], v: list[float]) -> float:
    dot = sum(a * b for a, b in zip(u, v))
    nu = math.sqrt(sum(a * a for a in u))
    nv = math.sqrt(sum(b * b for b in v))
    if nu == 0.0 or nv == 0.0:
        raise EmptyTextError("cannot take cosine of a zero vector")
    return dot / (nu * nv)


def similarity(a: str, b: str, embedder=None) -> float:
    """Cosine similarity of the two texts.

    With an embedder client the vectors are its embeddings; an
    ``EmbedderError`` falls back to the lexical route with a warning.
    The lexical route uses term-frequency vectors over the union
    vocabulary, so identical texts score 1.0 regardless of length.
    """
    if embedder is not None:
        try:
            return _cosine(list(embedder.embed(a)), list(embedder.embed(b)))
        except EmbedderError as exc:
            warnings.warn(f"embedder failed ({exc}); using lexical similarity", stacklevel=2)
    pa, pb = tokenize(a), tokenize(b)
    if pa.total == 0 or pb.total == 0:
        raise EmptyTextError("similarity needs tokens on both sides")
    vocab = sorted(pa.vocabulary | pb.vocabulary)
    va = [float(pa.counts[t]) for t in vocab]
    vb = [float(pb.counts[t]) for t in vocab]
    return _cosine(va, vb)
