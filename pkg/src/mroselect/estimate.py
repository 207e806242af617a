"""Interval selectivity estimators.

Range predicates on numeric attributes get intervals from equi-width
histograms: buckets entirely on the passing side give the lower bound, the
straddled bucket widens it to the upper bound.  Substring predicates on text
get a lower bound from exact word matches and an upper bound from the least
frequent 2-gram of the keyword (any string containing the keyword contains
all of its 2-grams).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .model import SelectivityInterval

__all__ = [
    "Histogram",
    "RangePredicate",
    "TextIndex",
    "build_histogram",
    "interval_for_range",
    "point_for_range",
    "tokenize",
    "build_text_index",
    "interval_for_substring",
    "load_histogram",
    "dump_histogram",
    "DEFAULT_BUCKETS",
]

# 20 equi-width buckets by default, as in the reference histograms
DEFAULT_BUCKETS = 20


@dataclass(frozen=True)
class Histogram:
    """Equi-width histogram over ``[lo, hi)``; the last bucket includes hi."""

    lo: float
    hi: float
    counts: tuple[int, ...]

    def __post_init__(self):
        if not self.counts:
            raise ValueError("histogram needs at least one bucket")
        if self.hi <= self.lo:
            raise ValueError(f"empty domain [{self.lo}, {self.hi}]")
        if any(c < 0 for c in self.counts):
            raise ValueError("bucket counts must be non-negative")
        if self.total <= 0:
            raise ValueError("histogram must count at least one value")

    @property
    def total(self) -> int:
        return sum(self.counts)

    @property
    def bucket_width(self) -> float:
        return (self.hi - self.lo) / len(self.counts)


@dataclass(frozen=True)
class RangePredicate:
    """``attribute < value`` or ``attribute > value`` (strict)."""

    op: str  # "lt" or "gt"
    value: float

    def __post_init__(self):
        if self.op not in ("lt", "gt"):
            raise ValueError(f"op must be 'lt' or 'gt', got {self.op!r}")


def build_histogram(values: Sequence[float], bucket_count: int) -> Histogram:
    """Equi-width histogram over ``[min(values), max(values)]``.

    The domain maximum is assigned to the last bucket.  All-equal input
    degenerates to a single bucket of width one.
    """
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        raise ValueError("cannot build a histogram from no values")
    if bucket_count < 1:
        raise ValueError(f"bucket_count must be >= 1, got {bucket_count}")
    lo, hi = float(arr.min()), float(arr.max())
    if lo == hi:
        return Histogram(lo=lo, hi=lo + 1.0, counts=(int(arr.size),))
    width = (hi - lo) / bucket_count
    idx = np.minimum((arr - lo) // width, bucket_count - 1).astype(np.int64)
    counts = np.bincount(idx, minlength=bucket_count)
    return Histogram(lo=lo, hi=hi, counts=tuple(int(c) for c in counts))


def _bucket_edges(hist: Histogram, i: int) -> tuple[float, float]:
    w = hist.bucket_width
    return hist.lo + i * w, hist.lo + (i + 1) * w


def _straddle_index(hist: Histogram, value: float) -> int:
    i = int((value - hist.lo) // hist.bucket_width)
    return min(max(i, 0), len(hist.counts) - 1)


def interval_for_range(hist: Histogram, pred: RangePredicate) -> SelectivityInterval:
    """Selectivity interval for a strict range predicate.

    Lower bound counts the buckets entirely on the passing side; the upper
    bound adds the straddled bucket in full.  Values outside the domain clamp
    to [0, 0] or [1, 1].
    """
    total = hist.total
    if pred.op == "lt":
        if pred.value <= hist.lo:
            return SelectivityInterval(0.0, 0.0)
        if pred.value > hist.hi:
            return SelectivityInterval(1.0, 1.0)
        i = _straddle_index(hist, pred.value)
        below = sum(hist.counts[:i])
        return SelectivityInterval(below / total, (below + hist.counts[i]) / total)
    if pred.value >= hist.hi:
        return SelectivityInterval(0.0, 0.0)
    if pred.value < hist.lo:
        return SelectivityInterval(1.0, 1.0)
    i = _straddle_index(hist, pred.value)
    above = sum(hist.counts[i + 1:])
    return SelectivityInterval(above / total, (above + hist.counts[i]) / total)


def point_for_range(hist: Histogram, pred: RangePredicate) -> float:
    """Point estimate under the uniform-within-bucket assumption.

    Linear interpolation inside the straddled bucket; always lies inside
    :func:`interval_for_range`'s interval.
    """
    total = hist.total
    if pred.op == "lt":
        if pred.value <= hist.lo:
            return 0.0
        if pred.value > hist.hi:
            return 1.0
        i = _straddle_index(hist, pred.value)
        b_lo, _ = _bucket_edges(hist, i)
        frac = min(max((pred.value - b_lo) / hist.bucket_width, 0.0), 1.0)
        return (sum(hist.counts[:i]) + hist.counts[i] * frac) / total
    if pred.value >= hist.hi:
        return 0.0
    if pred.value < hist.lo:
        return 1.0
    i = _straddle_index(hist, pred.value)
    _, b_hi = _bucket_edges(hist, i)
    frac = min(max((b_hi - pred.value) / hist.bucket_width, 0.0), 1.0)
    return (sum(hist.counts[i + 1:]) + hist.counts[i] * frac) / total


def load_histogram(path: str) -> Histogram:
    """Read ``{"lo": number, "hi": number, "counts": [int, ...]}``."""
    with open(path) as fh:
        data = json.load(fh)
    for key in ("lo", "hi", "counts"):
        if key not in data:
            raise ValueError(f"histogram file missing {key!r}")
    return Histogram(lo=float(data["lo"]), hi=float(data["hi"]),
                     counts=tuple(int(c) for c in data["counts"]))


def dump_histogram(hist: Histogram, path: str) -> None:
    with open(path, "w") as fh:
        json.dump({"lo": hist.lo, "hi": hist.hi, "counts": list(hist.counts)}, fh)
        fh.write("\n")


_TOKEN_RE = re.compile(r"[a-z0-9]+")


def tokenize(text: str) -> list[str]:
    """Lowercase and split on non-alphanumeric characters."""
    return _TOKEN_RE.findall(text.lower())


@dataclass(frozen=True)
class TextIndex:
    """Document frequencies for words and within-word 2-grams of one field."""

    doc_count: int
    word_doc_freq: Mapping[str, int]
    gram2_doc_freq: Mapping[str, int]


def _grams2(word: str) -> set[str]:
    return {word[i:i + 2] for i in range(len(word) - 1)}


def build_text_index(documents: Sequence[Mapping[str, str]]) -> dict[str, TextIndex]:
    """Per-field word and 2-gram document-frequency indexes.

    ``documents`` is a sequence of field -> text mappings; a document missing
    a field contributes nothing to that field's frequencies but still counts
    in ``doc_count``.
    """
    if not documents:
        raise ValueError("cannot index an empty corpus")
    fields = sorted({f for doc in documents for f in doc})
    out: dict[str, TextIndex] = {}
    for fld in fields:
        wdf: dict[str, int] = {}
        gdf: dict[str, int] = {}
        for doc in documents:
            words = set(tokenize(doc.get(fld, "")))
            grams = set().union(*(_grams2(w) for w in words)) if words else set()
            for w in words:
                wdf[w] = wdf.get(w, 0) + 1
            for g in grams:
                gdf[g] = gdf.get(g, 0) + 1
        out[fld] = TextIndex(doc_count=len(documents), word_doc_freq=wdf, gram2_doc_freq=gdf)
    return out


def interval_for_substring(index: TextIndex, keyword: str) -> SelectivityInterval:
    """Selectivity interval for ``like %keyword%`` on the indexed field.

    Lower bound: exact word matches.  Upper bound: the least-frequent 2-gram
    of the keyword.  A consistent index never produces upper < lower, but the
    bound is widened defensively if it happens.
    """
    kw = keyword.lower()
    if len(kw) < 2:
        raise ValueError(f"keyword must have at least 2 characters, got {keyword!r}")
    lower = index.word_doc_freq.get(kw, 0) / index.doc_count
    upper = min(index.gram2_doc_freq.get(g, 0) for g in _grams2(kw)) / index.doc_count
    return SelectivityInterval(lower, max(upper, lower))
