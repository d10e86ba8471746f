"""Minimum-count segmentation of action strings into meta-actions.

The DP over end positions::

    cost[0] = 0
    cost[e] = min(cost[s] + 1 for (m, s, e) in table)

Ties are broken deterministically: ends are visited in ascending order and,
for each end, candidates ``(start, meta_id)`` ascending; only a strict
improvement replaces the stored backpointer.  Reading the result back from
the end, the last segment is therefore the optimal one with the smallest
start, then the smallest meta id, and the same rule applies recursively to
the prefix.  :func:`segment_bruteforce` implements that order directly as a
lexicographic key, without any DP.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

from .errors import CoverageMismatch, SegmentationIncomplete
from .grammar import MetaActionGrammar
from .intervals import MatchIntervalTable, build_table
from .pattern import full_match
from .trajectory import ActionString, ActionTrajectory, encode_actions


@dataclass(frozen=True)
class Segmentation:
    segments: tuple  # of (meta_id, start, end)
    source_length: int

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(tuple(s) for s in self.segments))

    @property
    def count(self) -> int:
        return len(self.segments)

    def meta_ids(self):
        return [m for m, _, _ in self.segments]

    def format(self, grammar: MetaActionGrammar) -> str:
        return " ".join(f"{grammar[m].name}[{s},{e})" for m, s, e in self.segments)

    def to_json(self, grammar: MetaActionGrammar):
        return [
            {"meta": grammar[m].name, "start": s, "end": e} for m, s, e in self.segments
        ]


def segment(
    g: MetaActionGrammar, a: str, table: MatchIntervalTable | None = None
) -> Segmentation:
    a = ActionString(a)
    n = len(a)
    if table is None:
        table = build_table(g, a)
    ends = table.by_end()
    INF = math.inf
    cost = [INF] * (n + 1)
    back = [None] * (n + 1)
    cost[0] = 0
    for e in range(1, n + 1):
        best = INF
        for s, m in ends[e]:
            c = cost[s] + 1
            if c < best:
                best = c
                back[e] = (s, m)
        cost[e] = best
    if cost[n] == INF:
        first = next(e for e in range(1, n + 1) if cost[e] == INF)
        raise SegmentationIncomplete(first)
    segs = []
    e = n
    while e > 0:
        s, m = back[e]
        segs.append((m, s, e))
        e = s
    segs.reverse()
    return Segmentation(tuple(segs), n)


def _all_segmentations(g, a):
    """Every covering segmentation of ``a``, each as a list of (m, s, e)."""
    n = len(a)
    fits = {}
    for s in range(n):
        for e in range(s + 1, n + 1):
            ids = [m.id for m in g.metas if full_match(m.pattern, a[s:e])]
            if ids:
                fits[s, e] = ids

    path = []

    def walk(s):
        if s == n:
            yield list(path)
            return
        for e in range(s + 1, n + 1):
            for m in fits.get((s, e), ()):
                path.append((m, s, e))
                yield from walk(e)
                path.pop()

    return walk(0)


def segment_bruteforce(g: MetaActionGrammar, a: str) -> Segmentation:
    """Exhaustive reference for :func:`segment`.

    Exponential in ``len(a)`` in the worst case (long single-letter runs);
    intended for strings of a dozen or so letters.
    """
    a = ActionString(a)
    n = len(a)
    if n == 0:
        return Segmentation((), 0)
    best = None
    best_key = None
    for segs in _all_segmentations(g, a):
        key = (len(segs), [(s, m) for m, s, _ in reversed(segs)])
        if best_key is None or key < best_key:
            best, best_key = segs, key
    if best is None:
        reach = {0}
        for s in range(n):
            if s in reach:
                for e in range(s + 1, n + 1):
                    if any(full_match(m.pattern, a[s:e]) for m in g.metas):
                        reach.add(e)
        raise SegmentationIncomplete(min(set(range(1, n + 1)) - reach))
    return Segmentation(tuple(best), n)


def expand(seg: Segmentation, a: str) -> ActionString:
    """Rebuild the action string from a segmentation; raises if it does not tile."""
    pos = 0
    pieces = []
    for m, s, e in seg.segments:
        if s != pos or e <= s:
            raise CoverageMismatch(f"segment ({m}, {s}, {e}) does not start at {pos}")
        pieces.append(a[s:e])
        pos = e
    if pos != len(a) or seg.source_length != len(a):
        raise CoverageMismatch(f"segments cover [0, {pos}) of a length-{len(a)} string")
    return ActionString("".join(pieces))


@dataclass
class SegmentationStats:
    n_trajectories: int = 0
    mean_la_length: float = 0.0
    mean_ma_length: float = 0.0
    compression_ratio: float = 0.0
    meta_histogram: dict = field(default_factory=dict)

    def lines(self, grammar: MetaActionGrammar):
        out = [
            f"n_trajectories: {self.n_trajectories}",
            f"mean_la_length: {self.mean_la_length:.6f}",
            f"mean_ma_length: {self.mean_ma_length:.6f}",
            f"compression_ratio: {self.compression_ratio:.6f}",
        ]
        for m in grammar.metas:
            out.append(f"meta[{m.name}]: {self.meta_histogram.get(m.id, 0)}")
        return out

    def to_json(self, grammar: MetaActionGrammar):
        return {
            "n_trajectories": self.n_trajectories,
            "mean_la_length": self.mean_la_length,
            "mean_ma_length": self.mean_ma_length,
            "compression_ratio": self.compression_ratio,
            "meta_histogram": {
                m.name: self.meta_histogram.get(m.id, 0) for m in grammar.metas
            },
        }


def corpus_stats(
    g: MetaActionGrammar, corpus: Iterable[ActionTrajectory | str]
) -> SegmentationStats:
    """Length statistics over a corpus.

    The ratio is of the two means (total letters over total segments).
    """
    n = la = ma = 0
    hist = Counter({m.id: 0 for m in g.metas})
    for i, traj in enumerate(corpus):
        letters = traj if isinstance(traj, str) else encode_actions(traj)
        try:
            seg = segment(g, letters)
        except SegmentationIncomplete as exc:
            raise SegmentationIncomplete(exc.index, trajectory_index=i) from None
        n += 1
        la += len(letters)
        ma += seg.count
        hist.update(seg.meta_ids())
    if n == 0:
        return SegmentationStats(meta_histogram=dict(hist))
    return SegmentationStats(
        n_trajectories=n,
        mean_la_length=la / n,
        mean_ma_length=ma / n,
        compression_ratio=la / ma if ma else 0.0,
        meta_histogram=dict(hist),
    )
