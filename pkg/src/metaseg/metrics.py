"""Episode-level evaluation metrics.

SR and GC are aggregate ratios over a corpus.  Path-length weighting
multiplies a score by ``L / max(L, L_hat)``.  The fidelity scores PC, LS and
CLS use external-source formulas (coverage of the reference by the predicted
path, and a length score relative to the covered reference length)::

    PC  = mean_r exp(-min_p |r - p| / d_th)
    LS  = PC*L / (PC*L + |L_hat - PC*L|)
    CLS = PC * LS

Distances are point-to-point, since paths here are discrete grid steps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import (
    DegenerateLengths,
    EmptyConditions,
    EmptyCorpus,
    EmptyPath,
    GoldOutOfRange,
    NonPositiveThreshold,
)

DEFAULT_DTH = 1.0


def path_length(path) -> float:
    pts = np.asarray(path, dtype=np.float64).reshape(-1, 2)
    if len(pts) < 2:
        return 0.0
    return float(np.sqrt((np.diff(pts, axis=0) ** 2).sum(axis=1)).sum())


@dataclass
class EpisodeResult:
    goal_conditions: Sequence[bool]
    pred_path: Optional[Sequence] = None
    ref_path: Optional[Sequence] = None
    pred_length: Optional[float] = None
    ref_length: Optional[float] = None

    def __post_init__(self):
        self.goal_conditions = [bool(g) for g in self.goal_conditions]
        if self.pred_length is None and self.pred_path is not None:
            self.pred_length = path_length(self.pred_path)
        if self.ref_length is None and self.ref_path is not None:
            self.ref_length = path_length(self.ref_path)

    @property
    def success(self) -> bool:
        return bool(self.goal_conditions) and all(self.goal_conditions)

    @property
    def gc_ratio(self) -> float:
        if not self.goal_conditions:
            raise EmptyConditions("episode has no goal conditions")
        return sum(self.goal_conditions) / len(self.goal_conditions)

    @property
    def has_lengths(self) -> bool:
        return self.pred_length is not None and self.ref_length is not None

    @property
    def has_paths(self) -> bool:
        return bool(self.pred_path) and bool(self.ref_path)


def success_rate(corpus: Sequence[EpisodeResult]) -> float:
    if not corpus:
        raise EmptyCorpus("no episodes")
    return sum(ep.success for ep in corpus) / len(corpus)


def goal_condition_rate(corpus: Sequence[EpisodeResult]) -> float:
    """Condition-weighted: total satisfied conditions over total conditions."""
    if not corpus:
        raise EmptyCorpus("no episodes")
    done = total = 0
    for i, ep in enumerate(corpus):
        if not ep.goal_conditions:
            raise EmptyConditions(f"episode {i} has no goal conditions")
        done += sum(ep.goal_conditions)
        total += len(ep.goal_conditions)
    return done / total


def path_length_weighted(score: float, ref_len: float, pred_len: float) -> float:
    denom = max(ref_len, pred_len)
    if denom <= 0:
        raise DegenerateLengths("reference and predicted path lengths are both zero")
    # ratio first: exactly 1.0 when pred_len <= ref_len, so the result never exceeds score
    return score * (ref_len / denom)


def plw_scores(corpus: Sequence[EpisodeResult]):
    """``(PLW-SR, PLW-GC)``, weighting each episode's score before averaging.

    Only episodes that carry both path lengths contribute.
    """
    eps = [ep for ep in corpus if ep.has_lengths]
    if not eps:
        raise EmptyCorpus("no episodes with path lengths")
    sr = gc = 0.0
    for ep in eps:
        sr += path_length_weighted(float(ep.success), ep.ref_length, ep.pred_length)
        gc += path_length_weighted(ep.gc_ratio, ep.ref_length, ep.pred_length)
    return sr / len(eps), gc / len(eps)


def fidelity(pred, ref, d_th: float = DEFAULT_DTH):
    """Return ``(PC, LS, CLS)`` for a predicted path against a reference."""
    if not d_th > 0:
        raise NonPositiveThreshold(f"d_th must be > 0, got {d_th}")
    P = np.asarray(pred, dtype=np.float64).reshape(-1, 2)
    R = np.asarray(ref, dtype=np.float64).reshape(-1, 2)
    if len(P) == 0 or len(R) == 0:
        raise EmptyPath("fidelity needs two nonempty paths")
    d = np.sqrt(((R[:, None, :] - P[None, :, :]) ** 2).sum(axis=-1)).min(axis=1)
    pc = float(np.exp(-d / d_th).mean())
    covered = pc * path_length(R)
    denom = covered + abs(path_length(P) - covered)
    # zero-length prediction against a zero-length reference
    ls = 1.0 if denom == 0 else covered / denom
    return pc, ls, pc * ls


def retrieval_recall(states, instructions, gold, k: int) -> float:
    """Fraction of states whose gold instruction is in the inner-product top-k.

    Equal scores rank the lower instruction index first.
    """
    Z = np.atleast_2d(np.asarray(states, dtype=np.float64))
    W = np.atleast_2d(np.asarray(instructions, dtype=np.float64))
    gold = np.asarray(gold, dtype=np.int64).reshape(-1)
    Q = W.shape[0]
    if k < 1:
        raise ValueError("k must be >= 1")
    if len(gold) != Z.shape[0]:
        raise GoldOutOfRange(f"{len(gold)} gold labels for {Z.shape[0]} states")
    if len(gold) == 0:
        return 0.0
    if gold.min() < 0 or gold.max() >= Q:
        raise GoldOutOfRange(f"gold indices must lie in [0, {Q})")
    scores = Z @ W.T
    g = scores[np.arange(len(gold)), gold][:, None]
    idx = np.arange(Q)[None, :]
    ahead = (scores > g) | ((scores == g) & (idx < gold[:, None]))
    rank = ahead.sum(axis=1)
    return float((rank < k).mean())


def summarize(corpus: Sequence[EpisodeResult], d_th: float = DEFAULT_DTH) -> dict:
    """All corpus metrics keyed by their report names.

    Metrics whose inputs are absent from every episode are reported as NaN.
    """
    out = {"SR": success_rate(corpus), "GC": goal_condition_rate(corpus)}
    if any(ep.has_lengths for ep in corpus):
        out["PLW-SR"], out["PLW-GC"] = plw_scores(corpus)
    else:
        out["PLW-SR"] = out["PLW-GC"] = math.nan
    fid = [fidelity(ep.pred_path, ep.ref_path, d_th) for ep in corpus if ep.has_paths]
    if fid:
        arr = np.asarray(fid)
        out["PC"], out["LS"], out["CLS"] = (float(v) for v in arr.mean(axis=0))
    else:
        out["PC"] = out["LS"] = out["CLS"] = math.nan
    return out
