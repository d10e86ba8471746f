"""Contrastive state/instruction alignment and sequence losses.

All functions return the loss value together with exact analytic gradients
so they can be checked against finite differences without an autodiff
framework.  Embeddings are plain float64 arrays; no encoder is involved.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    MissingPositive,
    NonPositiveTemperature,
    TargetOutOfRange,
)

DEFAULT_TEMPERATURE = 0.07
DEFAULT_DIM = 768


@dataclass
class EmbeddingBatch:
    """States ``(T, D)``, instructions ``(N, D)`` and each state's positive.

    ``candidates`` optionally restricts the softmax denominator of state ``t``
    to the listed instruction rows (which must include ``pos[t]``).  When it
    is ``None`` every instruction is a candidate.
    """

    states: np.ndarray
    instructions: np.ndarray
    pos: Sequence[int]
    temperature: float = DEFAULT_TEMPERATURE
    candidates: Optional[Sequence[Sequence[int]]] = None

    def __post_init__(self):
        self.states = np.atleast_2d(np.asarray(self.states, dtype=np.float64))
        self.instructions = np.atleast_2d(np.asarray(self.instructions, dtype=np.float64))
        self.pos = [int(p) for p in self.pos]
        T, D = self.states.shape
        N, D2 = self.instructions.shape
        if D != D2:
            raise DimensionMismatch(f"state dim {D} != instruction dim {D2}")
        if len(self.pos) != T:
            raise DimensionMismatch(f"{len(self.pos)} positives for {T} states")
        if N < 1:
            raise DimensionMismatch("need at least one instruction")
        if not self.temperature > 0:
            raise NonPositiveTemperature(f"temperature must be > 0, got {self.temperature}")
        for t, p in enumerate(self.pos):
            if not 0 <= p < N:
                raise MissingPositive(f"state {t}: positive index {p} outside [0, {N})")
        if self.candidates is not None:
            if len(self.candidates) != T:
                raise DimensionMismatch(f"{len(self.candidates)} candidate sets for {T} states")
            cands = []
            for t, row in enumerate(self.candidates):
                row = [int(c) for c in row]
                if self.pos[t] not in row:
                    raise MissingPositive(f"state {t}: positive {self.pos[t]} not among candidates")
                if any(not 0 <= c < N for c in row):
                    raise DimensionMismatch(f"state {t}: candidate index outside [0, {N})")
                cands.append(row)
            self.candidates = cands


@dataclass
class LossWithGrad:
    value: float
    grad_states: np.ndarray
    grad_instructions: np.ndarray = field(default_factory=lambda: np.zeros((0, 0)))


def _log_softmax(x):
    shifted = x - x.max(axis=-1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=-1, keepdims=True))


def contrastive_loss(batch: EmbeddingBatch) -> LossWithGrad:
    """Summed InfoNCE over states: -sum_t log softmax(<z_t, w_n> / tau)[pos(t)].

    For state t with candidate probabilities ``p``::

        dL/dz_t = (sum_c p_c w_c - w_pos) / tau
        dL/dw_c += (p_c - [c == pos]) z_t / tau
    """
    Z, W, tau = batch.states, batch.instructions, batch.temperature
    T = Z.shape[0]
    gZ = np.zeros_like(Z)
    gW = np.zeros_like(W)
    value = 0.0
    # one row at a time keeps the summation order fixed
    for t in range(T):
        cand = (
            np.arange(W.shape[0]) if batch.candidates is None else np.asarray(batch.candidates[t])
        )
        target = int(np.flatnonzero(cand == batch.pos[t])[0])
        logits = W[cand] @ Z[t] / tau
        logp = _log_softmax(logits)
        value -= float(logp[target])
        coef = np.exp(logp)
        coef[target] -= 1.0
        coef /= tau
        gZ[t] = coef @ W[cand]
        np.add.at(gW, cand, np.outer(coef, Z[t]))
    return LossWithGrad(value, gZ, gW)


@dataclass
class NegativeLayout:
    """Per-state candidate lists over a global instruction table.

    ``candidates[t][0]`` is always the positive; ``n_intra[t]`` following
    entries are same-task negatives and the rest are other-task negatives.
    """

    candidates: list
    positives: list
    n_intra: list
    n_inter: list

    def is_intra(self, t: int, j: int) -> bool:
        return 1 <= j <= self.n_intra[t]


def build_negative_sets(
    corpus_pos,
    instruction_index,
    inter_k: int = 0,
    seed: int = 0,
) -> NegativeLayout:
    """Positive, intra-task and sampled inter-task candidates for each state.

    Args:
        corpus_pos: one ``(task_id, pos_index)`` per state, ``pos_index`` being
            the sub-goal position inside its task.
        instruction_index: ``task_id -> list of global instruction rows``.
        inter_k: instructions sampled (without replacement) from other tasks
            per state; capped at however many exist.
        seed: seeds the inter-task sampler.
    """
    rng = np.random.default_rng(seed)
    tasks = list(instruction_index)
    candidates, positives, n_intra, n_inter = [], [], [], []
    for t, (task, k) in enumerate(corpus_pos):
        rows = instruction_index.get(task)
        if rows is None or not 0 <= k < len(rows):
            raise MissingPositive(f"state {t}: no instruction {k} for task {task!r}")
        positive = rows[k]
        intra = [r for j, r in enumerate(rows) if j != k]
        inter = []
        if inter_k > 0:
            pool = [r for other in tasks if other != task for r in instruction_index[other]]
            take = min(inter_k, len(pool))
            if take:
                inter = [pool[i] for i in rng.choice(len(pool), size=take, replace=False)]
        candidates.append([positive] + intra + inter)
        positives.append(positive)
        n_intra.append(len(intra))
        n_inter.append(len(inter))
    return NegativeLayout(candidates, positives, n_intra, n_inter)


def sequence_cross_entropy(logits, targets) -> LossWithGrad:
    """Mean token cross-entropy; gradient w.r.t. logits in ``grad_states``."""
    logits = np.atleast_2d(np.asarray(logits, dtype=np.float64))
    targets = np.asarray(targets, dtype=np.int64).reshape(-1)
    S, K = logits.shape
    if len(targets) != S:
        raise DimensionMismatch(f"{len(targets)} targets for {S} rows")
    if S == 0:
        return LossWithGrad(0.0, np.zeros_like(logits))
    if targets.min() < 0 or targets.max() >= K:
        raise TargetOutOfRange(f"targets must lie in [0, {K})")
    logp = _log_softmax(logits)
    rows = np.arange(S)
    value = -float(logp[rows, targets].sum()) / S
    grad = np.exp(logp)
    grad[rows, targets] -= 1.0
    grad /= S
    return LossWithGrad(value, grad)


def composed_loss(stage: str, cl, task) -> float:
    """Pre-training adds meta-action CE, fine-tuning adds action CE; both unweighted."""
    if stage not in ("pretrain", "finetune"):
        raise ValueError(f"unknown stage {stage!r}")
    cl_v = cl.value if isinstance(cl, LossWithGrad) else float(cl)
    task_v = task.value if isinstance(task, LossWithGrad) else float(task)
    return cl_v + task_v
