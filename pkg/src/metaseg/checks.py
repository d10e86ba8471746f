"""Self-check suites behind the ``gradcheck`` and ``oracle-check`` commands."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .grammar import MetaActionGrammar
from .intervals import build_table, build_table_bruteforce
from .losses import (
    EmbeddingBatch,
    build_negative_sets,
    contrastive_loss,
    sequence_cross_entropy,
)
from .segmenter import expand, segment, segment_bruteforce
from .trajectory import ALPHABET

FD_STEP = 1e-5
GRAD_TOL = 1e-5


def central_difference(f, x: np.ndarray, h: float = FD_STEP) -> np.ndarray:
    """Numerical gradient of scalar ``f`` at ``x`` (``x`` is perturbed in place and restored)."""
    grad = np.zeros_like(x)
    it = np.nditer(x, flags=["multi_index"])
    for _ in it:
        i = it.multi_index
        old = x[i]
        x[i] = old + h
        up = f()
        x[i] = old - h
        down = f()
        x[i] = old
        grad[i] = (up - down) / (2 * h)
    return grad


def relative_error(analytic: np.ndarray, numeric: np.ndarray) -> float:
    """``max|a - n| / max(max|a|, max|n|)``: error relative to the gradient's scale.

    Exact-zero gradients on both sides count as zero error.
    """
    scale = max(np.abs(analytic).max(initial=0.0), np.abs(numeric).max(initial=0.0))
    diff = np.abs(analytic - numeric).max(initial=0.0)
    if scale == 0.0:
        return diff
    return float(diff / scale)


def random_batch(rng: np.random.Generator, inter_k=0, max_t=8, max_d=16):
    """Random multi-task batch; candidates come from :func:`build_negative_sets`.

    Up to three tasks with one or two sub-goals each, so at most six
    instructions.  With ``inter_k == 0`` each state only sees its own task.
    """
    n_tasks = int(rng.integers(1, 4))
    index, rows = {}, 0
    for task in range(n_tasks):
        k = int(rng.integers(1, 3))
        index[task] = list(range(rows, rows + k))
        rows += k
    T = int(rng.integers(1, max_t + 1))
    D = int(rng.integers(1, max_d + 1))
    tau = float(rng.uniform(0.1, 2.0))
    corpus_pos = []
    for _ in range(T):
        task = int(rng.integers(n_tasks))
        corpus_pos.append((task, int(rng.integers(len(index[task])))))
    layout = build_negative_sets(corpus_pos, index, inter_k, seed=int(rng.integers(2**31)))
    Z = rng.normal(size=(T, D)) / np.sqrt(D)
    W = rng.normal(size=(rows, D)) / np.sqrt(D)
    return EmbeddingBatch(Z, W, layout.positives, tau, layout.candidates)


def check_contrastive(batch: EmbeddingBatch) -> float:
    res = contrastive_loss(batch)

    def f():
        return contrastive_loss(batch).value

    num_z = central_difference(f, batch.states)
    num_w = central_difference(f, batch.instructions)
    return max(
        relative_error(res.grad_states, num_z),
        relative_error(res.grad_instructions, num_w),
    )


def check_cross_entropy(logits: np.ndarray, targets) -> float:
    res = sequence_cross_entropy(logits, targets)
    num = central_difference(lambda: sequence_cross_entropy(logits, targets).value, logits)
    return relative_error(res.grad_states, num)


def gradcheck(n_batches: int = 100, seed: int = 0, inter_k: int = 2) -> dict:
    """Largest relative gradient error per loss over random problems.

    Odd-numbered batches add up to ``inter_k`` inter-task negatives per state.
    """
    rng = np.random.default_rng(seed)
    worst = {"contrastive_loss": 0.0, "sequence_cross_entropy": 0.0}
    for b in range(n_batches):
        batch = random_batch(rng, inter_k if b % 2 else 0)
        worst["contrastive_loss"] = max(worst["contrastive_loss"], check_contrastive(batch))
        S = int(rng.integers(1, 9))
        K = int(rng.integers(2, 11))
        logits = rng.normal(scale=2.0, size=(S, K))
        targets = rng.integers(0, K, size=S)
        worst["sequence_cross_entropy"] = max(
            worst["sequence_cross_entropy"], check_cross_entropy(logits, targets)
        )
    return worst


@dataclass
class OracleReport:
    strings: int = 0
    count_mismatches: list = field(default_factory=list)
    segmentation_mismatches: list = field(default_factory=list)
    table_mismatches: list = field(default_factory=list)
    lossless_failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (
            self.count_mismatches
            or self.segmentation_mismatches
            or self.table_mismatches
            or self.lossless_failures
        )

    def lines(self):
        return [
            f"strings: {self.strings}",
            f"count_mismatches: {len(self.count_mismatches)}",
            f"segmentation_mismatches: {len(self.segmentation_mismatches)}",
            f"table_mismatches: {len(self.table_mismatches)}",
            f"lossless_failures: {len(self.lossless_failures)}",
            f"result: {'PASS' if self.ok else 'FAIL'}",
        ]


def all_strings(max_len: int, alphabet: str = ALPHABET, min_len: int = 1):
    for n in range(min_len, max_len + 1):
        for tup in itertools.product(alphabet, repeat=n):
            yield "".join(tup)


def random_strings(rng: np.random.Generator, count: int, lo: int, hi: int, alphabet=ALPHABET):
    letters = np.array(list(alphabet))
    for _ in range(count):
        n = int(rng.integers(lo, hi + 1))
        yield "".join(letters[rng.integers(0, len(letters), size=n)])


def compare(g: MetaActionGrammar, a: str, report: OracleReport, tables=True, full=True):
    report.strings += 1
    table = build_table(g, a)
    if tables and table != build_table_bruteforce(g, a):
        report.table_mismatches.append(a)
    dp = segment(g, a, table)
    bf = segment_bruteforce(g, a)
    if dp.count != bf.count:
        report.count_mismatches.append(a)
    elif full and dp != bf:
        report.segmentation_mismatches.append(a)
    if expand(dp, a) != a:
        report.lossless_failures.append(a)


def oracle_check(
    g: MetaActionGrammar, max_len: int = 7, n_random: int = 0, seed: int = 0,
    random_len=(8, 20),
) -> OracleReport:
    """Exhaustive DP/table/brute-force agreement up to ``max_len``, then random strings.

    Random strings are compared on segment count only.
    """
    report = OracleReport()
    for a in all_strings(max_len, g.alphabet):
        compare(g, a, report)
    rng = np.random.default_rng(seed)
    for a in random_strings(rng, n_random, *random_len, alphabet=g.alphabet):
        compare(g, a, report, tables=False, full=False)
    return report
