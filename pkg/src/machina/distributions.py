"""Probability vectors under the majorization preorder.

Comparison uses the sorted-prefix-sum criterion; a constructive chain of
two-index transfers certifies any positive comparison, and the Renyi
entropy family supplies the monotones that order-respecting code cares
about.  Vectors of different lengths are always compared by zero-padding
the shorter one, so (1, 0, 0) and (1, 0) are equivalent.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    IllegalTransferError,
    NegativeEntryError,
    NotComparableError,
    NotNormalizedError,
    PaddingError,
)

#: default tolerance on prefix-sum comparisons
DEFAULT_TOL = 1e-9
#: entries below this count as zero when measuring support
SUPPORT_TOL = 1e-12
#: negative entries above this magnitude are rejected instead of clipped
NEGATIVE_CLIP = 1e-12
#: |sum - 1| allowed for a valid distribution
NORMALIZATION_TOL = 1e-9
#: alpha values used by every entropy table in the package
ALPHA_GRID = (0.0, 0.5, 1.0, 2.0, math.inf)

_CHAIN_TOL = 1e-12


def comparison_tolerance() -> float:
    """Active prefix-sum tolerance; the MACHINA_TOL env var overrides 1e-9."""
    raw = os.environ.get("MACHINA_TOL")
    return DEFAULT_TOL if raw is None else float(raw)


@dataclass(frozen=True, eq=False)
class Distribution:
    """A validated, immutable probability vector."""

    probs: np.ndarray

    def __post_init__(self):
        arr = np.array(self.probs, dtype=float).reshape(-1)
        if arr.size == 0:
            raise NotNormalizedError("empty probability vector")
        if np.any(arr < 0):
            raise NegativeEntryError(f"negative entry {arr.min():g}")
        if abs(arr.sum() - 1.0) > NORMALIZATION_TOL:
            raise NotNormalizedError(f"entries sum to {arr.sum():.12g}, not 1")
        arr.setflags(write=False)
        object.__setattr__(self, "probs", arr)

    def __len__(self) -> int:
        return self.probs.size

    def __iter__(self):
        return iter(self.probs)

    def __getitem__(self, i):
        return self.probs[i]

    def sorted_desc(self) -> np.ndarray:
        return np.sort(self.probs)[::-1]

    def __repr__(self) -> str:
        body = ", ".join(f"{p:.6g}" for p in self.probs)
        return f"Distribution({body})"


def validate_distribution(raw) -> Distribution:
    """Build a :class:`Distribution`, clipping sub-tolerance negative noise.

    Entries in [-1e-12, 0) are set to 0; anything more negative raises
    :class:`NegativeEntryError`, and a total off unity by more than 1e-9
    raises :class:`NotNormalizedError`.
    """
    if isinstance(raw, Distribution):
        return raw
    arr = np.array(raw, dtype=float).reshape(-1)
    if np.any(arr < -NEGATIVE_CLIP):
        raise NegativeEntryError(f"entry {arr.min():.6g} below -{NEGATIVE_CLIP:g}")
    arr[arr < 0] = 0.0
    return Distribution(arr)


def pad_to(d, n: int) -> Distribution:
    """Append zero-probability events until the vector has length ``n``."""
    d = validate_distribution(d)
    if n < len(d):
        raise PaddingError(f"cannot pad length {len(d)} down to {n}")
    if n == len(d):
        return d
    return Distribution(np.concatenate([d.probs, np.zeros(n - len(d))]))


class MajorizationVerdict(Enum):
    STRICTLY_MAJORIZES = "StrictlyMajorizes"
    STRICTLY_MAJORIZED_BY = "StrictlyMajorizedBy"
    EQUIVALENT = "Equivalent"
    INCOMPARABLE = "Incomparable"

    def __str__(self) -> str:
        return self.value


def _padded_sorted_pair(p: Distribution, q: Distribution):
    n = max(len(p), len(q))
    return pad_to(p, n).sorted_desc(), pad_to(q, n).sorted_desc()


def compare(p, q, tol: float | None = None) -> MajorizationVerdict:
    """Four-way majorization verdict on two distributions.

    Ties within ``tol`` count as "greater or equal" for both directions, so
    near-equal vectors report Equivalent rather than flapping between the
    strict verdicts.
    """
    p = validate_distribution(p)
    q = validate_distribution(q)
    if tol is None:
        tol = comparison_tolerance()
    a, b = _padded_sorted_pair(p, q)
    ca, cb = np.cumsum(a), np.cumsum(b)
    p_dominates = bool(np.all(ca >= cb - tol))
    q_dominates = bool(np.all(cb >= ca - tol))
    if p_dominates and q_dominates:
        return MajorizationVerdict.EQUIVALENT
    if p_dominates:
        return MajorizationVerdict.STRICTLY_MAJORIZES
    if q_dominates:
        return MajorizationVerdict.STRICTLY_MAJORIZED_BY
    return MajorizationVerdict.INCOMPARABLE


@dataclass(frozen=True, eq=False)
class LorenzCurve:
    """Cumulative sorted-descending probability, anchored at (0, 0)."""

    k: np.ndarray
    cumulative: np.ndarray

    def __post_init__(self):
        for name in ("k", "cumulative"):
            arr = np.asarray(getattr(self, name))
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def points(self):
        return list(zip(self.k.tolist(), self.cumulative.tolist()))


def lorenz_curve(d) -> LorenzCurve:
    d = validate_distribution(d)
    cum = np.concatenate([[0.0], np.cumsum(d.sorted_desc())])
    return LorenzCurve(k=np.arange(len(d) + 1), cumulative=cum)


def lorenz_dominates(p, q, tol: float | None = None) -> bool:
    """True iff every Lorenz point of ``p`` sits at or above that of ``q``.

    Independent route to the prefix-sum criterion, kept separate so the two
    can be cross-checked.
    """
    p = validate_distribution(p)
    q = validate_distribution(q)
    if tol is None:
        tol = comparison_tolerance()
    n = max(len(p), len(q))
    cp = lorenz_curve(pad_to(p, n)).cumulative
    cq = lorenz_curve(pad_to(q, n)).cumulative
    return bool(np.all(cp >= cq - tol))


def lorenz_csv(curve: LorenzCurve) -> str:
    """Serialize one curve: header ``k,cumulative``, 12 significant digits, LF."""
    lines = ["k,cumulative"]
    for k, c in zip(curve.k, curve.cumulative):
        lines.append(f"{int(k)},{c:.12g}")
    return "\n".join(lines) + "\n"


def renyi_entropy(d, alpha) -> float:
    """Order-``alpha`` Renyi entropy in bits.

    alpha = 1 is the Shannon limit (0 log 0 taken as 0), alpha = 0 counts the
    support (entries above 1e-12), alpha = inf is -log2 of the largest entry.
    Zero entries never enter the power sum, which keeps the value invariant
    under zero-padding for every alpha.
    """
    d = validate_distribution(d)
    alpha = float(alpha)
    if alpha < 0:
        raise ValueError(f"alpha must be nonnegative, got {alpha}")
    p = d.probs[d.probs > SUPPORT_TOL]
    if alpha == 0.0:
        return math.log2(p.size)
    if math.isinf(alpha):
        return -math.log2(float(p.max()))
    if alpha == 1.0:
        return float(-(p * np.log2(p)).sum())
    return float(math.log2((p**alpha).sum()) / (1.0 - alpha))


def renyi_negentropy(d, alpha) -> float:
    """log2(n) - H_alpha; grows under zero-padding, unlike the entropy."""
    d = validate_distribution(d)
    return math.log2(len(d)) - renyi_entropy(d, alpha)


def entropy_table(d, alphas=ALPHA_GRID) -> tuple[tuple[float, float], ...]:
    return tuple((a, renyi_entropy(d, a)) for a in alphas)


@dataclass(frozen=True)
class TransferOp:
    """Move ``amount`` of probability from entry ``donor`` to ``recipient``."""

    donor: int
    recipient: int
    amount: float


def apply_transfer(d, op: TransferOp) -> Distribution:
    """Apply one transfer; legal only while it shrinks the disparity."""
    d = validate_distribution(d)
    i, j, eps = op.donor, op.recipient, op.amount
    n = len(d)
    if not (0 <= i < n and 0 <= j < n) or i == j:
        raise IllegalTransferError(f"bad index pair ({i}, {j}) for length {n}")
    gap = d.probs[i] - d.probs[j]
    if gap <= 0:
        raise IllegalTransferError(
            f"donor entry {d.probs[i]:.6g} does not exceed recipient {d.probs[j]:.6g}"
        )
    if not (0.0 < eps < gap):
        raise IllegalTransferError(f"amount {eps:.6g} outside (0, {gap:.6g})")
    out = d.probs.copy()
    out[i] -= eps
    out[j] += eps
    return Distribution(out)


def transfer_chain(p, q, tol: float | None = None) -> list[TransferOp]:
    """Constructive certificate that ``p`` majorizes ``q``.

    Classic greedy T-transform construction on the sorted vectors: repeatedly
    move mass from the last over-full coordinate to the first under-full one
    after it, matching one coordinate per step.  Indices in the returned ops
    refer to positions in the *sorted-descending* padded vectors, so replay
    must start from ``p`` sorted descending.  At most n - 1 ops.
    """
    p = validate_distribution(p)
    q = validate_distribution(q)
    verdict = compare(p, q, tol)
    if verdict not in (
        MajorizationVerdict.STRICTLY_MAJORIZES,
        MajorizationVerdict.EQUIVALENT,
    ):
        raise NotComparableError(f"verdict is {verdict}, need majorization")
    x, y = _padded_sorted_pair(p, q)
    x = x.copy()
    ops: list[TransferOp] = []
    for _ in range(max(len(x) - 1, 0)):
        diff = x - y
        over = np.flatnonzero(diff > _CHAIN_TOL)
        if over.size == 0:
            break
        j = int(over[-1])
        under = np.flatnonzero(diff < -_CHAIN_TOL)
        under = under[under > j]
        if under.size == 0:
            break
        k = int(under[0])
        eps = float(min(x[j] - y[j], y[k] - x[k]))
        x[j] -= eps
        x[k] += eps
        ops.append(TransferOp(j, k, eps))
    if np.max(np.abs(x - y)) > 1e-8:
        raise NotComparableError("transfer construction failed to land on target")
    return ops


def replay_chain(p, ops) -> Distribution:
    """Apply a transfer chain starting from ``p`` sorted descending."""
    p = validate_distribution(p)
    cur = Distribution(p.sorted_desc())
    for op in ops:
        cur = apply_transfer(cur, op)
    return cur


def chain_to_doubly_stochastic(ops, start, n: int | None = None) -> np.ndarray:
    """Product of the 2x2-block T-transform matrices realizing a chain.

    Each factor is [[1-lam, lam], [lam, 1-lam]] on the (donor, recipient)
    block with lam = eps / (x_i - x_j) evaluated on the running vector, so
    the starting distribution is required; the chain alone does not pin the
    mixing fractions.  The result D is doubly stochastic and maps the sorted
    start onto the sorted target; every factor is orthostochastic.
    """
    start = validate_distribution(start)
    if n is None:
        n = len(start)
    x = pad_to(start, n).sorted_desc().copy()
    d_total = np.eye(n)
    for op in ops:
        i, j, eps = op.donor, op.recipient, op.amount
        gap = x[i] - x[j]
        if gap <= 0 or not (0.0 < eps < gap):
            raise IllegalTransferError(
                f"chain not legal for this start: amount {eps:.6g}, gap {gap:.6g}"
            )
        lam = eps / gap
        t_mat = np.eye(n)
        t_mat[i, i] = t_mat[j, j] = 1.0 - lam
        t_mat[i, j] = t_mat[j, i] = lam
        d_total = t_mat @ d_total
        x = t_mat @ x
    return d_total
