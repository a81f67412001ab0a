"""Pure-state quantum generators of classical processes.

A model holds one unit vector per memory label and one Kraus operator per
symbol; the operators must resolve the identity and map each memory state
onto (a multiple of) another.  For a given unifilar HMM the matching
quantum model is synthesized from the fixed point of the state-overlap
recursion

    G[s, s'] = sum_x sqrt(P(x|s) P(x|s')) G[f(s, x), f(s', x)],

after which the states are any vectors realizing G and the Kraus operators
the least-squares solutions of K S = S'_x on the state span.  The memory
cost of a model is the Renyi entropy of the eigenvalue spectrum of its
stationary density matrix, which always majorizes the stationary state of
the classical read-off.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .distributions import (
    ALPHA_GRID,
    Distribution,
    MajorizationVerdict,
    compare,
    pad_to,
    renyi_entropy,
    validate_distribution,
)
from .errors import (
    AmbiguousSuccessorError,
    CompletenessViolationError,
    DimensionMismatchError,
    InvalidModelError,
    ModelFormatError,
    NoConvergenceError,
    NotHermitianError,
    NotPSDError,
    NotUnifilarError,
    UnknownSymbolError,
)
from .hmm import POSITIVE_TOL, FinitePredictiveModel, stationary
from .minimize import is_epsilon_machine

log = logging.getLogger(__name__)

UNIT_TOL = 1e-9
COMPLETENESS_TOL = 1e-9
PHASE_MATCH_TOL = 1e-9
RANK_TOL = 1e-10
PSD_TOL = 1e-10
EIG_CLIP = 1e-10
GRAM_TOL = 1e-13
GRAM_MAX_ITER = 100_000


@dataclass(frozen=True, eq=False)
class PureStateQuantumModel:
    """Unifilar pure-state quantum model.

    ``states`` is a dim x n complex matrix whose columns are the memory
    vectors, one per label; ``kraus`` maps each symbol to a dim x dim
    operator.  Invariants (unit norms, completeness, unifilarity) are
    enforced at construction.
    """

    dim: int
    labels: tuple[str, ...]
    states: np.ndarray
    alphabet: tuple[str, ...]
    kraus: dict[str, np.ndarray]

    def __post_init__(self):
        labels = tuple(self.labels)
        alphabet = tuple(self.alphabet)
        states = np.array(self.states, dtype=complex)
        if states.shape != (self.dim, len(labels)):
            raise InvalidModelError(
                f"state matrix shape {states.shape} != ({self.dim}, {len(labels)})"
            )
        if len(labels) < self.dim:
            raise InvalidModelError("need at least as many labels as dimensions")
        if len(set(labels)) != len(labels) or len(set(alphabet)) != len(alphabet):
            raise InvalidModelError("labels and alphabet must be unique")
        kraus = {}
        for x in alphabet:
            if x not in self.kraus:
                raise InvalidModelError(f"missing Kraus operator for symbol {x!r}")
            k_mat = np.array(self.kraus[x], dtype=complex)
            if k_mat.shape != (self.dim, self.dim):
                raise InvalidModelError(f"Kraus operator for {x!r} has shape {k_mat.shape}")
            k_mat.setflags(write=False)
            kraus[x] = k_mat
        states.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "kraus", kraus)
        norms = np.linalg.norm(states, axis=0)
        if np.max(np.abs(norms - 1.0)) > UNIT_TOL:
            raise InvalidModelError(f"state norms deviate from 1 by {np.max(np.abs(norms-1)):.3g}")
        resid = completeness_residual(self)
        if resid > COMPLETENESS_TOL:
            raise CompletenessViolationError(f"completeness residual {resid:.3g}")
        _check_unifilar(self)

    @property
    def n(self) -> int:
        return len(self.labels)

    def state(self, label: str) -> np.ndarray:
        return self.states[:, self.labels.index(label)]


def completeness_residual(q: PureStateQuantumModel) -> float:
    """Operator-norm distance of sum(K^dag K) from the identity."""
    acc = np.zeros((q.dim, q.dim), dtype=complex)
    for x in q.alphabet:
        acc += q.kraus[x].conj().T @ q.kraus[x]
    return float(np.linalg.norm(acc - np.eye(q.dim), 2))


def _check_unifilar(q: PureStateQuantumModel):
    for x in q.alphabet:
        images = q.kraus[x] @ q.states
        norms = np.linalg.norm(images, axis=0)
        for col, nrm in enumerate(norms):
            if nrm <= UNIT_TOL:
                continue
            overlaps = np.abs(q.states.conj().T @ images[:, col]) / nrm
            if overlaps.max() < 1.0 - PHASE_MATCH_TOL:
                raise NotUnifilarError(
                    f"K[{x!r}] maps state {q.labels[col]!r} outside the state set "
                    f"(best overlap {overlaps.max():.9f})"
                )


# -------------------------------------------------------- overlap recursion

def gram_fixed_point(
    m: FinitePredictiveModel,
    tol: float = GRAM_TOL,
    max_iter: int = GRAM_MAX_ITER,
    init: np.ndarray | None = None,
) -> np.ndarray:
    """Fixed point of the state-overlap recursion, diagonal pinned to one.

    Iterates from the identity (or ``init``) until the largest entry update
    drops below ``tol``.  Well-defined for any unifilar input; minimality is
    only needed for the result to define a faithful quantum model, so a
    non-minimal input just earns a warning.
    """
    if not is_epsilon_machine(m):
        warnings.warn(
            "input model has probabilistically equivalent states; "
            "overlap recursion still runs",
            stacklevel=2,
        )
    n = len(m.states)
    idx = m.state_index()
    weights = []
    succ_idx = []
    for x in m.alphabet:
        w = np.array([np.sqrt(m.prob(s, x)) for s in m.states])
        mapped = np.array(
            [idx[m.successor(s, x)] if m.successor(s, x) is not None else 0 for s in m.states]
        )
        weights.append(np.outer(w, w))
        succ_idx.append(mapped)
    gram = np.eye(n) if init is None else np.array(init, dtype=float)
    for iteration in range(1, max_iter + 1):
        nxt = np.zeros_like(gram)
        for w_outer, mapped in zip(weights, succ_idx):
            nxt += w_outer * gram[np.ix_(mapped, mapped)]
        np.fill_diagonal(nxt, 1.0)
        delta = np.max(np.abs(nxt - gram))
        gram = nxt
        if delta < tol:
            log.debug("overlap recursion converged in %d iterations", iteration)
            return gram
    raise NoConvergenceError(f"overlap recursion not converged after {max_iter} iterations")


def embed_states(gram: np.ndarray, rank_tol: float = RANK_TOL) -> tuple[int, np.ndarray]:
    """Realize vectors with the prescribed pairwise overlaps.

    Eigendecomposes the overlap matrix and keeps the eigenvalues above
    ``rank_tol``; returns (dimension, dim x n state matrix) whose columns
    reproduce the overlaps.
    """
    gram = np.asarray(gram)
    if np.max(np.abs(gram - gram.conj().T)) > UNIT_TOL:
        raise NotHermitianError("overlap matrix is not Hermitian")
    w, u = np.linalg.eigh(gram)
    if w.min() < -PSD_TOL:
        raise NotPSDError(f"overlap matrix has eigenvalue {w.min():.3g}")
    order = np.argsort(w)[::-1]
    w, u = w[order], u[:, order]
    keep = w > rank_tol
    dim = int(keep.sum())
    states = np.diag(np.sqrt(w[keep])) @ u[:, keep].conj().T
    return dim, states


def build_qmachine(m: FinitePredictiveModel) -> PureStateQuantumModel:
    """Quantum model of a minimal machine via the overlap fixed point.

    States come from embedding the fixed-point overlaps; each Kraus operator
    is the least-squares solution of K S = S'_x, with the pseudoinverse taken
    through the overlap eigendecomposition (rank tolerance 1e-10).
    """
    gram = gram_fixed_point(m)
    w, u = np.linalg.eigh(gram)
    order = np.argsort(w)[::-1]
    w, u = w[order], u[:, order]
    if w.min() < -PSD_TOL:
        raise NotPSDError(f"overlap fixed point has eigenvalue {w.min():.3g}")
    keep = w > RANK_TOL
    dim = int(keep.sum())
    states = np.diag(np.sqrt(w[keep])) @ u[:, keep].conj().T
    pinv = u[:, keep] @ np.diag(1.0 / np.sqrt(w[keep]))
    idx = m.state_index()
    kraus = {}
    for x in m.alphabet:
        target = np.zeros_like(states)
        for s in m.states:
            p = m.prob(s, x)
            if p > POSITIVE_TOL:
                target[:, idx[s]] = np.sqrt(p) * states[:, idx[m.successor(s, x)]]
        kraus[x] = target @ pinv
    return PureStateQuantumModel(
        dim=dim, labels=m.states, states=states, alphabet=m.alphabet, kraus=kraus
    )


# -------------------------------------------------------- stationary objects

def stationary_density(q: PureStateQuantumModel, pi) -> np.ndarray:
    """Stationary density matrix: the pi-weighted mix of the state projectors."""
    pi = validate_distribution(pi)
    if len(pi) != q.n:
        raise DimensionMismatchError(f"stationary length {len(pi)} != {q.n} labels")
    rho = (q.states * pi.probs) @ q.states.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    if abs(np.trace(rho).real - 1.0) > UNIT_TOL:
        raise InvalidModelError(f"density trace {np.trace(rho).real:.12g} != 1")
    return rho


def spectrum(rho: np.ndarray, pad_to_n: int) -> Distribution:
    """Eigenvalues of a density matrix, descending, zero-padded to ``pad_to_n``."""
    rho = np.asarray(rho)
    if np.max(np.abs(rho - rho.conj().T)) > UNIT_TOL:
        raise NotHermitianError("density matrix is not Hermitian")
    vals = np.linalg.eigvalsh(rho)[::-1].copy()
    vals[(vals < 0) & (vals > -EIG_CLIP)] = 0.0
    return pad_to(validate_distribution(vals), pad_to_n)


def classical_equivalent(q: PureStateQuantumModel) -> FinitePredictiveModel:
    """Unifilar HMM read off a quantum model.

    Emission probabilities are the quadratic forms <s|K^dag K|s>; the
    successor is the unique label whose state matches the normalized image
    up to a global phase.
    """
    trans: dict[tuple[str, str], tuple[float, str]] = {}
    for x in q.alphabet:
        k_mat = q.kraus[x]
        images = k_mat @ q.states
        for col, label in enumerate(q.labels):
            p = float(np.real(np.vdot(images[:, col], images[:, col])))
            if p <= POSITIVE_TOL:
                continue
            nrm = np.sqrt(p)
            overlaps = np.abs(q.states.conj().T @ images[:, col]) / nrm
            hits = np.flatnonzero(overlaps > 1.0 - PHASE_MATCH_TOL)
            if hits.size != 1:
                raise AmbiguousSuccessorError(
                    f"state {label!r} under K[{x!r}]: {hits.size} matching states"
                )
            trans[(label, x)] = (min(p, 1.0), q.labels[int(hits[0])])
    return FinitePredictiveModel(q.labels, q.alphabet, trans)


def memory_spectrum(q: PureStateQuantumModel) -> Distribution:
    """Spectrum of the stationary density, padded to the number of labels."""
    pi = stationary(classical_equivalent(q))
    return spectrum(stationary_density(q, pi), q.n)


def vn_renyi(q: PureStateQuantumModel, alpha) -> float:
    """Renyi memory of the model: entropy of the stationary spectrum, in bits."""
    return renyi_entropy(memory_spectrum(q), alpha)


def quantum_word_probability(q: PureStateQuantumModel, word, rho: np.ndarray | None = None) -> float:
    """Probability of a word under the Kraus dynamics from the stationary state."""
    symbols = list(word)
    for x in symbols:
        if x not in q.alphabet:
            raise UnknownSymbolError(f"symbol {x!r} not in alphabet {q.alphabet}")
    if rho is None:
        rho = stationary_density(q, stationary(classical_equivalent(q)))
    for x in symbols:
        k_mat = q.kraus[x]
        rho = k_mat @ rho @ k_mat.conj().T
    return float(np.trace(rho).real)


def quantum_word_distribution(q: PureStateQuantumModel, length: int) -> dict:
    """All positive-probability words of exactly ``length`` symbols."""
    rho0 = stationary_density(q, stationary(classical_equivalent(q)))
    out: dict[tuple, float] = {}
    stack = [((), rho0)]
    while stack:
        prefix, rho = stack.pop()
        if len(prefix) == length:
            out[prefix] = float(np.trace(rho).real)
            continue
        for x in q.alphabet:
            k_mat = q.kraus[x]
            nxt = k_mat @ rho @ k_mat.conj().T
            if np.trace(nxt).real > 0.0:
                stack.append((prefix + (x,), nxt))
    return out


@dataclass(frozen=True, eq=False)
class AdvantageReport:
    """Stationary spectrum versus the classical stationary state."""

    spectrum: Distribution
    stationary: Distribution
    verdict: MajorizationVerdict
    entropies: tuple[tuple[float, float, float], ...]  # (alpha, S quantum, H classical)


def strong_advantage_report(q: PureStateQuantumModel, pi=None, alphas=ALPHA_GRID) -> AdvantageReport:
    """Compare the memory spectrum against the classical stationary state.

    The spectrum majorizes (or ties) the stationary state, so every Renyi
    memory of the quantum model is at most the classical one.  ``pi``
    defaults to the stationary state of the classical read-off; pass the
    source model's stationary state instead when the read-off is ambiguous
    (duplicate memory vectors after synthesizing a non-minimal input).
    """
    if pi is None:
        pi = stationary(classical_equivalent(q))
    else:
        pi = validate_distribution(pi)
    lam = spectrum(stationary_density(q, pi), q.n)
    verdict = compare(lam, pi)
    rows = tuple((a, renyi_entropy(lam, a), renyi_entropy(pi, a)) for a in alphas)
    return AdvantageReport(spectrum=lam, stationary=pi, verdict=verdict, entropies=rows)


def quantum_models_equal(a: PureStateQuantumModel, b: PureStateQuantumModel, tol: float = 1e-9) -> bool:
    """Entrywise equality of labels, states, and Kraus operators within tol."""
    if a.labels != b.labels or a.alphabet != b.alphabet or a.dim != b.dim:
        return False
    if not np.allclose(a.states, b.states, atol=tol):
        return False
    return all(np.allclose(a.kraus[x], b.kraus[x], atol=tol) for x in a.alphabet)


# ---------------------------------------------------------------- file format

def _parse_scalar(token: str, lineno: int) -> float:
    try:
        if "/" in token:
            return float(Fraction(token))
        return float(token)
    except (ValueError, ZeroDivisionError) as exc:
        raise ModelFormatError(f"bad number {token!r}", lineno) from exc


def _parse_pairs(text: str, lineno: int) -> list[complex]:
    out = []
    rest = text.strip()
    while rest:
        if not rest.startswith("("):
            raise ModelFormatError(f"expected '(re,im)', got {rest!r}", lineno)
        close = rest.find(")")
        if close < 0:
            raise ModelFormatError("unterminated complex pair", lineno)
        body = rest[1:close]
        parts = body.split(",")
        if len(parts) != 2:
            raise ModelFormatError(f"complex pair needs two entries: ({body})", lineno)
        out.append(complex(_parse_scalar(parts[0], lineno), _parse_scalar(parts[1], lineno)))
        rest = rest[close + 1 :].strip()
    return out


def parse_quantum_model(text: str) -> PureStateQuantumModel:
    """Parse the line-oriented quantum model format."""
    kind = None
    dim: int | None = None
    alphabet: tuple[str, ...] | None = None
    labels: list[str] = []
    state_cols: list[list[complex]] = []
    kraus: dict[str, np.ndarray] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(":")
        head = head.strip()
        rest = rest.strip()
        if head == "model":
            if kind is not None:
                raise ModelFormatError("duplicate model line", lineno)
            if rest != "quantum":
                raise ModelFormatError(f"expected 'model: quantum', got {rest!r}", lineno)
            kind = rest
        elif head == "dim":
            try:
                dim = int(rest)
            except ValueError as exc:
                raise ModelFormatError(f"bad dimension {rest!r}", lineno) from exc
            if dim < 1:
                raise ModelFormatError("dimension must be positive", lineno)
        elif head == "alphabet":
            if alphabet is not None:
                raise ModelFormatError("duplicate alphabet line", lineno)
            alphabet = tuple(rest.split())
            if not alphabet or len(set(alphabet)) != len(alphabet):
                raise ModelFormatError("alphabet must list distinct symbols", lineno)
        elif head == "state":
            if dim is None:
                raise ModelFormatError("state before dim", lineno)
            fields = rest.split(None, 1)
            if len(fields) != 2:
                raise ModelFormatError("expected 'state: LABEL (re,im) ...'", lineno)
            label, body = fields
            if label in labels:
                raise ModelFormatError(f"duplicate state {label!r}", lineno)
            entries = _parse_pairs(body, lineno)
            if len(entries) != dim:
                raise ModelFormatError(f"state {label!r} has {len(entries)} != {dim} entries", lineno)
            labels.append(label)
            state_cols.append(entries)
        elif head == "kraus":
            if dim is None or alphabet is None:
                raise ModelFormatError("kraus before dim/alphabet", lineno)
            fields = rest.split(None, 1)
            if len(fields) != 2:
                raise ModelFormatError("expected 'kraus: SYMBOL rows'", lineno)
            sym, body = fields
            if sym not in alphabet:
                raise UnknownSymbolError(f"line {lineno}: unknown symbol {sym!r}")
            if sym in kraus:
                raise ModelFormatError(f"duplicate kraus for {sym!r}", lineno)
            rows = [_parse_pairs(chunk, lineno) for chunk in body.split("/")]
            if len(rows) != dim or any(len(r) != dim for r in rows):
                raise ModelFormatError(f"kraus for {sym!r} is not {dim}x{dim}", lineno)
            kraus[sym] = np.array(rows, dtype=complex)
        else:
            raise ModelFormatError(f"unrecognized directive {head!r}", lineno)
    if kind is None:
        raise ModelFormatError("missing 'model:' line")
    if dim is None or alphabet is None or not labels:
        raise ModelFormatError("missing dim, alphabet, or states")
    missing = [x for x in alphabet if x not in kraus]
    if missing:
        raise ModelFormatError(f"missing kraus operators for {missing}")
    states = np.array(state_cols, dtype=complex).T
    return PureStateQuantumModel(
        dim=dim, labels=tuple(labels), states=states, alphabet=alphabet, kraus=kraus
    )


def _pair(z: complex) -> str:
    return f"({z.real:.12g},{z.imag:.12g})"


def serialize_quantum_model(q: PureStateQuantumModel) -> str:
    """Emit the quantum model file; row-major, 12 significant digits."""
    lines = [
        "model: quantum",
        f"dim: {q.dim}",
        "alphabet: " + " ".join(q.alphabet),
    ]
    for i, label in enumerate(q.labels):
        entries = " ".join(_pair(z) for z in q.states[:, i])
        lines.append(f"state: {label}  {entries}")
    for x in q.alphabet:
        rows = " / ".join(
            " ".join(_pair(z) for z in row) for row in q.kraus[x]
        )
        lines.append(f"kraus: {x}  {rows}")
    return "\n".join(lines) + "\n"
