"""Unifilar hidden Markov models: validation, file format, stationary state,
word probabilities, and state splitting.

A model is a set of states, a symbol alphabet, and one probability-labeled
transition per (state, symbol) pair.  Unifilarity is baked into the data
layout: the transition table maps (state, symbol) to a single successor.
The summed transition matrix must be row-stochastic and its positive part
strongly connected.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .distributions import Distribution, renyi_entropy, validate_distribution
from .errors import (
    DuplicateTransitionError,
    ModelFormatError,
    NoConvergenceError,
    NotIrreducibleError,
    NotStochasticError,
    NotUnifilarError,
    UnknownStateError,
    UnknownSymbolError,
    UnreachableCopyError,
)

#: probabilities below this do not create graph edges
POSITIVE_TOL = 1e-12
ROW_SUM_TOL = 1e-9
STATIONARY_RESIDUAL = 1e-10
_POWER_ITER_CAP = 10**6


@dataclass(frozen=True, eq=False)
class FinitePredictiveModel:
    """Irreducible unifilar HMM over a finite alphabet.

    ``trans`` maps (state, symbol) to (probability, successor state).
    Instances are validated on construction and treated as immutable.
    """

    states: tuple[str, ...]
    alphabet: tuple[str, ...]
    trans: dict[tuple[str, str], tuple[float, str]]

    def __post_init__(self):
        states = tuple(self.states)
        alphabet = tuple(self.alphabet)
        if not states or len(set(states)) != len(states):
            raise ModelFormatError("states must be nonempty and unique")
        if not alphabet or len(set(alphabet)) != len(alphabet):
            raise ModelFormatError("alphabet must be nonempty and unique")
        cleaned: dict[tuple[str, str], tuple[float, str]] = {}
        for (s, x), (p, succ) in self.trans.items():
            if s not in states:
                raise UnknownStateError(f"transition from undeclared state {s!r}")
            if succ not in states:
                raise UnknownStateError(f"transition into undeclared state {succ!r}")
            if x not in alphabet:
                raise UnknownSymbolError(f"transition on undeclared symbol {x!r}")
            p = float(p)
            if p < -POSITIVE_TOL or p > 1.0 + ROW_SUM_TOL:
                raise NotStochasticError(f"probability {p:.6g} outside [0, 1]")
            cleaned[(s, x)] = (max(p, 0.0), succ)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "trans", cleaned)
        for s in states:
            row = sum(p for (s2, _), (p, _) in cleaned.items() if s2 == s)
            if abs(row - 1.0) > ROW_SUM_TOL:
                raise NotStochasticError(f"state {s!r} emits total probability {row:.12g}")
        self._check_irreducible()

    def _check_irreducible(self):
        fwd = {s: set() for s in self.states}
        bwd = {s: set() for s in self.states}
        for (s, _), (p, succ) in self.trans.items():
            if p > POSITIVE_TOL:
                fwd[s].add(succ)
                bwd[succ].add(s)
        root = self.states[0]
        for graph in (fwd, bwd):
            seen = {root}
            stack = [root]
            while stack:
                for nxt in graph[stack.pop()]:
                    if nxt not in seen:
                        seen.add(nxt)
                        stack.append(nxt)
            if len(seen) != len(self.states):
                missing = sorted(set(self.states) - seen)
                raise NotIrreducibleError(
                    f"positive-transition graph not strongly connected (e.g. {missing[0]!r})"
                )

    # -- convenience views -------------------------------------------------

    def prob(self, state: str, symbol: str) -> float:
        entry = self.trans.get((state, symbol))
        return 0.0 if entry is None else entry[0]

    def successor(self, state: str, symbol: str) -> str | None:
        entry = self.trans.get((state, symbol))
        if entry is None or entry[0] <= POSITIVE_TOL:
            return None
        return entry[1]

    def emissions(self, state: str) -> dict[str, float]:
        return {x: self.prob(state, x) for x in self.alphabet if (state, x) in self.trans}

    def state_index(self) -> dict[str, int]:
        return {s: i for i, s in enumerate(self.states)}

    def symbol_matrix(self, symbol: str) -> np.ndarray:
        """Transition matrix for one symbol: T[i, j] = P(symbol | i) if j follows."""
        if symbol not in self.alphabet:
            raise UnknownSymbolError(f"symbol {symbol!r} not in alphabet")
        idx = self.state_index()
        mat = np.zeros((len(self.states), len(self.states)))
        for (s, x), (p, succ) in self.trans.items():
            if x == symbol:
                mat[idx[s], idx[succ]] = p
        return mat

    def total_matrix(self) -> np.ndarray:
        idx = self.state_index()
        mat = np.zeros((len(self.states), len(self.states)))
        for (s, _), (p, succ) in self.trans.items():
            mat[idx[s], idx[succ]] += p
        return mat


def models_equal(a: FinitePredictiveModel, b: FinitePredictiveModel, tol: float = 1e-9) -> bool:
    """Structural equality: same names, same topology, probabilities within tol."""
    if a.states != b.states or a.alphabet != b.alphabet:
        return False
    keys_a = {k for k, (p, _) in a.trans.items() if p > POSITIVE_TOL}
    keys_b = {k for k, (p, _) in b.trans.items() if p > POSITIVE_TOL}
    if keys_a != keys_b:
        return False
    for key in keys_a:
        pa, sa = a.trans[key]
        pb, sb = b.trans[key]
        if sa != sb or abs(pa - pb) > tol:
            return False
    return True


def stationary(m: FinitePredictiveModel) -> Distribution:
    """Left fixed vector of the summed transition matrix, normalized to 1.

    Solved directly as the least-squares solution of the singular system with
    a normalization row appended; falls back to damped power iteration if the
    direct residual is not tight.
    """
    t_mat = m.total_matrix()
    n = len(m.states)
    system = np.vstack([t_mat.T - np.eye(n), np.ones((1, n))])
    rhs = np.zeros(n + 1)
    rhs[-1] = 1.0
    pi, *_ = np.linalg.lstsq(system, rhs, rcond=None)
    if _stationary_residual(pi, t_mat) > STATIONARY_RESIDUAL or pi.min() < -1e-10:
        pi = _power_iteration(t_mat)
    pi = np.clip(pi, 0.0, None)
    pi /= pi.sum()
    if _stationary_residual(pi, t_mat) > STATIONARY_RESIDUAL:
        raise NoConvergenceError("stationary solve did not reach residual 1e-10")
    return validate_distribution(pi)


def _stationary_residual(pi: np.ndarray, t_mat: np.ndarray) -> float:
    return float(np.max(np.abs(pi @ t_mat - pi)))


def _power_iteration(t_mat: np.ndarray) -> np.ndarray:
    # lazy chain (I + T)/2 keeps periodic cycles from oscillating
    n = t_mat.shape[0]
    v = np.full(n, 1.0 / n)
    for _ in range(_POWER_ITER_CAP):
        nxt = 0.5 * (v + v @ t_mat)
        nxt /= nxt.sum()
        if np.max(np.abs(nxt - v)) < 1e-13:
            return nxt
        v = nxt
    raise NoConvergenceError(f"power iteration did not converge in {_POWER_ITER_CAP} steps")


def _as_symbols(m: FinitePredictiveModel, word) -> list[str]:
    symbols = list(word)
    for x in symbols:
        if x not in m.alphabet:
            raise UnknownSymbolError(f"symbol {x!r} not in alphabet {m.alphabet}")
    return symbols


def word_probability(m: FinitePredictiveModel, word, start: str | None = None) -> float:
    """Probability of emitting ``word``, from the stationary mix or a fixed state."""
    symbols = _as_symbols(m, word)
    if start is None:
        vec = stationary(m).probs.copy()
    else:
        if start not in m.states:
            raise UnknownStateError(f"unknown start state {start!r}")
        vec = np.zeros(len(m.states))
        vec[m.state_index()[start]] = 1.0
    for x in symbols:
        vec = vec @ m.symbol_matrix(x)
    return float(vec.sum())


def word_distribution(m: FinitePredictiveModel, length: int, start: str | None = None) -> dict:
    """All positive-probability words of exactly ``length`` symbols.

    Returns {word tuple: probability}; prefixes are shared, so this is much
    cheaper than one word_probability call per word.
    """
    mats = {x: m.symbol_matrix(x) for x in m.alphabet}
    if start is None:
        root = stationary(m).probs
    else:
        if start not in m.states:
            raise UnknownStateError(f"unknown start state {start!r}")
        root = np.zeros(len(m.states))
        root[m.state_index()[start]] = 1.0
    out: dict[tuple, float] = {}
    stack = [((), root)]
    while stack:
        prefix, vec = stack.pop()
        if len(prefix) == length:
            out[prefix] = float(vec.sum())
            continue
        for x in m.alphabet:
            nxt = vec @ mats[x]
            if nxt.sum() > 0.0:
                stack.append((prefix + (x,), nxt))
    return out


def renyi_memory(m: FinitePredictiveModel, alpha) -> float:
    """Renyi entropy of the stationary state distribution, in bits."""
    return renyi_entropy(stationary(m), alpha)


def split_state(
    m: FinitePredictiveModel,
    target: str,
    k: int,
    router: dict[tuple[str, str], int] | None = None,
    names: tuple[str, ...] | None = None,
) -> FinitePredictiveModel:
    """Replace ``target`` by ``k`` copies that share its outgoing distribution.

    ``router`` maps every incoming transition (from_state, symbol) of the
    target onto a copy index; self-loops re-enter whichever copy the router
    assigns to (target, symbol).  The split model generates the identical
    process, with the copies probabilistically equivalent by construction.
    """
    if target not in m.states:
        raise UnknownStateError(f"unknown state {target!r}")
    if k < 1:
        raise ValueError("k must be at least 1")
    if k == 1:
        return m
    incoming = sorted(
        (s, x) for (s, x), (p, succ) in m.trans.items() if succ == target and p > POSITIVE_TOL
    )
    router = dict(router or {})
    if set(router) != set(incoming):
        raise UnreachableCopyError(
            f"router must cover exactly the incoming transitions of {target!r}: {incoming}"
        )
    if any(not (0 <= c < k) for c in router.values()):
        raise UnreachableCopyError(f"router values must lie in 0..{k - 1}")
    missing = set(range(k)) - set(router.values())
    if missing:
        raise UnreachableCopyError(f"copies {sorted(missing)} receive no incoming transition")
    if names is None:
        names = tuple(f"{target}_{i + 1}" for i in range(k))
    if len(names) != k or len(set(names)) != k:
        raise ValueError("need k distinct copy names")
    if set(names) & (set(m.states) - {target}):
        raise ValueError("copy names collide with existing states")

    def routed(s: str, x: str) -> str:
        return names[router[(s, x)]]

    new_states: list[str] = []
    for s in m.states:
        new_states.extend(names if s == target else (s,))
    new_trans: dict[tuple[str, str], tuple[float, str]] = {}
    for (s, x), (p, succ) in m.trans.items():
        if p <= POSITIVE_TOL:
            continue
        if s == target:
            succ2 = routed(target, x) if succ == target else succ
            for copy in names:
                new_trans[(copy, x)] = (p, succ2)
        else:
            new_trans[(s, x)] = (p, routed(s, x) if succ == target else succ)
    return FinitePredictiveModel(tuple(new_states), m.alphabet, new_trans)


# ---------------------------------------------------------------- file format

def _parse_number(token: str, lineno: int) -> float:
    try:
        if "/" in token:
            return float(Fraction(token))
        return float(token)
    except (ValueError, ZeroDivisionError) as exc:
        raise ModelFormatError(f"bad number {token!r}", lineno) from exc


def _significant(x: float) -> str:
    return f"{x:.12g}"


def parse_model(text: str) -> FinitePredictiveModel:
    """Parse the line-oriented classical model format.

    Syntax problems raise :class:`ModelFormatError` with the line number;
    semantic problems raise the matching validation error.
    """
    kind = None
    alphabet: tuple[str, ...] | None = None
    states: tuple[str, ...] | None = None
    trans: dict[tuple[str, str], tuple[float, str]] = {}
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
            if rest != "classical":
                raise ModelFormatError(f"expected 'model: classical', got {rest!r}", lineno)
            kind = rest
        elif head == "alphabet":
            if alphabet is not None:
                raise ModelFormatError("duplicate alphabet line", lineno)
            alphabet = tuple(rest.split())
            if not alphabet or len(set(alphabet)) != len(alphabet):
                raise ModelFormatError("alphabet must list distinct symbols", lineno)
        elif head == "states":
            if states is not None:
                raise ModelFormatError("duplicate states line", lineno)
            states = tuple(rest.split())
            if not states or len(set(states)) != len(states):
                raise ModelFormatError("states must list distinct labels", lineno)
        elif head == "t":
            if kind is None or alphabet is None or states is None:
                raise ModelFormatError("transitions before model/alphabet/states", lineno)
            fields = rest.split()
            if len(fields) != 4:
                raise ModelFormatError("expected 't: FROM SYMBOL PROB TO'", lineno)
            src, sym, prob_tok, dst = fields
            if src not in states:
                raise UnknownStateError(f"line {lineno}: unknown state {src!r}")
            if dst not in states:
                raise UnknownStateError(f"line {lineno}: unknown state {dst!r}")
            if sym not in alphabet:
                raise UnknownSymbolError(f"line {lineno}: unknown symbol {sym!r}")
            p = _parse_number(prob_tok, lineno)
            if p < 0 or p > 1 + ROW_SUM_TOL:
                raise ModelFormatError(f"probability {prob_tok!r} outside [0, 1]", lineno)
            key = (src, sym)
            if key in trans:
                prev_p, prev_dst = trans[key]
                if prev_dst != dst:
                    raise NotUnifilarError(
                        f"line {lineno}: ({src}, {sym}) already goes to {prev_dst!r}"
                    )
                raise DuplicateTransitionError(
                    f"line {lineno}: duplicate transition ({src}, {sym})"
                )
            trans[key] = (p, dst)
        else:
            raise ModelFormatError(f"unrecognized directive {head!r}", lineno)
    if kind is None:
        raise ModelFormatError("missing 'model:' line")
    if alphabet is None or states is None:
        raise ModelFormatError("missing alphabet or states declaration")
    return FinitePredictiveModel(states, alphabet, trans)


def serialize_model(m: FinitePredictiveModel) -> str:
    """Emit the model file; declaration order, 12 significant digits."""
    lines = [
        "model: classical",
        "alphabet: " + " ".join(m.alphabet),
        "states: " + " ".join(m.states),
    ]
    for s in m.states:
        for x in m.alphabet:
            entry = m.trans.get((s, x))
            if entry is not None and entry[0] > POSITIVE_TOL:
                lines.append(f"t: {s} {x} {_significant(entry[0])} {entry[1]}")
    return "\n".join(lines) + "\n"
