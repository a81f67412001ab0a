"""Seeded generators of random minimal machines and their redundant splits.

Used by the randomized theorem suites: draw a random unifilar irreducible
model, merge it down to its minimal machine, then optionally re-inflate it
with random state splits that preserve the generated process.
"""

from __future__ import annotations

import numpy as np

from .errors import NotIrreducibleError
from .hmm import POSITIVE_TOL, FinitePredictiveModel, split_state
from .minimize import merge

_ALPHABET_POOL = ("0", "1", "2")
_STATE_POOL = tuple("SABCDEFGHJK")


def random_unifilar_model(
    rng: np.random.Generator, n_states: int, n_symbols: int, max_tries: int = 200
) -> FinitePredictiveModel:
    """Random irreducible unifilar model with well-separated probabilities."""
    states = _STATE_POOL[:n_states]
    alphabet = _ALPHABET_POOL[:n_symbols]
    for _ in range(max_tries):
        trans = {}
        for s in states:
            support = 1 + int(rng.integers(n_symbols))
            symbols = rng.choice(n_symbols, size=support, replace=False)
            probs = rng.dirichlet(np.ones(support))
            probs = (probs + 0.15) / (1.0 + 0.15 * support)  # keep entries off zero
            for x_i, p in zip(symbols, probs):
                succ = states[int(rng.integers(n_states))]
                trans[(s, alphabet[int(x_i)])] = (float(p), succ)
        try:
            return FinitePredictiveModel(states, alphabet, trans)
        except NotIrreducibleError:
            continue
    raise NotIrreducibleError(f"no irreducible draw in {max_tries} tries")


def random_epsilon_machine(
    rng: np.random.Generator, max_states: int = 6, max_symbols: int = 3
) -> FinitePredictiveModel:
    """Random minimal machine: merge a random unifilar model."""
    n_states = 2 + int(rng.integers(max_states - 1))
    n_symbols = 2 + int(rng.integers(max_symbols - 1))
    return merge(random_unifilar_model(rng, n_states, n_symbols))


def random_split(rng: np.random.Generator, m: FinitePredictiveModel) -> FinitePredictiveModel | None:
    """One random legal state split, or None if no state can be split."""
    candidates = []
    for target in m.states:
        incoming = sorted(
            (s, x)
            for (s, x), (p, succ) in m.trans.items()
            if succ == target and p > POSITIVE_TOL
        )
        if len(incoming) >= 2:
            candidates.append((target, incoming))
    if not candidates:
        return None
    target, incoming = candidates[int(rng.integers(len(candidates)))]
    k = 2 + int(rng.integers(min(3, len(incoming)) - 1))
    # surjective router: each copy claims one incoming edge, rest at random
    order = rng.permutation(len(incoming))
    router = {}
    for rank, edge_i in enumerate(order):
        copy = rank if rank < k else int(rng.integers(k))
        router[incoming[int(edge_i)]] = copy
    existing = set(m.states)
    names = []
    suffix = 1
    while len(names) < k:
        name = f"{target}_{suffix}"
        if name not in existing:
            names.append(name)
            existing.add(name)
        suffix += 1
    return split_state(m, target, k, router, tuple(names))


def random_refinement(
    rng: np.random.Generator, m: FinitePredictiveModel, max_splits: int = 3
) -> FinitePredictiveModel:
    """Apply 1..max_splits random splits; returns m itself if none are legal."""
    out = m
    n_splits = 1 + int(rng.integers(max_splits))
    for _ in range(n_splits):
        nxt = random_split(rng, out)
        if nxt is None:
            break
        out = nxt
    return out
