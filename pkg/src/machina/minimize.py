"""State merging for unifilar HMMs.

Two states are probabilistically equivalent when they assign the same
probability to every future word.  Moore-style signature refinement finds
the coarsest partition whose blocks agree on per-symbol emission
probabilities and land in a common block after each symbol; merging those
blocks yields the minimal machine for the generated process.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .distributions import (
    ALPHA_GRID,
    Distribution,
    MajorizationVerdict,
    compare,
    renyi_entropy,
)
from .hmm import POSITIVE_TOL, FinitePredictiveModel, stationary

EQUIV_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class StatePartition:
    """Disjoint blocks covering the state set, plus the index of each state."""

    blocks: tuple[frozenset[str], ...]
    block_of: dict[str, int]

    def block_names(self) -> tuple[str, ...]:
        return tuple(min(block) for block in self.blocks)

    def is_discrete(self) -> bool:
        return all(len(block) == 1 for block in self.blocks)


def _emission_vector(m: FinitePredictiveModel, state: str) -> tuple[float, ...]:
    return tuple(m.prob(state, x) for x in m.alphabet)


def _group_by_emissions(m: FinitePredictiveModel, tol: float) -> dict[str, int]:
    # union-find over pairwise closeness; fine at desk scale
    states = list(m.states)
    sigs = {s: _emission_vector(m, s) for s in states}
    parent = {s: s for s in states}

    def find(s):
        while parent[s] != s:
            parent[s] = parent[parent[s]]
            s = parent[s]
        return s

    for i, a in enumerate(states):
        for b in states[i + 1 :]:
            if all(abs(pa - pb) <= tol for pa, pb in zip(sigs[a], sigs[b])):
                parent[find(a)] = find(b)
    roots: dict[str, int] = {}
    labels: dict[str, int] = {}
    for s in states:
        r = find(s)
        if r not in roots:
            roots[r] = len(roots)
        labels[s] = roots[r]
    return labels


def refine_partition(m: FinitePredictiveModel, tol: float = EQUIV_TOL) -> StatePartition:
    """Coarsest partition stable under emissions and per-symbol successors."""
    labels = _group_by_emissions(m, tol)
    for _ in range(len(m.states)):
        signature = {}
        for s in m.states:
            succs = tuple(
                (x, labels[m.successor(s, x)])
                for x in m.alphabet
                if m.prob(s, x) > POSITIVE_TOL
            )
            signature[s] = (labels[s], succs)
        relabel: dict[tuple, int] = {}
        new_labels = {}
        for s in m.states:
            sig = signature[s]
            if sig not in relabel:
                relabel[sig] = len(relabel)
            new_labels[s] = relabel[sig]
        if new_labels == labels:
            break
        labels = new_labels
    n_blocks = max(labels.values()) + 1
    members: list[set[str]] = [set() for _ in range(n_blocks)]
    for s in m.states:
        members[labels[s]].add(s)
    order = sorted(range(n_blocks), key=lambda b: min(m.states.index(s) for s in members[b]))
    blocks = tuple(frozenset(members[b]) for b in order)
    block_of = {s: i for i, block in enumerate(blocks) for s in block}
    return StatePartition(blocks=blocks, block_of=block_of)


def is_epsilon_machine(m: FinitePredictiveModel, tol: float = EQUIV_TOL) -> bool:
    """True iff all states are probabilistically distinct."""
    return refine_partition(m, tol).is_discrete()


def merge(m: FinitePredictiveModel, tol: float = EQUIV_TOL) -> FinitePredictiveModel:
    """Quotient model over the equivalence blocks.

    Blocks are named after their lexicographically smallest member and kept
    in first-appearance order, so the output is deterministic and merging is
    idempotent.
    """
    part = refine_partition(m, tol)
    names = part.block_names()
    trans: dict[tuple[str, str], tuple[float, str]] = {}
    for block, name in zip(part.blocks, names):
        rep = min(block)
        for x in m.alphabet:
            p = m.prob(rep, x)
            if p > POSITIVE_TOL:
                succ_block = part.block_of[m.successor(rep, x)]
                trans[(name, x)] = (p, names[succ_block])
    return FinitePredictiveModel(names, m.alphabet, trans)


@dataclass(frozen=True, eq=False)
class MinimalityReport:
    """Comparison of a model against its merged minimal machine."""

    machine: FinitePredictiveModel
    partition: StatePartition
    machine_stationary: Distribution
    model_stationary: Distribution
    verdict: MajorizationVerdict
    entropies: tuple[tuple[float, float, float], ...]  # (alpha, H machine, H model)

    @property
    def already_minimal(self) -> bool:
        return self.partition.is_discrete()


def strong_minimality_report(m: FinitePredictiveModel, alphas=ALPHA_GRID) -> MinimalityReport:
    """Merge, then compare stationary distributions and entropy tables.

    The merged machine's stationary state should majorize (or tie) the
    model's, hence never exceed it in any Renyi memory.
    """
    part = refine_partition(m)
    machine = merge(m)
    pi_machine = stationary(machine)
    pi_model = stationary(m)
    verdict = compare(pi_machine, pi_model)
    rows = tuple(
        (a, renyi_entropy(pi_machine, a), renyi_entropy(pi_model, a)) for a in alphas
    )
    return MinimalityReport(
        machine=machine,
        partition=part,
        machine_stationary=pi_machine,
        model_stationary=pi_model,
        verdict=verdict,
        entropies=rows,
    )


def canonical_encoding(m: FinitePredictiveModel, ndigits: int = 9) -> tuple:
    """Relabeling-invariant encoding; equal encodings mean isomorphic machines.

    BFS from every state in alphabet order, take the minimal transition
    table.  Intended for small machines (isomorphism smoke tests).
    """
    best = None
    for root in m.states:
        order = [root]
        seen = {root}
        cursor = 0
        while cursor < len(order):
            s = order[cursor]
            cursor += 1
            for x in m.alphabet:
                succ = m.successor(s, x)
                if succ is not None and succ not in seen:
                    seen.add(succ)
                    order.append(succ)
        if len(order) != len(m.states):
            continue
        index = {s: i for i, s in enumerate(order)}
        enc = tuple(
            tuple(
                (x, round(m.prob(s, x), ndigits), index[m.successor(s, x)])
                for x in m.alphabet
                if m.prob(s, x) > POSITIVE_TOL
            )
            for s in order
        )
        if best is None or enc < best:
            best = enc
    if best is None:
        raise ValueError("no state reaches the whole machine")
    return best


def block_map_lines(part: StatePartition) -> list[str]:
    """Human-readable block map, one merged state per line."""
    lines = []
    for block, name in zip(part.blocks, part.block_names()):
        members = " ".join(sorted(block))
        lines.append(f"{name} <- {{{members}}}")
    return lines


def format_alpha(alpha: float) -> str:
    if math.isinf(alpha):
        return "inf"
    if float(alpha) == int(alpha):
        return str(int(alpha))
    return f"{alpha:g}"
