"""Command-line front end.

Subcommands: validate, entropy, lorenz, compare, epsilonize, qmachine,
counterexample, wordprob, export.  Exit codes: 0 success, 1 a check
failed, 2 usage or parse error.  ``--format csv`` output is prose-free and
byte-stable across runs; nothing is written to disk unless ``--out`` is
given.  The MACHINA_TOL environment variable overrides the default 1e-9
majorization tolerance.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import warnings

import numpy as np

from .catalog import catalog_names, get_process
from .distributions import (
    ALPHA_GRID,
    compare,
    lorenz_curve,
    pad_to,
    renyi_entropy,
)
from .errors import (
    DuplicateTransitionError,
    MachinaError,
    ModelFormatError,
    SingularThetaError,
    UnknownStateError,
    UnknownSymbolError,
    UnphysicalThetaError,
)
from .hmm import (
    FinitePredictiveModel,
    parse_model,
    serialize_model,
    stationary,
    word_distribution,
    word_probability,
)
from .minimize import block_map_lines, format_alpha, is_epsilon_machine, strong_minimality_report
from .quantum import (
    PureStateQuantumModel,
    build_qmachine,
    classical_equivalent,
    completeness_residual,
    memory_spectrum,
    parse_quantum_model,
    quantum_word_probability,
    serialize_quantum_model,
    strong_advantage_report,
    vn_renyi,
)
from .qubit_family import counterexample_report, sweep_csv

_USAGE_ERRORS = (
    ModelFormatError,
    UnknownStateError,
    UnknownSymbolError,
    DuplicateTransitionError,
    UnphysicalThetaError,
    SingularThetaError,
    ValueError,
)


def _csv_num(x: float) -> str:
    return f"{x:.12g}"


def _human_num(x: float) -> str:
    return f"{x:.6g}"


def _parse_text(text: str):
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(":")
        if head.strip() != "model":
            break
        kind = rest.strip()
        if kind == "classical":
            return parse_model(text)
        if kind == "quantum":
            return parse_quantum_model(text)
        raise ModelFormatError(f"unknown model kind {kind!r}")
    raise ModelFormatError("file must start with a 'model:' line")


def _load_any(spec: str):
    """A model file path, or a catalog name like ``biased_coin:0.6``."""
    if os.path.exists(spec):
        with open(spec, encoding="utf-8") as fh:
            return _parse_text(fh.read())
    return get_process(spec)


def _resolve_single(args):
    specs = [s for s in (getattr(args, "model", None), getattr(args, "process", None)) if s]
    if len(specs) != 1:
        raise ValueError("give exactly one of a MODEL argument or --process")
    return _load_any(specs[0])


def _memory_distribution(model):
    """What a model pays for memory: stationary state, or spectrum if quantum."""
    if isinstance(model, PureStateQuantumModel):
        return memory_spectrum(model)
    return stationary(model)


def _parse_alphas(raw: str | None):
    if raw is None:
        return ALPHA_GRID
    out = []
    for tok in raw.split(","):
        tok = tok.strip()
        if not tok:
            continue
        value = math.inf if tok.lower() in ("inf", "infinity") else float(tok)
        if value < 0:
            raise ValueError(f"alpha must be nonnegative, got {tok}")
        out.append(value)
    if not out:
        raise ValueError("empty alpha list")
    return tuple(out)


def _write_or_print(args, payload: str):
    out = getattr(args, "out", None)
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(payload)
        print(f"wrote {out}")
    else:
        print(payload, end="")


# ------------------------------------------------------------- subcommands

def cmd_validate(args) -> int:
    with open(args.path, encoding="utf-8") as fh:
        model = _parse_text(fh.read())
    if isinstance(model, FinitePredictiveModel):
        pi = stationary(model)
        resid = float(np.max(np.abs(pi.probs @ model.total_matrix() - pi.probs)))
        print("kind: classical")
        print(f"states: {len(model.states)}")
        print(f"symbols: {len(model.alphabet)}")
        print("row-stochastic: ok")
        print("unifilar: ok")
        print("irreducible: ok")
        print(f"stationary-residual: {resid:.3g}")
    else:
        print("kind: quantum")
        print(f"dim: {model.dim}")
        print(f"labels: {model.n}")
        print(f"symbols: {len(model.alphabet)}")
        print("unit-norms: ok")
        print(f"completeness-residual: {completeness_residual(model):.3g}")
        print("unifilar: ok")
    return 0


def cmd_entropy(args) -> int:
    model = _resolve_single(args)
    alphas = _parse_alphas(args.alpha)
    quantum = isinstance(model, PureStateQuantumModel)
    rows = [
        (a, vn_renyi(model, a) if quantum else renyi_entropy(stationary(model), a))
        for a in alphas
    ]
    if args.format == "csv":
        print("alpha,bits")
        for a, bits in rows:
            print(f"{format_alpha(a)},{_csv_num(bits)}")
    else:
        label = "S_alpha" if quantum else "H_alpha"
        print(f"{'alpha':<8}{label} (bits)")
        for a, bits in rows:
            print(f"{format_alpha(a):<8}{_human_num(bits)}")
    return 0


def _two_distributions(args):
    dist_a = _memory_distribution(_load_any(args.model_a))
    dist_b = _memory_distribution(_load_any(args.model_b))
    n = max(len(dist_a), len(dist_b))
    return pad_to(dist_a, n), pad_to(dist_b, n)


def cmd_lorenz(args) -> int:
    dist_a, dist_b = _two_distributions(args)
    verdict = compare(dist_a, dist_b)
    curve_a = lorenz_curve(dist_a)
    curve_b = lorenz_curve(dist_b)
    if args.format == "csv":
        print(f"verdict,{verdict}")
        print("k,cumulative_a,cumulative_b")
        for k, ca, cb in zip(curve_a.k, curve_a.cumulative, curve_b.cumulative):
            print(f"{int(k)},{_csv_num(ca)},{_csv_num(cb)}")
    else:
        print(f"verdict: {verdict}")
        print(f"{'k':<6}{'cumulative_a':<16}cumulative_b")
        for k, ca, cb in zip(curve_a.k, curve_a.cumulative, curve_b.cumulative):
            print(f"{int(k):<6}{_human_num(ca):<16}{_human_num(cb)}")
    return 0


def cmd_compare(args) -> int:
    dist_a, dist_b = _two_distributions(args)
    verdict = compare(dist_a, dist_b)
    if args.format == "csv":
        print(f"verdict,{verdict}")
    else:
        print(f"verdict: {verdict}")
    return 0


def cmd_epsilonize(args) -> int:
    model = _load_any(args.model)
    if not isinstance(model, FinitePredictiveModel):
        raise ValueError("epsilonize expects a classical model")
    report = strong_minimality_report(model)
    if report.already_minimal:
        print("already minimal: every state is probabilistically distinct")
    print("blocks:")
    for line in block_map_lines(report.partition):
        print(f"  {line}")
    print(f"states: {len(model.states)} -> {len(report.machine.states)}")
    print(f"verdict: {report.verdict}")
    print(f"{'alpha':<8}{'H_machine':<14}H_model")
    for a, h_machine, h_model in report.entropies:
        print(f"{format_alpha(a):<8}{_human_num(h_machine):<14}{_human_num(h_model)}")
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(serialize_model(report.machine))
        print(f"wrote {args.out}")
    return 0


def cmd_qmachine(args) -> int:
    model = _resolve_single(args)
    if not isinstance(model, FinitePredictiveModel):
        raise ValueError("qmachine expects a classical model")
    minimal = is_epsilon_machine(model)
    if not minimal:
        print("warning: input is not minimal; synthesis proceeds anyway", file=sys.stderr)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        q = build_qmachine(model)
    # a non-minimal input collapses equivalent states, so the read-off can be
    # ambiguous; the spectrum still majorizes the input's stationary state
    report = strong_advantage_report(q, pi=None if minimal else stationary(model))
    gram = q.states.conj().T @ q.states
    print(f"dim: {q.dim}")
    print("gram:")
    for row in np.real_if_close(gram):
        print("  " + " ".join(f"{float(np.real(v)):>10.6g}" for v in row))
    print("spectrum: " + " ".join(_human_num(v) for v in report.spectrum.probs))
    print(f"verdict: {report.verdict}")
    print(f"{'alpha':<8}{'S_quantum':<14}H_classical")
    for a, s_q, h_c in report.entropies:
        print(f"{format_alpha(a):<8}{_human_num(s_q):<14}{_human_num(h_c)}")
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(serialize_quantum_model(q))
        print(f"wrote {args.out}")
    return 0


def cmd_counterexample(args) -> int:
    if args.grid < 100:
        print("error: --grid must be at least 100", file=sys.stderr)
        return 2
    report = counterexample_report(args.grid)
    if args.format == "csv":
        print(sweep_csv(report.sweep), end="")
    else:
        for step in report.steps:
            print(step)
        print(f"result: {'PASS' if report.passed else 'FAIL'}")
    return 0 if report.passed else 1


def cmd_wordprob(args) -> int:
    model = _resolve_single(args)
    quantum = isinstance(model, PureStateQuantumModel)
    classical = classical_equivalent(model) if quantum else model
    if args.word is not None:
        word = tuple(args.word)
        p_cl = word_probability(classical, word)
        if quantum:
            p_q = quantum_word_probability(model, word)
            delta = abs(p_q - p_cl)
            if args.format == "csv":
                print("word,probability,classical_delta")
                print(f"{args.word},{_csv_num(p_q)},{_csv_num(delta)}")
            else:
                print(f"P({args.word}) = {_human_num(p_q)}")
                print(f"classical-equivalent delta: {delta:.3g}")
        else:
            if args.format == "csv":
                print("word,probability")
                print(f"{args.word},{_csv_num(p_cl)}")
            else:
                print(f"P({args.word}) = {_human_num(p_cl)}")
        return 0
    length = args.max_len
    table = word_distribution(classical, length)
    words = sorted(table)
    if quantum:
        from .quantum import quantum_word_distribution

        q_table = quantum_word_distribution(model, length)
        if args.format == "csv":
            print("word,probability,classical_delta")
            for w in words:
                delta = abs(q_table.get(w, 0.0) - table[w])
                print(f"{''.join(w)},{_csv_num(q_table.get(w, 0.0))},{_csv_num(delta)}")
        else:
            max_delta = max(abs(q_table.get(w, 0.0) - table[w]) for w in words)
            print(f"{'word':<12}probability")
            for w in words:
                print(f"{''.join(w):<12}{_human_num(q_table.get(w, 0.0))}")
            print(f"max classical-equivalent delta: {max_delta:.3g}")
    else:
        if args.format == "csv":
            print("word,probability")
            for w in words:
                print(f"{''.join(w)},{_csv_num(table[w])}")
        else:
            print(f"{'word':<12}probability")
            for w in words:
                print(f"{''.join(w):<12}{_human_num(table[w])}")
    return 0


def cmd_export(args) -> int:
    model = get_process(args.process)
    if isinstance(model, FinitePredictiveModel):
        payload = serialize_model(model)
    else:
        payload = serialize_quantum_model(model)
    _write_or_print(args, payload)
    return 0


# ------------------------------------------------------------------ parser

def _add_format(sub):
    sub.add_argument("--format", choices=("human", "csv"), default="human")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="machina",
        description="Build, minimize, and compare classical and quantum models "
        "of finite stochastic processes by majorization.",
    )
    subs = parser.add_subparsers(dest="command")

    p = subs.add_parser("validate", help="check a model file and report its properties")
    p.add_argument("path")
    p.set_defaults(func=cmd_validate)

    p = subs.add_parser("entropy", help="Renyi memory table of a model")
    p.add_argument("model", nargs="?", help="model file or catalog name")
    p.add_argument("--process", help=f"catalog name, one of: {', '.join(catalog_names())}")
    p.add_argument("--alpha", help="comma-separated alpha list (default 0,0.5,1,2,inf)")
    _add_format(p)
    p.set_defaults(func=cmd_entropy)

    p = subs.add_parser("lorenz", help="Lorenz curves of two models plus the verdict")
    p.add_argument("model_a")
    p.add_argument("model_b")
    _add_format(p)
    p.set_defaults(func=cmd_lorenz)

    p = subs.add_parser("compare", help="majorization verdict between two models")
    p.add_argument("model_a")
    p.add_argument("model_b")
    _add_format(p)
    p.set_defaults(func=cmd_compare)

    p = subs.add_parser("epsilonize", help="merge equivalent states; report the comparison")
    p.add_argument("model", help="model file or catalog name")
    p.add_argument("--out", help="write the merged machine here")
    p.set_defaults(func=cmd_epsilonize)

    p = subs.add_parser("qmachine", help="synthesize the overlap-based quantum model")
    p.add_argument("model", nargs="?", help="model file or catalog name")
    p.add_argument("--process", help="catalog name")
    p.add_argument("--out", help="write the quantum model file here")
    p.set_defaults(func=cmd_qmachine)

    p = subs.add_parser(
        "counterexample", help="run the no-strong-minimum argument for the 3-state chain"
    )
    p.add_argument("--grid", type=int, default=10_000)
    _add_format(p)
    p.set_defaults(func=cmd_counterexample)

    p = subs.add_parser("wordprob", help="word probability or full fixed-length table")
    p.add_argument("model", nargs="?", help="model file or catalog name")
    p.add_argument("--process", help="catalog name")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--word", help="one word, e.g. 0110")
    group.add_argument("--max-len", type=int, help="emit all words of this length")
    _add_format(p)
    p.set_defaults(func=cmd_wordprob)

    p = subs.add_parser("export", help="write a catalog model to its file format")
    p.add_argument("--process", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_export)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code is None else int(exc.code)
    if not getattr(args, "command", None):
        parser.print_help()
        return 2
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except MachinaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
