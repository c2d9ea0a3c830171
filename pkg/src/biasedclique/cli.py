"""Command-line front end.

Exit status: 0 on success or a confirmed claim, 1 when a verification
fails, 2 on usage, input or I/O errors.
"""
from __future__ import annotations

import argparse
import sys
from math import factorial
from typing import Sequence

import numpy as np

from . import kernels
from .bipartite import (
    HEADER as BIPARTITE_HEADER,
    find_consistent_biclique,
    parse_bipartite,
    random_bipartite_labelling,
    validate_bipartite,
    write_bipartite,
)
from .circuits import (
    circuit_count_formula,
    circuit_table,
    enumerate_paths,
    iter_theta_blocks,
    parse_circuit,
    path_count_formula,
    theta_count_formula,
)
from .counterexample import (
    partitions_from_qmask,
    build_bq,
    verify_counterexample_theorem,
)
from .generate import premise_instance, random_valid_instance
from .instance import (
    InstanceFormatError,
    make_ka,
    make_ko,
    make_ku,
    parse_instance,
    validate,
    write_instance,
)
from .labelling import (
    check_not_group_labellable,
    derive_instance,
    gamma_a,
    gamma_o,
    gamma_u,
    random_labelling,
    recognize_delta_multiples,
)
from .omega import build_omega, delta_partition
from .search import classify_constant, search_unavoidable

DEFAULT_SEED = 20240607


class UsageError(Exception):
    pass


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load(path: str):
    """Parse an instance file of either kind; the header decides which."""
    text = _read_text(path)
    first = text.split("\n", 1)[0].strip()
    try:
        if first == BIPARTITE_HEADER:
            return parse_bipartite(text)
        return parse_instance(text)
    except InstanceFormatError as exc:
        exc.source = path
        raise


def _load_clique(path: str):
    inst = _load(path)
    if not hasattr(inst, "n"):
        raise UsageError(f"{path} holds a bipartite instance; this command needs a clique")
    return inst


def _emit(lines) -> None:
    out = sys.stdout
    for line in lines:
        out.write(f"{line}\n")


# -- verbs -------------------------------------------------------------------


def cmd_gen(args) -> int:
    rng = np.random.default_rng(args.seed)
    fam = args.family
    if fam == "biclique":
        if args.nb is None:
            raise UsageError("--family biclique needs --nb (side A takes --n)")
        bi = random_bipartite_labelling(args.n, args.nb, rng, args.modulus)
        write_bipartite(bi, sys.stdout if args.out in (None, "-") else args.out)
        return 0
    if fam == "ku":
        inst = make_ku(args.n)
    elif fam == "ko":
        inst = make_ko(args.n)
    elif fam == "ka":
        if args.a is None:
            raise UsageError("--family ka needs --a")
        inst = make_ka(args.a, args.n)
    elif fam == "labelling":
        inst = derive_instance(random_labelling(args.n, args.modulus, rng))
    elif fam == "premise":
        inst = premise_instance(args.n, rng)
    elif fam == "random":
        inst = random_valid_instance(args.n, rng)
    else:
        inst = build_bq(args.n, partitions_from_qmask(args.n, args.q_mask))
    if args.out in (None, "-"):
        write_instance(inst, sys.stdout)
    else:
        write_instance(inst, args.out)
    return 0


def cmd_validate(args) -> int:
    inst = _load(args.file)
    if hasattr(inst, "nA"):
        report = validate_bipartite(inst, max_violations=args.max_violations)
    else:
        restricted = [parse_circuit(c) for c in args.restrict] if args.restrict else None
        report = validate(
            inst,
            restricted,
            max_violations=args.max_violations,
            allow_large=args.allow_large,
            jobs=args.jobs,
        )
    _emit(report.lines())
    return 0 if report.valid else 1


def cmd_classify(args) -> int:
    inst = _load_clique(args.file)
    a = recognize_delta_multiples(inst)
    lines = [f"delta_multiples={'none' if a is None else a}"]
    if inst.n >= 5:
        lines.append(f"labellable={check_not_group_labellable(inst)}")
        res = classify_constant(inst)
        if res is None:
            lines.append("constant=none")
        else:
            lines.append(f"constant a={res[0]} per_vertex_check={str(res[1]).lower()}")
    _emit(lines)
    return 0


def cmd_search(args) -> int:
    inst = _load_clique(args.file)
    res = search_unavoidable(inst, args.r, args.s, args.t)
    _emit([str(res), f"certificate: {res.certificate}"])
    return 0


def cmd_omega(args) -> int:
    omega = build_omega(args.n, allow_large=args.allow_large)
    ok = omega.components == delta_partition(args.n)
    lines = omega.summary_lines()
    lines.append(f"components={len(omega.components)} match_delta_classes={str(ok).lower()}")
    _emit(lines)
    return 0 if ok else 1


def cmd_bipartite_search(args) -> int:
    inst = _load(args.file)
    if not hasattr(inst, "nA"):
        raise UsageError(f"{args.file} holds a clique instance; bipartite-search needs '{BIPARTITE_HEADER}'")
    res = find_consistent_biclique(inst, args.t)
    if res is None:
        _emit(["none"])
    else:
        _emit([str(res), f"certificate: {res.certificate}"])
    return 0


def cmd_counterexample(args) -> int:
    if args.all:
        masks = None
    elif args.q_mask is not None:
        masks = [args.q_mask]
    else:
        raise UsageError("counterexample needs --q-mask or --all")
    if args.n > 10 and not args.allow_large:
        raise UsageError(f"n = {args.n} enumerates every circuit of K_{args.n}; pass --allow-large")
    report = verify_counterexample_theorem(args.n, masks, jobs=args.jobs, allow_large=args.allow_large)
    _emit(report.lines())
    if args.all:
        _emit(report.summary_lines())
        return 0 if report.ok else 1
    r = report.results[0]
    full = (1 << report.partitions) - 1
    if r.qmask == 0:
        expected = f"IsKa:{args.n - 4}"
    elif r.qmask == full:
        expected = str(r.verdict)
    else:
        expected = "No"
    return 0 if r.valid and str(r.verdict) == expected else 1


# -- verify-lemma ------------------------------------------------------------


def lemma_basic(n: int, args) -> tuple[list[str], bool]:
    lines, ok = [], True
    checks = [("u", derive_instance(gamma_u(n)), make_ku(n)), ("o", derive_instance(gamma_o(n)), make_ko(n))]
    for a in range(0, n):
        checks.append((f"a={a}", derive_instance(gamma_a(a, n)), make_ka(a, n)))
    for name, derived, family in checks:
        same = derived == family
        valid = validate(family).valid if n <= 8 else True
        ok &= same and valid
        lines.append(f"family {name}: derived_equals={str(same).lower()} valid={str(valid).lower()}")
    return lines, ok


def lemma_paths(n: int, args) -> tuple[list[str], bool]:
    p = enumerate_paths(n)
    c = len(circuit_table(n)) if n >= 3 else 0
    pf, cf = path_count_formula(n), circuit_count_formula(n) if n >= 3 else 0
    ok = p == pf and c == cf and p < 2 * factorial(n) and (n < 3 or c <= 2 * factorial(n - 1))
    return [f"paths={p} formula={pf} bound={2 * factorial(n)}", f"circuits={c} formula={cf}"], ok


def lemma_omega(n: int, args) -> tuple[list[str], bool]:
    omega = build_omega(n, allow_large=args.allow_large)
    ok = omega.components == delta_partition(n)
    deltas = circuit_table(n).deltas
    equal = all(deltas[u] == deltas[v] for u, v in omega.adjacency.tolist())
    lines = omega.summary_lines()
    lines.append(f"adjacent_equal_delta={str(equal).lower()} match_delta_classes={str(ok).lower()}")
    return lines, ok and equal


def lemma_constant(n: int, args) -> tuple[list[str], bool]:
    rng = np.random.default_rng(args.seed)
    ok, seen = True, 0
    for _ in range(args.count):
        res = classify_constant(premise_instance(n, rng))
        good = res is not None and res[1]
        ok &= good
        seen += good
    return [f"instances={args.count} per_vertex_check={seen}"], ok


def lemma_theta_counts(n: int, args) -> tuple[list[str], bool]:
    total = sum(len(b[2]) for b in iter_theta_blocks(n))
    formula = theta_count_formula(n)
    return [f"thetas={total} formula={formula}"], total == formula


LEMMAS = {
    "basic": lemma_basic,
    "paths": lemma_paths,
    "omega": lemma_omega,
    "constant": lemma_constant,
    "theta-counts": lemma_theta_counts,
}


def cmd_verify_lemma(args) -> int:
    lines, ok = LEMMAS[args.which](args.n, args)
    _emit(lines)
    _emit([f"{args.which} n={args.n}: {'verified' if ok else 'FAILED'}"])
    return 0 if ok else 1


# -- parser ------------------------------------------------------------------


def _vertex_count(text: str) -> int:
    n = int(text)
    if not 1 <= n <= kernels.MAX_VERTICES:
        raise argparse.ArgumentTypeError(f"n must lie in 1..{kernels.MAX_VERTICES}")
    return n


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="random seed")
    common.add_argument("--jobs", type=_positive, default=1, help="worker processes")

    parser = argparse.ArgumentParser(prog="biasedclique", description="Biased cliques and their ordered structure.")
    sub = parser.add_subparsers(dest="verb", required=True, metavar="verb")

    p = sub.add_parser("gen", parents=[common], help="write an instance file")
    p.add_argument("--family", required=True, choices=["ku", "ko", "ka", "labelling", "premise", "random", "bq", "biclique"])
    p.add_argument("--n", type=_vertex_count, required=True)
    p.add_argument("--a", type=int)
    p.add_argument("--nb", type=_positive, help="side B size for --family biclique")
    p.add_argument("--modulus", type=int, default=0, help="cyclic group order for --family labelling (0: integers)")
    p.add_argument("--q-mask", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("validate", parents=[common], help="check the theta property")
    p.add_argument("file")
    p.add_argument("--restrict", action="append", metavar="CIRCUIT", help='e.g. "1 3 2 4"; repeatable')
    p.add_argument("--max-violations", type=int, default=10)
    p.add_argument("--allow-large", action="store_true")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("classify", parents=[common], help="labellability and constant classification")
    p.add_argument("file")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("search", parents=[common], help="find K^u(r), K^o(s) or K^a(t)")
    p.add_argument("file")
    p.add_argument("--r", type=_positive, default=4)
    p.add_argument("--s", type=_positive, default=4)
    p.add_argument("--t", type=int, default=4)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("omega", parents=[common], help="components of the circuit graph")
    p.add_argument("--n", type=_vertex_count, required=True)
    p.add_argument("--allow-large", action="store_true")
    p.set_defaults(func=cmd_omega)

    p = sub.add_parser("bipartite-search", parents=[common], help="find a consistent K_{t,t}")
    p.add_argument("file")
    p.add_argument("--t", type=_positive, required=True)
    p.set_defaults(func=cmd_bipartite_search)

    p = sub.add_parser("counterexample", parents=[common], help="check the perturbed K^{n-4}(n) family")
    p.add_argument("--n", type=_vertex_count, default=10)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--q-mask", type=int)
    g.add_argument("--all", action="store_true")
    p.add_argument("--allow-large", action="store_true")
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("verify-lemma", parents=[common], help="check a structural statement")
    p.add_argument("which", choices=sorted(LEMMAS))
    p.add_argument("--n", type=_vertex_count, required=True)
    p.add_argument("--count", type=_positive, default=25, help="instances for 'constant'")
    p.add_argument("--allow-large", action="store_true")
    p.set_defaults(func=cmd_verify_lemma)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InstanceFormatError as exc:
        where = getattr(exc, "source", None)
        prefix = f"{where}: " if where else ""
        print(f"error: {prefix}line {exc.lineno}: {exc.message}", file=sys.stderr)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    except OSError as exc:
        print(f"error: {exc.strerror or exc}: {exc.filename or ''}".rstrip(": "), file=sys.stderr)
    return 2


if __name__ == "__main__":
    sys.exit(main())
