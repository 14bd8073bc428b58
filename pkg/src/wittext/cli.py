"""Command-line front end: tables, single classifications, oracle sweeps, witnesses."""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from . import extform, oracle
from .errors import DimensionOverflow, UnsupportedHeight, WittExtError
from .extform import classify_ext_simple, classify_w0_ext, ext_table
from .modules import (SIMPLE_S, SYMBOLIC_L, TRIVIAL, VERMA, ModuleSpec, build_k_lambda, build_module,
                      restrict_to_W0, simple_modules, verma_spec)
from .witt import PCharacter, standard_character, weight_set

EXIT_OK, EXIT_MISMATCH, EXIT_CONFIG, EXIT_UNSUPPORTED, EXIT_GUARD, EXIT_EMPTY = 0, 1, 2, 3, 4, 5


class ConfigError(Exception):
    pass


def _workers() -> int:
    raw = os.environ.get("WITT_EXT_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ConfigError(f"WITT_EXT_THREADS must be an integer, got {raw!r}")


def _character(args, height: int) -> PCharacter:
    return standard_character(args.p, height, args.chi_em1, args.chi_e0)


def _parse_heights(text: str) -> list[int]:
    try:
        return [int(h) for h in text.split(",") if h.strip()]
    except ValueError:
        raise ConfigError(f"bad --heights value {text!r}")


def parse_label(chi: PCharacter, label: str) -> ModuleSpec:
    """'K', 'S', 'L' or 'V<offset>' (offset from the base weight of Lambda(chi))."""
    if label == "K":
        return ModuleSpec(TRIVIAL, chi)
    if label == "S":
        return ModuleSpec(SIMPLE_S, chi)
    if label == "L":
        return ModuleSpec(SYMBOLIC_L, chi)
    if label.startswith("V") and label[1:].lstrip("-").isdigit():
        return verma_spec(chi, weight_set(chi).base_root + int(label[1:]))
    raise ConfigError(f"unknown module label {label!r}")


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# -- commands ---------------------------------------------------------------

def cmd_table(args) -> int:
    chi = _character(args, args.height)
    _emit(ext_table(chi).render(args.format), args.out)
    return EXIT_OK


def cmd_classify(args) -> int:
    chi = _character(args, args.height)
    M, N = parse_label(chi, args.m), parse_label(chi, args.n)
    res = classify_ext_simple(M, N, witnesses=True)
    out = {"M": M.label, "N": N.label, **res.to_json()}
    out["witnesses"] = [w.to_json() for w in res.witnesses]
    _emit(_dump(out), args.out)
    return EXIT_OK


def _full_tasks(chi: PCharacter, size_guard: int | None):
    """(name, closed-form dim, thunk computing the oracle dim) over simple pairs."""
    simples = simple_modules(chi)
    if any(s.kind == SYMBOLIC_L for s in simples):
        return []
    reps = {s.label: build_module(s) for s in simples}
    # fail fast on the guard before any solving
    probe = oracle.CocycleSystem(reps[simples[-1].label], reps[simples[-1].label], "W")
    oracle._guard(probe.n_unknowns, chi.ctx, size_guard)
    tasks = []
    for M in simples:
        for N in simples:
            def run(M=M, N=N):
                return oracle.ext_dim_full(reps[M.label], reps[N.label], "W", size_guard=size_guard).dim
            tasks.append((f"({M.label}, {N.label})", "full", classify_ext_simple(M, N).dim, run))
    return tasks


def _reduced_tasks(chi: PCharacter):
    ws = weight_set(chi)
    tasks = []
    for i in range(chi.p):
        for j in range(chi.p):
            lam, lamp = ws.base_root + i, ws.base_root + j
            def run(lam=lam, lamp=lamp):
                return oracle.ext_dim_reduced(lam, lamp, chi).dim
            tasks.append((f"(V{j}, V{i})", "reduced", classify_w0_ext(lam, lamp, chi, witnesses=False).dim, run))
    return tasks


def cmd_verify(args) -> int:
    heights = _parse_heights(args.heights)
    modes = ["full", "reduced"] if args.oracle == "both" else [args.oracle]
    workers = _workers()
    report = {"p": args.p, "oracle": args.oracle, "heights": {}, "mismatches": []}
    for h in heights:
        chi = _character(args, h)
        if 1 < h < args.p - 1:
            simple_modules(chi)   # raises NotClassified
        tasks = []
        if "full" in modes:
            tasks += _full_tasks(chi, args.size_guard)
        if "reduced" in modes and h <= 1:
            tasks += _reduced_tasks(chi)
        if h == args.p - 1:
            print(f"height {h}: closed form only (no matrix model for L)")
        with ThreadPoolExecutor(max_workers=workers) as pool:
            dims = list(pool.map(lambda t: t[3](), tasks))
        agree = 0
        for (name, mode, closed, _), got in zip(tasks, dims):
            ok = closed == got
            agree += ok
            print(f"{'ok' if ok else 'MISMATCH'} height={h} {mode} {name} closed={closed} oracle={got}")
            if not ok:
                report["mismatches"].append({"height": h, "mode": mode, "pair": name,
                                             "closed_form": closed, "oracle": got})
        report["heights"][str(h)] = {"checked": len(tasks), "agree": agree}
    if args.out:
        _emit(_dump(report), args.out)
    if report["mismatches"]:
        for m in report["mismatches"]:
            print(f"mismatch at height {m['height']} ({m['mode']}): pair {m['pair']} "
                  f"closed form {m['closed_form']} vs oracle {m['oracle']}", file=sys.stderr)
        return EXIT_MISMATCH
    total = sum(v["checked"] for v in report["heights"].values())
    print(f"all {total} comparisons agree")
    return EXIT_OK


def cmd_construct(args) -> int:
    chi = _character(args, args.height)
    if chi.height > 1:
        raise UnsupportedHeight("explicit extensions are built for heights <= 1")
    ws = weight_set(chi)
    lam, lamp = ws.base_root + args.lam, ws.base_root + args.lam_prime
    res = classify_w0_ext(lam, lamp, chi)
    if res.dim == 0:
        print(f"Ext(V{args.lam_prime}, V{args.lam}) = 0: nothing to construct", file=sys.stderr)
        return EXIT_EMPTY
    a = res.witnesses[0]
    out = {"adatum": a.to_json(), "module": extform.build_Ma(a).to_json()}
    M, N = build_module(verma_spec(chi, lamp)), build_module(verma_spec(chi, lam))
    try:
        full = oracle.ext_dim_full(M, N, "W", size_guard=args.size_guard, witnesses=True)
    except DimensionOverflow:
        full = None
    if full is not None and full.witnesses:
        phi = full.witnesses[0]
        out["extension"] = {"cocycle": {str(i): m.to_json() for i, m in phi.items()},
                            "module": oracle.build_extension(M, N, phi).to_json()}
    _emit(_dump(out), args.out)
    return EXIT_OK


def cmd_oracle(args) -> int:
    chi = _character(args, args.height)
    M, N = parse_label(chi, args.m), parse_label(chi, args.n)
    repM, repN = build_module(M), build_module(N)
    if args.algebra == "W0":
        if M.kind != VERMA:
            raise ConfigError("the W0 oracle takes K_lambda' from a Verma label for M")
        repM, repN = build_k_lambda(chi, M.weight), restrict_to_W0(repN)
    report = oracle.solver_report([M.label, N.label], repM, repN, args.algebra, args.graded, args.size_guard)
    _emit(_dump(report), args.out)
    return EXIT_OK


# -- argument parsing --------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wittext", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, height=True):
        sp.add_argument("--p", type=int, required=True, help="prime, at least 5")
        if height:
            sp.add_argument("--height", type=int, required=True)
        sp.add_argument("--chi-em1", type=int, default=None, help="chi(e_-1) residue")
        sp.add_argument("--chi-e0", type=int, default=None, help="chi(e_0) residue")
        sp.add_argument("--size-guard", type=int, default=oracle.DEFAULT_SIZE_GUARD,
                        help="largest dense system (unknowns over F_p) the oracle may solve")
        sp.add_argument("--out", default=None, help="write output here instead of stdout")

    sp = sub.add_parser("table", help="Ext^1 dimensions between all simple modules")
    common(sp)
    sp.add_argument("--format", choices=["json", "csv", "md"], default="json")
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("classify", help="closed-form Ext^1(M, N) for two labels")
    common(sp)
    sp.add_argument("--m", required=True, help="K, S, L or V<offset>")
    sp.add_argument("--n", required=True)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("verify", help="compare the closed form against the oracles")
    common(sp, height=False)
    sp.add_argument("--heights", default="-1,0,1")
    sp.add_argument("--oracle", choices=["full", "reduced", "both"], default="both")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("construct", help="write an explicit non-split extension")
    common(sp)
    sp.add_argument("--lam", type=int, required=True, help="weight offset of the submodule V(lambda)")
    sp.add_argument("--lam-prime", type=int, required=True, help="weight offset of the quotient")
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("oracle", help="solver report for one pair")
    common(sp)
    sp.add_argument("--m", required=True)
    sp.add_argument("--n", required=True)
    sp.add_argument("--algebra", choices=["W", "W0"], default="W")
    sp.add_argument("--graded", action="store_true")
    sp.set_defaults(func=cmd_oracle)
    return parser


def _join_negative_values(argv: list[str]) -> list[str]:
    # argparse reads "-1,0,1" as an option, so glue it to its flag
    out = []
    for tok in argv:
        if out and out[-1] in ("--heights", "--lam", "--lam-prime", "--chi-em1", "--chi-e0") \
                and tok.startswith("-"):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_join_negative_values(argv))
    try:
        return args.func(args)
    except UnsupportedHeight as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except DimensionOverflow as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (ConfigError, WittExtError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
