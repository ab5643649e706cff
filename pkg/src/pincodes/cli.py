"""Command-line front end: build relations, analyze codes, check gates,
search punctures, and convert matrix formats.

Exit codes: 0 success, 2 parse problems, 3 constraint violations,
4 failed mathematical preconditions.  Reports embed the tool version, a hash
of the primary input, and every seed used, so a rerun with the same inputs
is byte-identical.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys

from . import __version__
from .builders import (
    capped_ladder_complex,
    complete_relation,
    from_chain_complex,
    load_chain_complex,
    reed_muller_relation,
    torus_tiling,
    triangular_color_relation,
)
from .coxeter import EnumerationBudgetError, coxeter_relation, load_presentation
from .csscode import build_pin_code, code_stats, gauge_code, logical_basis
from .distance import DistanceBudget, ExactDistanceInfeasible, distance
from .distill import puncture_search, triortho_split
from .f2la import BitMatrix, read_alist, read_dense, write_alist, write_dense
from .relation import PinCodeRelation, load_relation, save_relation
from .shrunk import homology_basis, shrunk_complex
from .transversal import (
    correction_polynomial,
    extract_logical_polynomial,
    transversality_report,
)

PARSE_ERROR = 2
CONSTRAINT_ERROR = 3
PRECONDITION_ERROR = 4


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _hash_file(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        h.update(fh.read())
    return h.hexdigest()[:16]


def _report_header(input_path: str, seeds: dict | None = None) -> list[str]:
    lines = [
        f"tool pincodes {__version__}",
        f"input {os.path.basename(input_path)} sha256:{_hash_file(input_path)}",
    ]
    for name, value in (seeds or {}).items():
        lines.append(f"seed {name} {value}")
    return lines


def _emit(lines: list[str], out: str | None) -> None:
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    if out:
        with open(out, "w") as fh:
            fh.write(text)


def _build_relation_from_spec(spec: dict, base_dir: str) -> PinCodeRelation:
    try:
        builder = spec["builder"]
        if builder == "complete":
            return complete_relation(spec["sizes"])
        if builder == "reed_muller":
            return reed_muller_relation(int(spec["m"]))
        if builder == "ladder":
            cc = capped_ladder_complex(
                int(spec["levels"]), int(spec.get("bottom", 2)), int(spec.get("top", 2))
            )
            return from_chain_complex(cc)
        if builder == "chain_complex":
            cc = load_chain_complex(os.path.join(base_dir, spec["path"]))
            return from_chain_complex(cc)
        if builder == "group":
            pres = load_presentation(os.path.join(base_dir, spec["path"]))
            return coxeter_relation(pres, split=bool(spec.get("split", False)))
        if builder == "torus":
            cc = torus_tiling(spec["kind"], int(spec["l1"]), int(spec["l2"]))
            return from_chain_complex(cc)
        if builder == "triangular_color":
            return triangular_color_relation(int(spec["l1"]), int(spec["l2"]))
    except KeyError as exc:
        raise CliError(f"spec is missing field {exc}", PARSE_ERROR)
    except (ValueError, EnumerationBudgetError) as exc:
        raise CliError(str(exc), CONSTRAINT_ERROR)
    raise CliError(f"unknown builder {spec.get('builder')!r}", PARSE_ERROR)


def cmd_build(args) -> int:
    try:
        with open(args.spec) as fh:
            spec = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot parse spec file: {exc}", PARSE_ERROR)
    rel = _build_relation_from_spec(spec, os.path.dirname(os.path.abspath(args.spec)))
    report = rel.validate()
    save_relation(rel, args.out)
    lines = _report_header(args.spec)
    lines.append(f"relation levels {'x'.join(str(s) for s in rel.level_sizes())}")
    lines.append(f"flags {rel.num_flags}")
    lines.append(f"dropped-all-free {rel.dropped_all_free}")
    lines.append(f"validation {'pass' if report.passed else 'FAIL'}")
    for c in report.odd_collections[:10]:
        lines.append("odd-collection " + " ".join(p.label() for p in c))
    _emit(lines, args.report)
    if not report.passed:
        raise CliError("relation fails validation", CONSTRAINT_ERROR)
    return 0


def _load_relation(path: str) -> PinCodeRelation:
    try:
        return load_relation(path)
    except (OSError, ValueError, KeyError) as exc:
        raise CliError(f"cannot load relation: {exc}", PARSE_ERROR)


def cmd_analyze(args) -> int:
    rel = _load_relation(args.relation)
    lines = _report_header(args.relation, {"distance": args.seed})
    if args.x == 0 or args.z == 0:
        lines.append(
            "warning: a zero pin count gives a single stabilizer on every qubit; "
            "analysis proceeds but the code is trivial on that side"
        )
        x = max(args.x, 1)
        z = max(args.z, 1)
    else:
        x, z = args.x, args.z
    try:
        code = build_pin_code(rel, x, z)
    except ValueError as exc:
        raise CliError(str(exc), CONSTRAINT_ERROR)
    stats = code_stats(code)
    lines.extend(stats.lines())
    if code.k > 0 and args.distance_mode != "none":
        basis = logical_basis(code)
        budget = DistanceBudget(bound_iterations=args.budget)
        try:
            res = distance(code, basis, mode=args.distance_mode, budget=budget, seed=args.seed)
            tag = "d" if res.exact else "d<="
            lines.append(f"distance {tag}{res.value} side {res.side}")
        except ExactDistanceInfeasible as exc:
            lines.append(f"distance refused: {exc}")
    _emit(lines, args.report)
    return 0


def cmd_transversality(args) -> int:
    rel = _load_relation(args.relation)
    lines = _report_header(args.relation)
    try:
        if args.ccz:
            from .distill import ccz_code

            built = ccz_code(rel, args.x)
            code, basis = built.code, built.basis
        else:
            code = build_pin_code(rel, args.x, args.z)
            basis = logical_basis(code)
    except ValueError as exc:
        raise CliError(str(exc), CONSTRAINT_ERROR)
    rep = transversality_report(code, basis, args.level)
    lines.append(f"level {args.level}")
    lines.append(f"exact {'pass' if rep.exact.passed else 'fail'}")
    for w in rep.exact.witnesses[:10]:
        lines.append(f"exact-witness {w}")
    lines.append(f"quasi {'pass' if rep.quasi.passed else 'fail'}")
    for w in rep.quasi.witnesses[:10]:
        lines.append(f"quasi-witness {w}")
    poly = extract_logical_polynomial(basis.lx, args.level)
    lines.append(f"logical-gate {poly}")
    if rep.quasi.passed:
        corr = correction_polynomial(basis.lx, code.sx, args.level)
        lines.append(f"correction {corr}")
    _emit(lines, args.report)
    return 0


def cmd_gauge(args) -> int:
    rel = _load_relation(args.relation)
    lines = _report_header(args.relation)
    try:
        g = gauge_code(rel, args.x, args.z)
    except ValueError as exc:
        raise CliError(str(exc), CONSTRAINT_ERROR)
    lines.append(f"gauge-x-generators {g.gx.nrows} weights {sorted(set(g.gx.row_weights().tolist()))}")
    lines.append(f"gauge-z-generators {g.gz.nrows} weights {sorted(set(g.gz.row_weights().tolist()))}")
    lines.append(f"k {g.k}")
    lines.append(f"stabilizer-code-k {g.stabilizer_k}")
    lines.append(f"gauge-pairs {g.gauge_pairs}")
    if g.k != g.stabilizer_k:
        lines.append("note: gauge k differs from the stabilizer pin code k")
    _emit(lines, args.report)
    return 0


def cmd_shrunk(args) -> int:
    rel = _load_relation(args.relation)
    try:
        t = frozenset(int(tok) for tok in args.type.split(","))
        sc = shrunk_complex(rel, args.x, args.z, t)
    except ValueError as exc:
        raise CliError(str(exc), CONSTRAINT_ERROR)
    lines = _report_header(args.relation)
    lines.append(f"type {sorted(t)}")
    lines.append(f"dims {sc.dims[0]} {sc.dims[1]} {sc.dims[2]}")
    reps = homology_basis(sc)
    lines.append(f"homology-representatives {len(reps)}")
    if args.out_prefix:
        from .builders import save_chain_complex

        save_chain_complex(sc.base, args.out_prefix + ".complex")
        with open(args.out_prefix + ".provenance", "w") as fh:
            for name, sets in (("level0", sc.level0), ("level1", sc.level1), ("level2", sc.level2)):
                for s in sets:
                    fh.write(f"{name} " + " ".join(p.label() for p in s.collection) + "\n")
        lines.append(f"written {args.out_prefix}.complex")
    _emit(lines, args.report)
    return 0


def _load_matrix(path: str) -> BitMatrix:
    try:
        if path.endswith(".alist"):
            return read_alist(path)
        return read_dense(path)
    except (OSError, ValueError) as exc:
        raise CliError(f"cannot load matrix: {exc}", PARSE_ERROR)


def cmd_puncture(args) -> int:
    g = _load_matrix(args.matrix)
    lines = _report_header(args.matrix, {"search": args.seed})
    try:
        results = puncture_search(
            g, target_k=args.target_k, target_d=args.target_d,
            budget=args.budget, seed=args.seed,
        )
    except ValueError as exc:
        raise CliError(str(exc), PRECONDITION_ERROR)
    lines.append(f"candidates {len(results)}")
    for i, r in enumerate(results):
        lines.append(f"candidate {i}: {r.row()}")
    _emit(lines, args.report)
    if args.out_prefix:
        for i, r in enumerate(results):
            write_dense(r.code.sx, f"{args.out_prefix}.{i}.sx")
            write_dense(r.code.sz, f"{args.out_prefix}.{i}.sz")
            write_dense(r.basis.lx, f"{args.out_prefix}.{i}.lx")
            write_dense(r.basis.lz, f"{args.out_prefix}.{i}.lz")
    return 0


def cmd_export(args) -> int:
    rel = _load_relation(args.relation)
    try:
        code = build_pin_code(rel, args.x, args.z)
    except ValueError as exc:
        raise CliError(str(exc), CONSTRAINT_ERROR)
    basis = logical_basis(code)
    writer = write_alist if args.format == "alist" else write_dense
    ext = "alist" if args.format == "alist" else "txt"
    for name, m in (("sx", code.sx), ("sz", code.sz), ("lx", basis.lx), ("lz", basis.lz)):
        writer(m, f"{args.out_prefix}.{name}.{ext}")
    sys.stdout.write(f"written {args.out_prefix}.{{sx,sz,lx,lz}}.{ext}\n")
    return 0


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pincodes", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="build a relation from a JSON job spec")
    b.add_argument("spec")
    b.add_argument("--out", required=True)
    b.add_argument("--report")
    b.set_defaults(func=cmd_build)

    a = sub.add_parser("analyze", help="code parameters and distance")
    a.add_argument("--relation", required=True)
    a.add_argument("-x", type=int, required=True)
    a.add_argument("-z", type=int, required=True)
    a.add_argument("--distance-mode", choices=["exact", "bound", "none"], default="exact")
    a.add_argument("--budget", type=int, default=300)
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--report")
    a.set_defaults(func=cmd_analyze)

    t = sub.add_parser("transversality", help="phase-gate conditions and logical gate")
    t.add_argument("--relation", required=True)
    t.add_argument("-x", type=int, required=True)
    t.add_argument("-z", type=int, default=1)
    t.add_argument("--level", type=int, default=3)
    t.add_argument("--ccz", action="store_true", help="impose x-pinned sets as logicals")
    t.add_argument("--report")
    t.set_defaults(func=cmd_transversality)

    gp = sub.add_parser("gauge", help="gauge code generators and parameters")
    gp.add_argument("--relation", required=True)
    gp.add_argument("-x", type=int, required=True)
    gp.add_argument("-z", type=int, required=True)
    gp.add_argument("--report")
    gp.set_defaults(func=cmd_gauge)

    s = sub.add_parser("shrunk", help="shrunk complex for one stabilizer type")
    s.add_argument("--relation", required=True)
    s.add_argument("-x", type=int, required=True)
    s.add_argument("-z", type=int, required=True)
    s.add_argument("--type", required=True, help="comma-separated ranks, e.g. 0,2")
    s.add_argument("--out-prefix")
    s.add_argument("--report")
    s.set_defaults(func=cmd_shrunk)

    pu = sub.add_parser("puncture", help="search punctured triorthogonal codes")
    pu.add_argument("--matrix", required=True)
    pu.add_argument("--target-k", type=int, required=True)
    pu.add_argument("--target-d", type=int, default=4)
    pu.add_argument("--budget", type=int, default=10000)
    pu.add_argument("--seed", type=int, default=0)
    pu.add_argument("--out-prefix")
    pu.add_argument("--report")
    pu.set_defaults(func=cmd_puncture)

    e = sub.add_parser("export", help="export code matrices in dense or alist form")
    e.add_argument("--relation", required=True)
    e.add_argument("-x", type=int, required=True)
    e.add_argument("-z", type=int, required=True)
    e.add_argument("--format", choices=["dense", "alist"], default="dense")
    e.add_argument("--out-prefix", required=True)
    e.set_defaults(func=cmd_export)
    return p


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
