"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error.  Output is
deterministic for a fixed configuration: repeated runs and different
worker counts produce identical bytes.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from spreadsmith.checks import run_selftest
from spreadsmith.equivalence import classify, stabilizer_group
from spreadsmith.field_tower import (
    FieldSpec,
    build_lambda,
    build_partition,
    prime_power,
)
from spreadsmith.goodsets import (
    canonical,
    census,
    enumerate_good_sets,
    enumerate_good_sets_parallel,
    flip_canonical,
    is_good,
)
from spreadsmith.parallelisms import (
    build_parallelism,
    characterize,
    verify_parallelism,
)
from spreadsmith.serialization import (
    dumps,
    field_spec_to_obj,
    goodset_record,
    lambda_from_obj,
    lambda_to_obj,
    orbit_report_to_obj,
    parse_goodset_record,
    read_parallelism_file,
    write_parallelism_file,
)
from spreadsmith.spreads import Geometry

USAGE_ERROR = 2
VERIFY_ERROR = 1


class UsageError(Exception):
    pass


def _field_from_args(args) -> FieldSpec:
    if args.q is not None:
        if args.p is not None or args.m is not None:
            raise UsageError("give either --q or --p/--m, not both")
        try:
            p, m = prime_power(args.q)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    elif args.p is not None:
        p, m = args.p, args.m if args.m is not None else 1
    else:
        raise UsageError("a field order is required (--q or --p/--m)")
    q = p**m
    if not 3 <= q <= 16:
        raise UsageError(f"q = {q} out of the supported range 3..16")
    mod_q = tuple(int(c) for c in args.modulus_q.split(",")) if args.modulus_q else None
    try:
        spec = FieldSpec(p, m, modulus_q=mod_q)
        if args.modulus_q2:
            parts = [int(c) for c in args.modulus_q2.split(",")]
            spec = FieldSpec(p, m, modulus_q=mod_q, modulus_q2=tuple(parts))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return spec


def _geometry_from_args(args) -> Geometry:
    spec = _field_from_args(args)
    if getattr(args, "lambda_file", None):
        with open(args.lambda_file) as fh:
            lam = lambda_from_obj(spec, json.load(fh))
    else:
        lam = build_lambda(spec, build_partition(spec))
    return Geometry(lam)


def _emit(args, text: str):
    if getattr(args, "output", None):
        Path(args.output).write_text(text + ("\n" if not text.endswith("\n") else ""))
    else:
        print(text)


# ---------------------------------------------------------------------------
# subcommands


def cmd_field_info(args) -> int:
    geo = _geometry_from_args(args)
    spec, lam = geo.spec, geo.lam
    obj = {
        "field": field_spec_to_obj(spec),
        "q": spec.q,
        "unit_circle": [list(spec.elem_vec(u)) for u in spec.unit_circle()],
        "lambda": lambda_to_obj(lam),
        "norms": [list(spec.gfq_vec(lam.norm_of(k))) for k in range(spec.q - 1)],
        "partition": {
            "t": lam.partition.t,
            "units": [list(spec.gfq_vec(c)) for c in lam.partition.units_part],
            "A": [list(spec.gfq_vec(c)) for c in lam.partition.A],
            "A_inv": [list(spec.gfq_vec(c)) for c in lam.partition.A_inv],
        },
        "sizes": {"U": spec.q + 1, "I": len(lam.I),
                  "I1": len(lam.I1), "I2": len(lam.I2)},
    }
    if args.format == "json":
        _emit(args, dumps(obj))
    else:
        lines = [
            f"GF({spec.q}^2) over GF({spec.q}), q = {spec.p}^{spec.m}",
            f"modulus over GF({spec.p}): {list(spec.modulus_q)}",
            f"modulus over GF({spec.q}): {[list(spec.gfq_vec(c)) for c in spec.modulus_q2]}",
            f"generator: {list(spec.elem_vec(spec.generator))}",
            f"|U| = {spec.q + 1}",
            f"Lambda indices I = {list(lam.I)}  (|I| = {len(lam.I)})",
            f"I1 = {list(lam.I1)}, I2 = {list(lam.I2)}",
            f"partition: t = {lam.partition.t}, units = {list(lam.partition.units_part)}, "
            f"A = {list(lam.partition.A)}, A^-1 = {list(lam.partition.A_inv)}",
        ]
        _emit(args, "\n".join(lines))
    return 0


def cmd_goodsets(args) -> int:
    geo = _geometry_from_args(args)
    lam = geo.lam
    exclude = args.filter == "no-norm-minus-one"
    if args.subcmd == "count":
        cen = census(lam, exclude_norm_minus_one=exclude)
        obj = {
            "q": cen.q,
            "filter": "no-norm-minus-one" if exclude else "all",
            "count": cen.oracle,
            "formulas": {k: (str(v) if not isinstance(v, int) else v)
                         for k, v in cen.formulas.items()},
            "formula_matches_count": cen.oracle_matches,
            "even_q_formula_conflict": cen.formula_conflict,
        }
        if args.format == "json":
            _emit(args, dumps(obj))
        else:
            out = [f"good sets (q={cen.q}, filter={obj['filter']}): {cen.oracle}"]
            for k, v in sorted(cen.formulas.items()):
                mark = "matches" if cen.oracle_matches.get(k) else "DIFFERS"
                out.append(f"  closed form {k} = {v}  [{mark}]")
            if cen.formula_conflict:
                out.append("  note: the two printed even-q closed forms conflict "
                           "with each other")
            _emit(args, "\n".join(out))
        return 0
    if args.subcmd == "enumerate":
        if args.jobs > 1:
            sets = enumerate_good_sets_parallel(
                geo.q, exclude_norm_minus_one=exclude, jobs=args.jobs,
                limit=args.limit)
        else:
            sets = enumerate_good_sets(lam, exclude_norm_minus_one=exclude,
                                       limit=args.limit)
        rows = [goodset_record(lam, gs) for gs in sets]
        _emit(args, "\n".join(rows) if rows else "")
        return 0
    # verify FILE
    bad = 0
    with open(args.file) as fh:
        for lineno, row in enumerate(fh, 1):
            if not row.strip():
                continue
            try:
                gs = parse_goodset_record(lam, row)
                verdict = is_good(lam, gs)
            except (ValueError, KeyError) as exc:
                print(f"line {lineno}: malformed record: {exc}")
                bad += 1
                continue
            if not verdict.ok:
                print(f"line {lineno}: not a good set; pair {verdict.witness} "
                      f"fails the {verdict.condition} condition")
                bad += 1
    print(f"verified: {'all records good' if not bad else f'{bad} bad record(s)'}")
    return VERIFY_ERROR if bad else 0


def cmd_parallelism(args) -> int:
    if args.subcmd == "build":
        geo = _geometry_from_args(args)
        with open(args.file) as fh:
            first = next(line for line in fh if line.strip())
        gs = parse_goodset_record(geo.lam, first)
        verdict = is_good(geo.lam, gs)
        if not verdict.ok:
            print(f"not a good set: pair {verdict.witness} fails the "
                  f"{verdict.condition} condition")
            return VERIFY_ERROR
        par = build_parallelism(geo, gs)
        cert = verify_parallelism(geo, par)
        out = args.output or f"parallelism_q{geo.q}.jsonl"
        write_parallelism_file(out, geo, par, cert)
        print(f"wrote {out}: {len(par.spreads)} spreads, "
              f"{cert.line_count} lines, certificate "
              f"{'pass' if cert.ok else 'FAIL'}, checksum {cert.checksum[:16]}..")
        return 0 if cert.ok else VERIFY_ERROR
    header, geo, spreads, stored = read_parallelism_file(args.file)
    if args.subcmd == "verify":
        cert = verify_parallelism(geo, spreads)
        ok = cert.ok
        msgs = [f"spreads: {len(spreads)}", f"lines covered: {cert.line_count}",
                f"checksum: {cert.checksum[:16]}.."]
        if stored and stored.get("checksum") not in (None, cert.checksum):
            ok = False
            msgs.append("checksum mismatch against the stored certificate")
        if not cert.ok:
            msgs.append(f"failure: {cert.reason()}")
            if cert.uncovered:
                msgs.append(f"first uncovered line: {cert.uncovered[0]}")
            if cert.multiply_covered:
                msgs.append(f"first multiply covered line: {cert.multiply_covered[0]}")
        print("\n".join(msgs))
        print("verdict:", "pass" if ok else "FAIL")
        return 0 if ok else VERIFY_ERROR
    # characterize
    res = characterize(geo, spreads)
    if not res.ok:
        print(f"characterization failed: {res.reason}")
        return VERIFY_ERROR
    print(goodset_record(geo.lam, res.good_set))
    return 0


def cmd_classify(args) -> int:
    geo = _geometry_from_args(args)
    if geo.q > 5:
        raise UsageError("full classification is supported for q <= 5")
    lam = geo.lam
    family = list(enumerate_good_sets(lam, limit=args.limit))
    seen = set()
    distinct = []
    for gs in family:
        key = flip_canonical(lam, gs)
        if key not in seen:
            seen.add(key)
            distinct.append(key)
    report = classify(geo, distinct)
    refs = None
    if args.output:
        outdir = Path(args.output)
        outdir.mkdir(parents=True, exist_ok=True)
        refs = []
        for i, orbit in enumerate(report.orbits):
            par = build_parallelism(geo, orbit.representative)
            cert = verify_parallelism(geo, par)
            ref = f"orbit_{i}.jsonl"
            write_parallelism_file(outdir / ref, geo, par, cert)
            refs.append(ref)
    obj = orbit_report_to_obj(report, lam, refs)
    grp = stabilizer_group(geo)
    obj["group_order_formula"] = grp.formula_order
    text = dumps(obj)
    if args.output:
        (Path(args.output) / "report.json").write_text(text + "\n")
        print(f"wrote {args.output}/report.json with {report.orbit_count} orbits")
    else:
        print(text)
    return 0


def cmd_selftest(args) -> int:
    geo = _geometry_from_args(args)
    results = run_selftest(geo, jobs=args.jobs, sample_seed=args.sample_seed)
    width = max(len(r.name) for r in results)
    for r in results:
        status = "pass" if r.ok else "FAIL"
        print(f"{r.name:<{width}}  q={r.q}  [{status}]  {r.detail}")
    failed = sum(1 for r in results if not r.ok)
    print(f"{len(results) - failed}/{len(results)} suites passed")
    return VERIFY_ERROR if failed else 0


# ---------------------------------------------------------------------------
# argument wiring


def _add_field_args(p: argparse.ArgumentParser):
    p.add_argument("--q", type=int, help="field order q = p^m (3..16)")
    p.add_argument("--p", type=int, help="characteristic (with --m)")
    p.add_argument("--m", type=int, help="extension degree (with --p)")
    p.add_argument("--modulus-q", help="comma-separated GF(p) coefficients, constant first")
    p.add_argument("--modulus-q2", help="comma-separated GF(q) codes c0,c1,1")
    p.add_argument("--lambda", dest="lambda_file",
                   help="JSON file overriding the norm-representative list")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="spreadsmith",
        description="Construct, enumerate, verify and classify line-parallelisms "
                    "of PG(3,q) built from a Desarguesian spread and Hall spreads.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("field-info", help="print the field tower and label classes")
    _add_field_args(p)
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--output")
    p.set_defaults(fn=cmd_field_info)

    p = sub.add_parser("goodsets", help="count, enumerate or verify good sets")
    p.add_argument("subcmd", choices=("count", "enumerate", "verify"))
    p.add_argument("file", nargs="?", help="record file for 'verify'")
    _add_field_args(p)
    p.add_argument("--filter", choices=("all", "no-norm-minus-one"), default="all")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--limit", type=int)
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--output")
    p.set_defaults(fn=cmd_goodsets)

    p = sub.add_parser("parallelism", help="build, verify or characterize a parallelism")
    p.add_argument("subcmd", choices=("build", "verify", "characterize"))
    p.add_argument("file", help="good-set record (build) or parallelism file")
    _add_field_args(p)
    p.add_argument("--output")
    p.set_defaults(fn=cmd_parallelism)

    p = sub.add_parser("classify", help="orbit classification of all parallelisms")
    _add_field_args(p)
    p.add_argument("--limit", type=int)
    p.add_argument("--output", help="directory for report and representatives")
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("selftest", help="run every verification suite for this q")
    _add_field_args(p)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--sample-seed", type=int,
                   help="seed for the sampling suites (defaults are fixed)")
    p.set_defaults(fn=cmd_selftest)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if getattr(args, "subcmd", None) == "verify" and args.command == "goodsets" \
            and not args.file:
        ap.error("goodsets verify needs a record file")
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
