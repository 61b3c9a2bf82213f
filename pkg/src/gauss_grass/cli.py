"""Command-line front end: ``gauss-grass <command> [options] <file>``.

Exit status is 0 on success, 1 when a computation fails (or a ``verify``
check does not hold) and 2 on usage, schema or parse errors.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import sys
from pathlib import Path
from typing import Callable, Iterable, Sequence

from gauss_grass import __version__
from gauss_grass.algebra.field import FieldSpec
from gauss_grass.algebra.parse import poly_parse, ratfunc_parse
from gauss_grass.algebra.poly import RatFunc, Ring
from gauss_grass.analysis import (
    AnalysisReport,
    Verdict,
    conormal_rank,
    curve_report,
    developability,
    dgamma_rank,
    iterate,
    maximal_developable,
    projection_rank,
    psi_rank,
    substitute,
    verify_identity,
    verify_inclusion_chain,
)
from gauss_grass.charts import ChartFamily, dual_family
from gauss_grass.errors import FieldError, GaussGrassError, ParseError, SchemaError
from gauss_grass.expand import ExpansionResult, conormal_param, expand, gauss_map, shrink
from gauss_grass.famfile import FamilyFile, format_list, load, parse_list

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

Record = tuple[str, object]


class UsageError(Exception):
    pass


# rendering


def _is_grid(value) -> bool:
    return isinstance(value, (list, tuple)) and bool(value) and all(isinstance(r, (list, tuple)) for r in value)


def render_value(value) -> str:
    if value is None:
        return "n/a"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Verdict):
        return value.value
    if isinstance(value, (list, tuple)):
        return format_list([render_value(v) if not isinstance(v, (list, tuple)) else _nested(v) for v in value])
    return str(value)


def _nested(v):
    return [render_value(x) if not isinstance(x, (list, tuple)) else _nested(x) for x in v]


def render(records: Iterable[Record], mode: str) -> str:
    out = []
    for key, value in records:
        if mode == "machine":
            out.append(f"{key}\t{render_value(value)}")
        elif _is_grid(value):
            out.append(f"{key}:")
            out.extend("  " + render_value(row) for row in value)
        else:
            out.append(f"{key}: {render_value(value)}")
    return "\n".join(out) + "\n"


def grid(fam: ChartFamily) -> list[list[str]]:
    return fam.grid_strings()


def family_records(prefix: str, fam: ChartFamily) -> list[Record]:
    cols = [f"Z{fam.coord_perm[k]}" for k in range(fam.m + 1, fam.N + 1)]
    return [
        (f"{prefix}m", fam.m),
        (f"{prefix}coord_perm", list(fam.coord_perm)),
        (f"{prefix}columns", cols),
        (f"{prefix}f", grid(fam)),
    ]


def expansion_records(res: ExpansionResult, key: str) -> list[Record]:
    fam = res.family_in
    return [
        (key, res.m_out),
        ("pivots", list(res.pivots)),
        ("pivot_labels", [f"Z{fam.coord_perm[p]}" for p in res.pivots]),
        ("g", [[str(e) for e in row] for row in res.g]),
        ("perm", list(res.perm)),
    ] + family_records("out.", res.family_out)


def header(cmd: str, path: str, ff: FamilyFile, fam: ChartFamily | None) -> list[Record]:
    recs: list[Record] = [("command", cmd), ("file", Path(path).name)]
    if ff.label:
        recs.append(("label", ff.label))
    if fam is not None:
        recs += [("field", str(fam.field)), ("N", fam.N), ("m", fam.m), ("params", list(fam.params))]
    return recs


# commands


def _family(ff: FamilyFile, field: FieldSpec | None) -> ChartFamily:
    return ff.family(field)


def cmd_analyze(args, ff, field) -> tuple[list[Record], int]:
    fam = _family(ff, field)
    res = expand(fam)
    dg, rdg = dgamma_rank(fam, res)
    ps, rps = psi_rank(fam, res)
    rproj, sep = projection_rank(fam)
    recs = header("analyze", args.file, ff, fam) + [
        ("m_plus", res.m_out),
        ("dgamma", [[str(e) for e in r] for r in dg]),
        ("rank_dgamma", rdg),
        ("psi", [[str(e) for e in r] for r in ps]),
        ("rank_psi", rps),
        ("rank_proj", rproj),
        ("proj_separable_genfinite", sep),
    ]
    if res.m_out < fam.N:
        G, rcon = conormal_rank(fam, res)
        recs += [("conormal_G", [[str(e) for e in r] for r in G]), ("rank_conormal", rcon)]
    else:
        recs += [("rank_conormal", None)]
    return recs, EXIT_OK


def cmd_expand(args, ff, field):
    fam = _family(ff, field)
    return header("expand", args.file, ff, fam) + expansion_records(expand(fam), "m_plus"), EXIT_OK


def cmd_shrink(args, ff, field):
    fam = _family(ff, field)
    return header("shrink", args.file, ff, fam) + expansion_records(shrink(fam), "m_minus"), EXIT_OK


def cmd_conormal(args, ff, field):
    fam = _family(ff, field)
    con = conormal_param(fam)
    return header("conormal", args.file, ff, fam) + [
        ("fiber_params", list(con.fiber_params)),
        ("unit_label", f"Z{con.unit_label}"),
        ("coeffs", [str(c) for c in con.coeffs]),
    ], EXIT_OK


def cmd_gauss(args, ff, field):
    v = ff.variety(field)
    res = gauss_map(v)
    return header("gauss", args.file, ff, res.family_in) + expansion_records(res, "m_plus"), EXIT_OK


def cmd_develop(args, ff, field):
    fam = _family(ff, field)
    items = [(k, v) for k, v in developability(fam).items() if k != "m"]
    return header("develop", args.file, ff, fam) + items, EXIT_OK


def cmd_iterate(args, ff, field):
    fam = _family(ff, field)
    direction, k = ("gamma", args.gamma) if args.gamma is not None else ("sigma", args.sigma)
    steps = iterate(fam, direction, k)
    recs = header("iterate", args.file, ff, fam) + [("direction", direction), ("k", k)]
    for i, st in enumerate(steps, 1):
        recs += family_records(f"step{i}.", st)
    return recs, EXIT_OK


def cmd_curve(args, ff, field):
    fam = _family(ff, field)
    items = [(k, v) for k, v in curve_report(fam).items() if k != "m"]
    return header("curve", args.file, ff, fam) + items, EXIT_OK


def cmd_maxdev(args, ff, field):
    v = ff.variety(field)
    out = maximal_developable(v)
    recs = header("maxdev", args.file, ff, None) + [("field", str(v.field)), ("N", v.N)]
    recs += [("params", list(out.params))] + family_records("out.", out)
    return recs, EXIT_OK


def _poly_ring(N: int, field: FieldSpec) -> Ring:
    return Ring(tuple(f"Z{k}" for k in range(N + 1)), field)


def cmd_subst(args, ff, field):
    v = ff.variety(field)
    try:
        poly = poly_parse(args.poly, _poly_ring(v.N, v.field))
    except ParseError as exc:
        raise UsageError(f"--poly: {exc}") from None
    if not poly.is_homogeneous():
        raise UsageError(f"--poly: {poly} is not homogeneous")
    value = substitute(v, poly)
    recs = header("subst", args.file, ff, None) + [
        ("field", str(v.field)),
        ("N", v.N),
        ("poly", str(poly)),
        ("value", str(value)),
        ("vanishes", value.is_zero()),
    ]
    return recs, EXIT_OK


# verify


Check = tuple[str, str, str]  # (name, status, detail)


def _grid_equal(text: str, actual: Sequence[Sequence[RatFunc]], ring: Ring) -> bool:
    expected = parse_list(text)
    if len(expected) != len(actual):
        return False
    for erow, arow in zip(expected, actual):
        if not isinstance(erow, list) or len(erow) != len(arow):
            return False
        for e, a in zip(erow, arow):
            if ratfunc_parse(e, ring) != a:
                return False
    return True


def _scalar_equal(text: str, actual) -> bool:
    return render_value(actual).lower() == text.strip().lower()


def _expect_checks(ff: FamilyFile, fam: ChartFamily, field) -> list[Check]:
    checks: list[Check] = []
    cache: dict[str, object] = {}

    def get(name: str, fn: Callable[[], object]):
        if name not in cache:
            cache[name] = fn()
        return cache[name]

    for key, text in ff.expect.items():
        if key in AnalysisReport.__dataclass_fields__:
            rep = get("develop", lambda: developability(fam))
            ok = _scalar_equal(text, getattr(rep, key))
            detail = render_value(getattr(rep, key))
        elif key.startswith("curve."):
            rep = get("curve", lambda: curve_report(fam))
            attr = key[len("curve."):]
            if attr not in rep.__dataclass_fields__:
                raise SchemaError("unknown expectation", ff.lines.get("expect." + key), "expect." + key)
            ok = _scalar_equal(text, getattr(rep, attr))
            detail = render_value(getattr(rep, attr))
        elif key in ("expand.f", "shrink.f", "gauss.f"):
            op = key.split(".")[0]
            if op == "gauss":
                res = get(op, lambda: gauss_map(ff.variety(field)))
            else:
                res = get(op, lambda: (expand if op == "expand" else shrink)(fam))
            out = res.family_out
            ok = _grid_equal(text, out.f, out.ring)
            detail = render_value(grid(out))
        elif key == "expand.g":
            res = get("expand", lambda: expand(fam))
            ok = _grid_equal(text, res.g, fam.ring)
            detail = render_value([[str(e) for e in r] for r in res.g])
        elif key == "dual.f":
            d = dual_family(fam)
            ok = _grid_equal(text, d.f, d.ring)
            detail = render_value(grid(d))
        elif key.startswith("iterate."):
            parts = key.split(".")
            if len(parts) != 3 or parts[1] not in ("gamma", "sigma") or not parts[2].isdigit():
                raise SchemaError("expected expect.iterate.<gamma|sigma>.<k>", ff.lines.get("expect." + key), key)
            last = iterate(fam, parts[1], int(parts[2]))[-1]
            ok = _grid_equal(text, last.f, last.ring)
            detail = render_value(grid(last))
        elif key == "vanishes":
            v = ff.variety(field)
            value = substitute(v, poly_parse(text, _poly_ring(v.N, v.field)))
            ok = value.is_zero()
            detail = str(value)
        else:
            raise SchemaError("unknown expectation", ff.lines.get("expect." + key), "expect." + key)
        checks.append((f"expect.{key}", "pass" if ok else "fail", detail))
    return checks


def _rank_checks(fam: ChartFamily) -> list[Check]:
    res = expand(fam)
    n, m, mp, N = fam.n, fam.m, res.m_out, fam.N
    rdg = dgamma_rank(fam, res)[1]
    rps = psi_rank(fam, res)[1]
    rproj, _ = projection_rank(fam)
    out = [
        ("ranks.dgamma_bound", rdg <= n, f"{rdg} <= {n}"),
        ("ranks.psi_bound", rps <= mp - m, f"{rps} <= {mp - m}"),
        ("ranks.proj_bound", rproj <= min(n + m, mp), f"{rproj} <= min({n + m}, {mp})"),
        ("ranks.proj_moves", n == 0 or rproj > m, f"{rproj} > {m}"),
    ]
    if mp < N:
        rcon = conormal_rank(fam, res)[1]
        excess = rcon - (N - mp - 1)
        out.append(("ranks.conormal_bound", excess <= min(rdg, rps), f"{excess} <= min({rdg}, {rps})"))
        out.append(("ranks.conormal_transfer", rdg == 0 or excess > 0, f"rank_dgamma {rdg}, excess {excess}"))
    else:
        out.append(("ranks.conormal_bound", None, "expanded planes fill P^N"))
    return [(name, "skip" if ok is None else ("pass" if ok else "fail"), d) for name, ok, d in out]


def run_checks(args, ff: FamilyFile, field) -> list[Check]:
    fam = _family(ff, field)
    flags = [f for f in ("identity", "inclusion", "ranks", "curve", "diagram", "dual_involution") if getattr(args, f)]
    checks: list[Check] = []
    if not flags and not ff.expect:
        flags = ["identity", "inclusion"]
    for flag in flags:
        if flag == "identity":
            v = verify_identity(fam)
            status = {Verdict.HOLDS: "pass", Verdict.FAILS: "fail", Verdict.NOT_APPLICABLE: "skip"}[v]
            checks.append(("identity", status, v.value))
        elif flag == "inclusion":
            ok = verify_inclusion_chain(fam)
            checks.append(("inclusion", "pass" if ok else "fail", "x in sigma(gamma(x)) in gamma(x)"))
        elif flag == "ranks":
            checks += _rank_checks(fam)
        elif flag == "curve":
            if fam.n != 1:
                checks.append(("curve", "skip", "not a one-parameter family"))
            else:
                rep = curve_report(fam)
                checks.append(("curve.two_m_identity", "pass" if rep.two_m_identity else "fail",
                               f"{rep.m_plus} + {rep.m_minus} = {2 * rep.m}"))
                checks.append(("curve.conditions_agree", "pass" if rep.conditions_agree else "fail",
                               f"{rep.developable}, {rep.plus_is_next}, {rep.minus_is_previous}"))
                checks.append(("curve.rank_proj", "pass" if rep.rank_proj == fam.m + 1 else "fail",
                               f"{rep.rank_proj} = {fam.m + 1}"))
        elif flag == "diagram":
            rep = developability(fam)
            if not rep.developable:
                checks.append(("diagram", "skip", "family is not developable"))
            else:
                checks.append(("diagram", "pass" if rep.diagram_commutes else "fail", "developable"))
        elif flag == "dual_involution":
            ok = dual_family(dual_family(fam)) == fam
            checks.append(("dual_involution", "pass" if ok else "fail", "dual(dual(f)) = f"))
    checks += _expect_checks(ff, fam, field)
    return checks


def _check_records(prefix: str, checks: list[Check]) -> list[Record]:
    return [(f"{prefix}{name}", f"{status} ({detail})" if detail else status) for name, status, detail in checks]


def cmd_verify(args, ff, field):
    checks = run_checks(args, ff, field)
    failed = sum(1 for c in checks if c[1] == "fail")
    skipped = sum(1 for c in checks if c[1] == "skip")
    recs = header("verify", args.file, ff, None) + _check_records("check.", checks)
    recs += [("passed", len(checks) - failed - skipped), ("failed", failed), ("skipped", skipped)]
    return recs, EXIT_OK if failed == 0 else EXIT_FAIL


def run_suite(args, field) -> tuple[list[Record], int]:
    root = Path(args.suite)
    if not root.is_dir():
        raise UsageError(f"--suite: not a directory: {root}")
    files = sorted(root.glob("*.fam"))
    recs: list[Record] = [("command", "verify"), ("suite", root.name), ("files", len(files))]
    total_fail = 0
    for path in files:
        ff = load(path)
        try:
            checks = run_checks(args, ff, field)
        except GaussGrassError as exc:
            if isinstance(exc, (SchemaError, ParseError, FieldError)):
                raise
            checks = [("error", "fail", str(exc))]
        total_fail += sum(1 for c in checks if c[1] == "fail")
        recs += _check_records(f"{path.stem}.", checks)
    recs.append(("failed", total_fail))
    return recs, EXIT_OK if total_fail == 0 else EXIT_FAIL


COMMANDS: dict[str, Callable] = {
    "analyze": cmd_analyze,
    "expand": cmd_expand,
    "shrink": cmd_shrink,
    "conormal": cmd_conormal,
    "gauss": cmd_gauss,
    "develop": cmd_develop,
    "iterate": cmd_iterate,
    "curve": cmd_curve,
    "maxdev": cmd_maxdev,
    "subst": cmd_subst,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", help="override the file's field: QQ or GF:p")
    common.add_argument("--out", choices=("text", "machine"), default="text", help="report format")
    common.add_argument("--meta", action="store_true", help="append version and timestamp records")

    parser = argparse.ArgumentParser(prog="gauss-grass", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name == "iterate":
            g = p.add_mutually_exclusive_group(required=True)
            g.add_argument("--gamma", type=int, metavar="K", help="apply the expanding map K times")
            g.add_argument("--sigma", type=int, metavar="K", help="apply the shrinking map K times")
        if name == "subst":
            p.add_argument("--poly", required=True, help="homogeneous polynomial in Z0..ZN")
        if name == "verify":
            for flag in ("identity", "inclusion", "ranks", "curve", "diagram", "dual-involution"):
                p.add_argument(f"--{flag}", action="store_true")
            p.add_argument("--suite", metavar="DIR", help="verify every .fam file in DIR")
            p.add_argument("file", nargs="?")
        else:
            p.add_argument("file")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cmd = args.command
    target = getattr(args, "suite", None) or args.file
    try:
        if cmd == "iterate" and (args.gamma or args.sigma or 0) < 1:
            raise UsageError("iteration count must be at least 1")
        field = FieldSpec.parse(args.field.replace(":", " ")) if args.field else None
        if cmd == "verify" and args.suite:
            records, code = run_suite(args, field)
        else:
            if not args.file:
                raise UsageError("a family file is required")
            ff = load(args.file)
            records, code = COMMANDS[cmd](args, ff, field)
    except (UsageError, SchemaError, ParseError, FieldError, OSError) as exc:
        print(f"gauss-grass {cmd}: {target}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GaussGrassError as exc:
        print(f"gauss-grass {cmd}: {target}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if args.meta:
        stamp = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
        records = list(records) + [("meta.version", __version__), ("meta.generated_at", stamp)]
    sys.stdout.write(render(records, args.out))
    return code


if __name__ == "__main__":
    sys.exit(main())
