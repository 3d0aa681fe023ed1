"""Command-line surface: compute tables, run verifications, show data.

Exit status contract: 0 = all checks pass, 1 = an invariant failed,
2 = usage or structural error.  Symbolic output is the default;
numeric specialization is opt-in via --eval q0=2,q1=3.  Table jobs are
cached content-addressed (hash of the canonical job description) under
--cache-dir / $HECKE_CACHE_DIR, with atomic writes.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import product as iproduct

from . import __version__
from .affweyl import affine_weyl, parameter_classes
from .building import MarginError, ThinBuilding, TreeBuilding, parse_building
from .coeff import LaurentFraction, StructureError, lp_eval
from .hecke import hecke_algebra
from .rootdata import parse_descriptor
from .spherical import build_table, dominant_grid, spherical_context


@dataclass
class JobSpec:
    """A fully serializable table job; its hash keys the cache."""

    command: str
    system: str
    grid: int = 1
    radius: int = 8
    eval_at: dict = field(default_factory=dict)
    fmt: str = "json"
    cache_dir: str = ""
    jobs: int = 1

    def cache_key(self) -> str:
        # output options (format, cache dir, jobs) do not key the cache;
        # numeric evaluation does not either (applied on top of the table)
        payload = {
            "command": self.command,
            "system": self.system,
            "grid": self.grid,
            "radius": self.radius,
            "version": __version__,
        }
        blob = json.dumps(payload, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()


def _parse_eval(text: str) -> dict:
    out = {}
    for part in text.split(","):
        k, _, v = part.partition("=")
        if not k or not v:
            raise StructureError(f"bad --eval entry {part!r}")
        out[k.strip()] = Fraction(v.strip())
    return out


def _cache_dir(spec: JobSpec) -> str:
    return (
        spec.cache_dir
        or os.environ.get("HECKE_CACHE_DIR")
        or os.path.join(os.path.expanduser("~"), ".cache", "affhecke")
    )


def _atomic_write(path: str, data: str):
    os.makedirs(os.path.dirname(path), exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path))
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _table_cell(args):
    """Worker: structure constants for one (lambda, mu) cell."""
    system, lam, mu = args
    ctx = spherical_context(parse_descriptor(system))
    csym = ctx.c_via_symmetric(lam, mu)
    rows = []
    for nu in ctx.dominated_dominants(tuple(a + b for a, b in zip(lam, mu))):
        c = csym.get(nu, LaurentFraction(ctx.ring.zero))
        agree = ctx.c_via_hecke(lam, mu, nu) == c
        rows.append(
            {
                "lambda": list(lam),
                "mu": list(mu),
                "nu": list(nu),
                "c": str(c),
                "cprime": str(ctx.c_prime(lam, mu, nu, c)),
                "routes_agree": agree,
            }
        )
    return rows


def cmd_table(spec: JobSpec) -> int:
    cache_file = os.path.join(_cache_dir(spec), spec.cache_key() + ".json")
    payload = None
    if os.path.exists(cache_file):
        try:
            with open(cache_file) as fh:
                payload = json.load(fh)
        except (OSError, json.JSONDecodeError):
            print("warning: cache corrupt, recomputing", file=sys.stderr)
            payload = None
    if payload is None:
        rs = parse_descriptor(spec.system)
        cells = [
            (spec.system, lam, mu)
            for lam in dominant_grid(rs, spec.grid)
            for mu in dominant_grid(rs, spec.grid)
        ]
        if spec.jobs > 1:
            import multiprocessing

            with multiprocessing.Pool(spec.jobs) as pool:
                chunks = pool.map(_table_cell, cells)
        else:
            chunks = [_table_cell(c) for c in cells]
        entries = [row for chunk in chunks for row in chunk]
        payload = {
            "system": rs.descriptor(),
            "grid": spec.grid,
            "version": __version__,
            "entries": entries,
        }
        _atomic_write(
            cache_file, json.dumps(payload, sort_keys=True, indent=1)
        )
    entries = payload["entries"]
    if spec.eval_at:
        ctx = spherical_context(parse_descriptor(spec.system))
        for row in entries:
            lam, mu, nu = (
                tuple(row["lambda"]),
                tuple(row["mu"]),
                tuple(row["nu"]),
            )
            value = ctx.c_via_symmetric(lam, mu).get(
                nu, LaurentFraction(ctx.ring.zero)
            )
            row["c_value"] = str(value.eval_q(spec.eval_at))
    if spec.fmt == "json":
        print(json.dumps(payload, sort_keys=True, indent=1))
    elif spec.fmt == "csv":
        print("lambda;mu;nu;c;cprime;routes_agree" + (";c_value" if spec.eval_at else ""))
        for row in entries:
            cells = [
                ",".join(map(str, row["lambda"])),
                ",".join(map(str, row["mu"])),
                ",".join(map(str, row["nu"])),
                row["c"],
                row["cprime"],
                str(row["routes_agree"]),
            ]
            if spec.eval_at:
                cells.append(row["c_value"])
            print(";".join(cells))
    else:
        for row in entries:
            line = (
                f"c[{row['lambda']},{row['mu']};{row['nu']}] = {row['c']}"
                f"  (c' = {row['cprime']}, agree = {row['routes_agree']})"
            )
            if spec.eval_at:
                line += f"  value = {row['c_value']}"
            print(line)
    return 0 if all(r["routes_agree"] for r in entries) else 1


_APPENDIX = {
    "A~2": ((0, 1, 2),),
    "B~3": ((0, 1, 2), (3,)),
    "C~2": ((0, 2), (1,)),
    "BC~2": ((0,), (1,), (2,)),
    "G~2": ((0, 2), (1,)),
    "F~4": ((0, 1, 2), (3, 4)),
}


def cmd_verify(args) -> int:
    suite = args.suite
    failures = 0
    checks = 0

    def report(name, ok):
        nonlocal failures, checks
        checks += 1
        failures += not ok
        print(f"{'PASS' if ok else 'FAIL'}  {name}")

    if suite == "classes":
        for desc, expected in _APPENDIX.items():
            aw = affine_weyl(parse_descriptor(desc))
            report(f"classes {desc}", aw.classes == expected)
    elif suite == "positivity":
        ctx = spherical_context(parse_descriptor(args.system))
        rs = ctx.rs
        ok = True
        for lam in dominant_grid(rs, args.grid):
            for mu in dominant_grid(rs, args.grid):
                cs = ctx.c_via_symmetric(lam, mu)
                for nu in ctx.dominated_dominants(
                    tuple(a + b for a, b in zip(lam, mu))
                ):
                    c = cs.get(nu, LaurentFraction(ctx.ring.zero))
                    cp = ctx.c_prime(lam, mu, nu, c)
                    ok = ok and cp.has_nonneg_integer_coeffs()
        report(f"positivity {args.system} grid {args.grid}", ok)
    elif suite == "dualroute":
        ctx = spherical_context(parse_descriptor(args.system))
        rs = ctx.rs
        ok = True
        for lam in dominant_grid(rs, args.grid):
            for mu in dominant_grid(rs, args.grid):
                cs = ctx.c_via_symmetric(lam, mu)
                for nu in ctx.dominated_dominants(
                    tuple(a + b for a, b in zip(lam, mu))
                ):
                    c = cs.get(nu, LaurentFraction(ctx.ring.zero))
                    ok = ok and ctx.c_via_hecke(lam, mu, nu) == c
        report(f"dual-route {args.system} grid {args.grid}", ok)
    elif suite == "bernstein":
        alg = hecke_algebra(parse_descriptor(args.system))
        n = alg.aw.rs.rank
        ok = True
        for lam in iproduct(range(-args.grid, args.grid + 1), repeat=n):
            for i in range(1, n + 1):
                ok = ok and alg.bernstein_residual(lam, i).is_zero()
        report(f"bernstein {args.system} grid {args.grid}", ok)
    elif suite == "satake":
        ctx = spherical_context(parse_descriptor(args.system))
        alg = ctx.alg
        aw = ctx.aw
        ok = True
        for lam in dominant_grid(ctx.rs, args.grid):
            lhs = alg.satake_product(lam)
            rhs = alg.t_multiply(
                alg.group_algebra_image(ctx.macdonald_p(lam).terms),
                alg.idempotent(0),
            )
            ok = ok and lhs == rhs
        report(f"satake {args.system} grid {args.grid}", ok)
    elif suite == "building":
        b = parse_building(args.system)
        if isinstance(b, TreeBuilding):
            against = args.against or "BC1"
            if parse_descriptor(against).descriptor() != "BC1":
                raise StructureError("trees verify against BC1")
            ctx = spherical_context(parse_descriptor("BC1"))
            at = {"q0": b.q0, "q1": b.q1}
            okn = all(
                lp_eval(ctx.n_lambda((k,)), at) == len(b.vertex_set(0, (k,)))
                for k in range(0, b.radius // 2 + 1)
            )
            report(f"tree N counts q0={b.q0} q1={b.q1}", okn)
            oka = True
            kmax = max(1, b.radius // 4)
            for lam in range(1, kmax + 1):
                for mu in range(1, kmax + 1):
                    cs = ctx.c_via_symmetric((lam,), (mu,))
                    for nu in ctx.dominated_dominants((lam + mu,)):
                        c = cs.get(nu, LaurentFraction(ctx.ring.zero))
                        try:
                            emp = b.empirical_constants((lam,), (mu,), nu)
                        except MarginError:
                            continue
                        oka = oka and emp == c.eval_q(at)
            report("tree empirical a == c", oka)
            report("tree regularity", b.regularity_check(2)["ok"])
        else:
            aw = b.aw
            ctx = spherical_context(aw.rs)
            ones = {n: 1 for n in aw.ring.names}
            zero = aw.rs.zero_coweight()
            okv = all(
                len(b.vertex_set(zero, lam))
                == lp_eval(ctx.n_lambda(lam), ones)
                for lam in dominant_grid(aw.rs, args.grid)
            )
            report(f"thin |V_lam| counts {aw.rs.descriptor()}", okv)
            oka = True
            for lam in dominant_grid(aw.rs, args.grid):
                for mu in dominant_grid(aw.rs, args.grid):
                    cs = ctx.c_via_symmetric(lam, mu)
                    for nu in ctx.dominated_dominants(
                        tuple(a + b_ for a, b_ in zip(lam, mu))
                    ):
                        c = cs.get(nu, LaurentFraction(ctx.ring.zero))
                        oka = oka and b.empirical_constants(lam, mu, nu) == c.eval_q(ones)
            report("thin empirical a == c at q=1", oka)
            report("thin regularity", b.regularity_check(2)["ok"])
    else:
        raise StructureError(f"unknown verify suite {suite!r}")
    print(f"{checks - failures}/{checks} checks passed")
    return 1 if failures else 0


def cmd_show(args) -> int:
    what = args.what
    if what == "classes":
        aw = affine_weyl(parse_descriptor(args.system))
        mode = "Wtilde" if "~" in args.system else args.mode
        classes = parameter_classes(aw.coxeter_graph, mode)
        print(
            " ".join(
                "{" + ",".join(f"q{i}" for i in cls) + "}" for cls in classes
            )
        )
    elif what == "rootdata":
        rs = parse_descriptor(args.system)
        print(json.dumps(rs.to_json_dict(), indent=1, sort_keys=True))
    elif what == "plambda":
        ctx = spherical_context(parse_descriptor(args.system))
        lam = tuple(int(c) for c in args.coweight.split(","))
        p = ctx.macdonald_p(lam)
        for k in sorted(p.terms, reverse=True):
            print(f"x{list(k)}: {p.terms[k]}")
    else:
        raise StructureError(f"unknown show target {what!r}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="affhecke",
        description="Exact affine Hecke algebra computations with building verification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_table = sub.add_parser("table", help="structure-constant table")
    p_table.add_argument("system")
    p_table.add_argument("--grid", type=int, default=1)
    p_table.add_argument("--eval", dest="eval_at", default="")
    p_table.add_argument(
        "--format", dest="fmt", choices=("json", "csv", "pretty"), default="json"
    )
    p_table.add_argument("--cache-dir", default="")
    p_table.add_argument("--jobs", type=int, default=1)

    p_verify = sub.add_parser("verify", help="run an invariant suite")
    p_verify.add_argument(
        "suite",
        choices=("classes", "positivity", "dualroute", "bernstein", "satake", "building"),
    )
    p_verify.add_argument("system", nargs="?", default="")
    p_verify.add_argument("--grid", type=int, default=1)
    p_verify.add_argument("--radius", type=int, default=8)
    p_verify.add_argument("--against", default="")

    p_show = sub.add_parser("show", help="pretty-print root data / classes / P_lambda")
    p_show.add_argument("what", choices=("classes", "rootdata", "plambda"))
    p_show.add_argument("system")
    p_show.add_argument("--coweight", default="")
    p_show.add_argument("--mode", choices=("W", "Wtilde"), default="Wtilde")

    args = parser.parse_args(argv)
    try:
        if args.command == "table":
            spec = JobSpec(
                command="table",
                system=args.system,
                grid=args.grid,
                eval_at=_parse_eval(args.eval_at) if args.eval_at else {},
                fmt=args.fmt,
                cache_dir=args.cache_dir,
                jobs=args.jobs,
            )
            return cmd_table(spec)
        if args.command == "verify":
            return cmd_verify(args)
        return cmd_show(args)
    except (StructureError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
