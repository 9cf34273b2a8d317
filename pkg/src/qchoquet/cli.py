"""Command-line front end.

Exit codes: 0 success, 1 domain failure (violations, zero trace, policy,
failed demo checks), 2 I/O or parse failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import refdata
from .capacity import (
    additive_lattice,
    build_lattice,
    identity_residual,
    mobius_transform,
    validate_capacity,
)
from .choquet import quantum_choquet
from .errors import FormatError, QChoquetError
from .io import (
    builder_from_obj,
    dump_json,
    lattice_to_obj,
    load_ev,
    load_json,
    load_lattice,
    matrix_to_literal,
)
from .reconstruct import (
    ReconstructionPolicy,
    check_linear_independence,
    projector_closed_form,
    projector_lattice,
    reconstruct,
)
from .zd import ZdSystem, coherent_family, momentum_projectors, position_projectors

EXIT_OK, EXIT_DOMAIN, EXIT_IO = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_IO, f"{self.prog}: error: {message}\n")


def _fmt_matrix(m, digits: int = 4) -> str:
    a = np.asarray(m)
    rows = []
    for row in a:
        cells = []
        for z in row:
            if abs(z.imag) < 0.5 * 10 ** -digits:
                cells.append(f"{z.real: .{digits}f}")
            else:
                cells.append(f"{z.real: .{digits}f}{z.imag:+.{digits}f}i")
        rows.append("  ".join(c.rjust(2 * digits + 6) for c in cells))
    return "\n".join(rows)


def _fmt_set(s) -> str:
    return "{" + ",".join(str(x) for x in s) + "}"


def _fmt_vec(v, digits: int = 4) -> str:
    return "(" + ", ".join(f"{x:.{digits}f}" for x in v) + ")"


def _emit(args, payload: dict, table: str) -> None:
    text = dump_json(payload) if args.format == "json" else table.rstrip("\n") + "\n"
    if getattr(args, "output", None):
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------


def cmd_validate(args) -> int:
    cap = load_lattice(args.lattice)
    rep = validate_capacity(cap, args.tol)
    independent, rk = check_linear_independence(cap.singletons)
    if not independent:
        rep.warnings.append(f"singletons linearly dependent (rank {rk} < {cap.n})")
    payload = rep.to_dict()
    lines = [f"lattice: n={cap.n} d={cap.dim}", f"status: {'OK' if rep.ok else 'VIOLATIONS'}"]
    for a, b in rep.violations:
        lines.append(f"violation: theta{_fmt_set(b)} does not dominate theta{_fmt_set(a)}")
    for k, p in rep.entry_problems:
        lines.append(f"entry {_fmt_set(k)}: {p}")
    for w in rep.warnings:
        lines.append(f"warning: {w}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if rep.ok else EXIT_DOMAIN


def _policy(args) -> ReconstructionPolicy:
    return ReconstructionPolicy(allow_outside_regime=args.allow_outside_regime)


def _report_table(rep) -> str:
    lines = [
        "chain:       " + " < ".join(_fmt_set(s) for s in rep.chain),
        "increments:  " + _fmt_vec(rep.increments),
        "R1:",
        _fmt_matrix(rep.r1),
        "eigenvalues: " + _fmt_vec(rep.eigenvalues),
        "reproduced:  " + _fmt_vec(rep.reproduced),
        "errors:      " + _fmt_vec(rep.errors),
    ]
    lines += [f"flag: {f}" for f in rep.flags]
    return "\n".join(lines)


def cmd_reconstruct(args) -> int:
    cap = load_lattice(args.lattice)
    ev = load_ev(args.ev)
    rep = reconstruct(cap, ev, _policy(args))
    _emit(args, rep.to_dict(), _report_table(rep))
    return EXIT_OK


def cmd_mobius(args) -> int:
    cap = load_lattice(args.lattice)
    mob = mobius_transform(cap)
    res = identity_residual(mob)
    payload = {
        "n": mob.n,
        "d": mob.dim,
        "entries": [{"subset": list(k), "matrix": matrix_to_literal(m)} for k, m in mob.table.items()],
        "identity_residual": res,
    }
    lines = [f"identity residual: {res:.3e}"]
    for k, m in mob.table.items():
        if k:
            lines.append(f"M{_fmt_set(k)}  ||.||_F = {m.norm():.3e}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_choquet(args) -> int:
    cap = load_lattice(args.lattice)
    ev = load_ev(args.ev)
    res = quantum_choquet(
        cap,
        ev,
        form=args.form,
        allow_outside_regime=args.allow_outside_regime,
        allow_n_gt_d=args.allow_mobius_n_gt_d,
    )
    payload = res.to_dict()
    if res.flags:
        payload["flags"] = list(res.flags)
    lines = [
        f"form {res.form}",
        "chain:      " + " < ".join(_fmt_set(s) for s in res.chain),
        "increments: " + _fmt_vec(res.increments),
        "C(R):",
        _fmt_matrix(res.matrix),
    ] + [f"flag: {f}" for f in res.flags]
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_lattice_gen(args) -> int:
    if args.zd is not None:
        sys_ = ZdSystem(args.zd)
        if args.basis == "position":
            sing = position_projectors(sys_)
        elif args.basis == "momentum":
            sing = momentum_projectors(sys_)
        else:
            fid = None
            if args.fiducial:
                fid = np.array(json.loads(args.fiducial), dtype=float)
                fid = fid / np.linalg.norm(fid)
            fam = coherent_family(sys_, fid)
            pts = args.points or [f"{a},{b}" for a in range(sys_.d) for b in range(sys_.d)]
            sing = []
            for p in pts:
                a, b = (int(x) for x in p.split(","))
                sing.append(fam.projector(a, b))
        if args.out_dir:
            out = Path(args.out_dir)
            out.mkdir(parents=True, exist_ok=True)
            for r, s in enumerate(sing, start=1):
                (out / f"singleton_{r}.json").write_text(dump_json(matrix_to_literal(s)), encoding="utf-8")
        if args.additive:
            cap = additive_lattice(sing)
            _emit(args, lattice_to_obj(cap), f"additive lattice n={cap.n} d={cap.dim}")
        else:
            payload = {"singletons": [matrix_to_literal(s) for s in sing]}
            _emit(args, payload, f"{len(sing)} singletons, d={sing[0].dim}")
        return EXIT_OK
    if not args.spec:
        raise FormatError("lattice-gen needs a builder spec file or --zd")
    sing, weights = builder_from_obj(load_json(args.spec))
    cap = build_lattice(sing, weights)
    _emit(args, lattice_to_obj(cap), f"lattice n={cap.n} d={cap.dim}: valid")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Demos


def _check(lines: list, checks: list, label: str, got, want, tol: float) -> None:
    diff = np.asarray(got) - np.asarray(want)
    # printed numbers are real and imaginary parts, each compared separately
    dev = float(max(np.max(np.abs(diff.real)), np.max(np.abs(np.imag(diff)))))
    ok = dev <= tol
    checks.append({"check": label, "pass": ok, "max_deviation": dev, "tolerance": tol})
    lines.append(f"[{'PASS' if ok else 'FAIL'}] {label}: max |dev| = {dev:.2e} (tol {tol:g})")


def _demo_noncommuting(choice: int):
    g = refdata.GOLDEN[choice]
    cap = refdata.lattice(choice)
    ev = refdata.EV
    rep = reconstruct(cap, ev)
    lines = [f"non-commuting observables, lattice choice {choice}", "expectation values: " + _fmt_vec(ev, 3)]
    lines += ["chain:      " + " < ".join(_fmt_set(s) for s in rep.chain)]
    lines += ["increments: " + _fmt_vec(rep.increments, 3), "C(R):", _fmt_matrix(rep.choquet)]
    lines += ["R1:", _fmt_matrix(rep.r1, 3)]
    lines += ["eigenvalues: " + _fmt_vec(rep.eigenvalues, 3)]
    lines += ["reproduced:  " + _fmt_vec(rep.reproduced, 3), "errors:      " + _fmt_vec(rep.errors, 3)]
    checks: list = []
    vt, et = refdata.VALUE_TOL, refdata.ERROR_TOL
    t2, t3, t4 = refdata.SINGLETONS[1:]
    a, b, c = g["coefficients"]
    expanded = a * t2.array + b * t3.array + c * t4.array
    _check(lines, checks, "C(R) coefficient expansion", rep.choquet.array, expanded, 1e-12)
    _check(lines, checks, "increments", rep.increments, refdata.INCREMENTS, vt)
    _check(lines, checks, "R1 entries", rep.r1.array, g["r1"], vt)
    _check(lines, checks, "R1 eigenvalues", rep.eigenvalues, g["eigenvalues"], vt)
    _check(lines, checks, "reproduced expectations", rep.reproduced, g["reproduced"], vt)
    _check(lines, checks, "relative errors", rep.errors, g["errors"], et)
    payload = {"demo": f"noncommuting-{choice}", "report": rep.to_dict(), "checks": checks}
    return lines, checks, payload


def _demo_projectors(e=refdata.PROJECTOR_SPECTRUM, lams=refdata.PROJECTOR_LAMBDAS):
    lines = ["orthogonal projectors, e = " + _fmt_vec(e, 3)]
    checks: list = []
    rows = []
    for lam in lams:
        rep = reconstruct(projector_lattice(lam), e)
        cf = projector_closed_form(e, lam)
        lines.append(
            f"lambda={lam:.2f}  Tr C={rep.choquet_trace:.6f}  R1 diag={_fmt_vec(np.diag(rep.r1.array).real)}"
            f"  errors={_fmt_vec(rep.errors)}"
        )
        _check(lines, checks, f"lambda={lam:g} C(R) closed form", np.diag(rep.choquet.array).real, cf["choquet_diag"], 1e-12)
        _check(lines, checks, f"lambda={lam:g} trace", rep.choquet_trace, cf["trace"], 1e-12)
        _check(lines, checks, f"lambda={lam:g} errors", rep.errors, cf["errors"], 1e-12)
        if lam == 0:
            _check(lines, checks, "lambda=0 trivial solution errors", rep.errors, [0.0] * 3, 1e-12)
        rows.append({"lambda": lam, "report": rep.to_dict()})
    return lines, checks, {"demo": "projectors", "sweep": rows, "checks": checks}


def cmd_demo(args) -> int:
    if args.name == "projectors":
        lines, checks, payload = _demo_projectors()
    else:
        lines, checks, payload = _demo_noncommuting(int(args.name[-1]))
    ok = all(c["pass"] for c in checks)
    lines.append("RESULT: " + ("PASS" if ok else "FAIL"))
    payload["pass"] = ok
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if ok else EXIT_DOMAIN


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="eigenvalue tolerance override")
    common.add_argument("--format", choices=("table", "json"), default="table")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--allow-outside-regime", action="store_true", help="permit n outside d <= n < d^2-1")
    common.add_argument("--allow-mobius-n-gt-d", action="store_true", help="permit the Moebius form for n != d")
    common.add_argument("-o", "--output", help="write to this file instead of stdout")

    p = _Parser(prog="qchoquet", description="Loewner order, matrix capacities and quantum Choquet integrals")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("validate", parents=[common], help="check a lattice file")
    s.add_argument("lattice")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("reconstruct", parents=[common], help="approximate a density matrix")
    s.add_argument("lattice")
    s.add_argument("ev")
    s.set_defaults(func=cmd_reconstruct)

    s = sub.add_parser("mobius", parents=[common], help="Moebius transform of a lattice")
    s.add_argument("lattice")
    s.set_defaults(func=cmd_mobius)

    s = sub.add_parser("choquet", parents=[common], help="quantum Choquet integral")
    s.add_argument("lattice")
    s.add_argument("ev")
    s.add_argument("--form", type=int, choices=(1, 2, 3), default=1)
    s.set_defaults(func=cmd_choquet)

    s = sub.add_parser("lattice-gen", parents=[common], help="build a lattice or emit Z_d singletons")
    s.add_argument("spec", nargs="?", help="builder spec file")
    s.add_argument("--zd", type=int, metavar="D", help="odd dimension of the Z_d system")
    s.add_argument("--basis", choices=("position", "momentum", "coherent"), default="position")
    s.add_argument("--fiducial", help="JSON list of real amplitudes for the coherent fiducial")
    s.add_argument("--points", nargs="*", metavar="A,B", help="coherent labels to emit")
    s.add_argument("--additive", action="store_true", help="emit the additive lattice instead of singletons")
    s.add_argument("--out-dir", help="also write one matrix-literal file per singleton")
    s.set_defaults(func=cmd_lattice_gen)

    s = sub.add_parser("demo", parents=[common], help="reproduce the worked examples")
    s.add_argument("name", choices=("projectors", "noncommuting-1", "noncommuting-2"))
    s.set_defaults(func=cmd_demo)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except QChoquetError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
