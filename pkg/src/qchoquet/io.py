"""JSON readers and writers; see docs/formats.md for the normative schemas."""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

import numpy as np

from .capacity import MatrixCapacity, build_lattice, subset_key
from .errors import FormatError, QChoquetError
from .hermitian import HermitianMatrix


def matrix_to_literal(m) -> list:
    a = np.asarray(m)
    return [[[float(z.real), float(z.imag)] for z in row] for row in a]


def matrix_from_literal(obj: Any) -> HermitianMatrix:
    if not isinstance(obj, list) or not obj:
        raise FormatError("matrix literal must be a non-empty list of rows")
    d = len(obj)
    rows = []
    for row in obj:
        if not isinstance(row, list) or len(row) != d:
            raise FormatError(f"matrix literal must be {d}x{d}")
        entries = []
        for z in row:
            if (
                not isinstance(z, list)
                or len(z) != 2
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in z)
            ):
                raise FormatError(f"entry {z!r} is not a [re, im] pair")
            entries.append(complex(z[0], z[1]))
        rows.append(entries)
    try:
        return HermitianMatrix(rows)
    except QChoquetError as exc:
        raise FormatError(str(exc)) from exc


def _only_fields(obj: Any, allowed: set[str], required: set[str], what: str) -> dict:
    if not isinstance(obj, dict):
        raise FormatError(f"{what} must be a JSON object")
    extra = set(obj) - allowed
    if extra:
        raise FormatError(f"unknown field(s) in {what}: {sorted(extra)}")
    missing = required - set(obj)
    if missing:
        raise FormatError(f"missing field(s) in {what}: {sorted(missing)}")
    return obj


def _int(x: Any, what: str) -> int:
    if not isinstance(x, int) or isinstance(x, bool):
        raise FormatError(f"{what} must be an integer")
    return x


def _subset(x: Any, n: int) -> tuple[int, ...]:
    if not isinstance(x, list):
        raise FormatError("subset must be a list of integers")
    try:
        return subset_key([_int(e, "subset element") for e in x], n)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def load_json(path) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from exc


def dump_json(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


# ---------------------------------------------------------------------------


def lattice_from_obj(obj: Any) -> MatrixCapacity:
    obj = _only_fields(obj, {"n", "d", "entries"}, {"n", "d", "entries"}, "lattice file")
    n = _int(obj["n"], "n")
    d = _int(obj["d"], "d")
    if not isinstance(obj["entries"], list):
        raise FormatError("entries must be a list")
    table = {}
    for e in obj["entries"]:
        e = _only_fields(e, {"subset", "matrix"}, {"subset", "matrix"}, "lattice entry")
        key = _subset(e["subset"], n)
        if key in table:
            raise FormatError(f"subset {list(key)} listed twice")
        m = matrix_from_literal(e["matrix"])
        if m.dim != d:
            raise FormatError(f"subset {list(key)}: matrix is {m.dim}x{m.dim}, expected d={d}")
        table[key] = m
    try:
        return MatrixCapacity(n, table, dim=d)
    except (QChoquetError, ValueError) as exc:
        raise FormatError(str(exc)) from exc


def lattice_to_obj(c: MatrixCapacity) -> dict:
    return {
        "n": c.n,
        "d": c.dim,
        "entries": [{"subset": list(k), "matrix": matrix_to_literal(m)} for k, m in c.table.items()],
    }


def load_lattice(path) -> MatrixCapacity:
    return lattice_from_obj(load_json(path))


def builder_from_obj(obj: Any) -> tuple[list[HermitianMatrix], dict]:
    obj = _only_fields(obj, {"singletons", "weights"}, {"singletons"}, "builder spec")
    if not isinstance(obj["singletons"], list) or not obj["singletons"]:
        raise FormatError("singletons must be a non-empty list")
    sing = [matrix_from_literal(m) for m in obj["singletons"]]
    n = len(sing)
    weights: dict[tuple[int, ...], dict[int, float]] = {}
    for w in obj.get("weights", []):
        w = _only_fields(w, {"subset", "mu"}, {"subset", "mu"}, "weight entry")
        key = _subset(w["subset"], n)
        if not isinstance(w["mu"], dict):
            raise FormatError("mu must map element -> weight")
        per = {}
        for elem, val in w["mu"].items():
            try:
                e = int(elem)
            except ValueError as exc:
                raise FormatError(f"mu key {elem!r} is not an integer") from exc
            if not isinstance(val, (int, float)) or isinstance(val, bool):
                raise FormatError(f"mu value for {elem} must be a number")
            per[e] = float(val)
        weights.setdefault(key, {}).update(per)
    return sing, weights


def load_builder(path) -> MatrixCapacity:
    sing, weights = builder_from_obj(load_json(path))
    return build_lattice(sing, weights)


def ev_from_obj(obj: Any) -> list[float]:
    obj = _only_fields(obj, {"values"}, {"values"}, "expectation file")
    vals = obj["values"]
    if not isinstance(vals, list) or not vals:
        raise FormatError("values must be a non-empty list")
    out = []
    for v in vals:
        if not isinstance(v, (int, float)) or isinstance(v, bool) or not math.isfinite(v):
            raise FormatError(f"expectation value {v!r} is not a finite number")
        out.append(float(v))
    return out


def load_ev(path) -> list[float]:
    return ev_from_obj(load_json(path))


def report_from_obj(obj: Any) -> dict:
    """Parse a reconstruction report back into plain Python values."""
    obj = _only_fields(
        obj,
        {"r1", "eigenvalues", "reproduced", "errors", "chain", "flags"},
        {"r1", "eigenvalues", "reproduced", "errors", "chain", "flags"},
        "reconstruction report",
    )
    return {
        "r1": matrix_from_literal(obj["r1"]),
        "eigenvalues": [float(x) for x in obj["eigenvalues"]],
        "reproduced": [float(x) for x in obj["reproduced"]],
        "errors": [float(x) for x in obj["errors"]],
        "chain": [tuple(s) for s in obj["chain"]],
        "flags": list(obj["flags"]),
    }
