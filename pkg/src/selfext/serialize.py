"""JSON conventions: rationals as ``"p/q"`` strings, matrices as lists of columns."""

from __future__ import annotations

import dataclasses
import json
from fractions import Fraction
from typing import Any

from .exact import Mat, as_rational, format_rational
from .spaces import L1, LINF, MAX_ABS, PolyhedralSpace, Subspace, sum_zero

SCHEMA = 1


class InputError(ValueError):
    """A JSON document or command-line descriptor could not be parsed."""


def encode(obj: Any) -> Any:
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if obj is None or isinstance(obj, (bool, int, str, float)):
        return obj  # counts, flags, labels; exact values are Fractions
    if isinstance(obj, Mat):
        return [[format_rational(x) for x in c] for c in obj.columns()]
    if isinstance(obj, PolyhedralSpace):
        return space_to_json(obj)
    if isinstance(obj, Subspace):
        return {"basis": encode(obj.basis)}
    if dataclasses.is_dataclass(obj):
        return {f.name: encode(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {k: encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(doc: dict) -> str:
    """Serialise a document with the schema tag; stable key order and layout."""
    return json.dumps({"schema": SCHEMA, **doc}, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def parse_rational(x) -> Fraction:
    try:
        return as_rational(x)
    except (TypeError, ValueError) as e:
        raise InputError(str(e)) from None


def parse_vector(data) -> tuple:
    if not isinstance(data, list):
        raise InputError("expected a list of rationals")
    return tuple(parse_rational(x) for x in data)


def parse_matrix(data) -> Mat:
    """A matrix given as a list of columns."""
    if not isinstance(data, list) or not all(isinstance(c, list) for c in data):
        raise InputError("matrix must be a list of columns")
    cols = [parse_vector(c) for c in data]
    if len({len(c) for c in cols}) > 1:
        raise InputError("matrix columns have different lengths")
    return Mat.from_columns(cols)


def space_to_json(space: PolyhedralSpace) -> dict:
    if space.kind == MAX_ABS:
        norm = {"max_abs": [[format_rational(x) for x in r] for r in space.functionals.row_list()]}
    else:
        norm = space.kind
    return {"dim": space.dim, "norm": norm}


def parse_space(data) -> PolyhedralSpace:
    """``"l1:4"``, ``"linf:3"`` or ``{"dim": n, "norm": "l1" | "linf" | {"max_abs": rows}}``."""
    try:
        if isinstance(data, str):
            kind, _, n = data.partition(":")
            if kind not in (L1, LINF) or not n.isdigit():
                raise InputError(f"bad space descriptor {data!r}; use l1:N or linf:N")
            return PolyhedralSpace(int(n), kind)
        if not isinstance(data, dict) or "norm" not in data:
            raise InputError("space must be a descriptor string or an object with 'norm'")
        norm = data["norm"]
        if isinstance(norm, dict):
            rows = norm.get(MAX_ABS)
            if not isinstance(rows, list):
                raise InputError("max_abs norm needs a list of functional rows")
            space = PolyhedralSpace.max_abs([parse_vector(r) for r in rows])
        elif norm in (L1, LINF):
            space = PolyhedralSpace(int(data["dim"]), norm)
        else:
            raise InputError(f"unknown norm {norm!r}")
        if "dim" in data and int(data["dim"]) != space.dim:
            raise InputError("dim does not match the norm")
        return space
    except InputError:
        raise
    except (ValueError, TypeError, KeyError) as e:
        raise InputError(str(e)) from None


def parse_subspace(data, space: PolyhedralSpace) -> Subspace:
    """``"sum-zero"``, ``"full"`` or ``{"basis": columns}``."""
    try:
        if data == "sum-zero":
            if space.kind != L1:
                return Subspace(space, sum_zero(space.dim).basis)
            return sum_zero(space.dim)
        if data == "full":
            return Subspace(space, Mat.identity(space.dim))
        if isinstance(data, dict) and "basis" in data:
            return Subspace(space, parse_matrix(data["basis"]))
        raise InputError("subspace must be 'sum-zero', 'full' or an object with 'basis'")
    except InputError:
        raise
    except (ValueError, TypeError) as e:
        raise InputError(str(e)) from None
