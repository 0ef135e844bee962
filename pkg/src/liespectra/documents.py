"""JSON algebra documents and report encoding.

An algebra document looks like::

    {
      "scalar": "rational",
      "dimension": 2,
      "generators": [
        {"name": "y", "matrix": [[["0", "0"], ["2", "0"]], [["0", "0"], ["0", "0"]]]},
        {"name": "x", "matrix": [[["-1/2", "0"], ["0", "0"]], [["0", "0"], ["1/2", "0"]]]}
      ],
      "order": ["y", "x"]
    }

Entries are ``[re, im]`` pairs: strings ``"p/q"`` in rational mode, numbers in
float mode.  A bare real entry is accepted on input.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import linalg as la
from .scalars import GaussianRational, gq

__all__ = [
    "DocumentError",
    "AlgebraDocument",
    "parse_document",
    "load_document",
    "document_to_dict",
    "fixture_document",
    "encode_scalar",
    "encode_character",
    "encode_value",
    "format_scalar",
    "format_character",
    "format_value",
]


class DocumentError(ValueError):
    pass


@dataclass
class AlgebraDocument:
    scalar: str
    dimension: int
    names: list
    matrices: list
    order: list | None = None
    expected: dict | None = None

    def ordered(self) -> tuple[list, list]:
        """Generators (names, matrices) in the declared order, if any."""
        if not self.order:
            return list(self.names), list(self.matrices)
        lookup = dict(zip(self.names, self.matrices))
        missing = [nm for nm in self.order if nm not in lookup]
        if missing or len(set(self.order)) != len(self.order):
            raise DocumentError(f"declared order does not match generator names: {self.order}")
        return list(self.order), [lookup[nm] for nm in self.order]


def _entry(value, mode: str, where: str):
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise DocumentError(f"{where}: complex entries must be [re, im] pairs")
        re, im = value
    else:
        re, im = value, 0
    if mode == "rational":
        try:
            return GaussianRational.from_parts(_fraction(re, where), _fraction(im, where))
        except (ValueError, ZeroDivisionError) as exc:
            raise DocumentError(f"{where}: {exc}") from None
    try:
        return complex(float(re), float(im))
    except (TypeError, ValueError):
        raise DocumentError(f"{where}: float mode expects numbers, got {value!r}") from None


def _fraction(v, where):
    if isinstance(v, bool):
        raise DocumentError(f"{where}: booleans are not scalars")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v.strip())
    if isinstance(v, float):
        raise DocumentError(f"{where}: rational mode needs exact strings, got float {v!r}")
    raise DocumentError(f"{where}: cannot read scalar {v!r}")


def parse_document(data: dict) -> AlgebraDocument:
    if not isinstance(data, dict):
        raise DocumentError("document must be a JSON object")
    mode = data.get("scalar", "rational")
    if mode not in ("rational", "float"):
        raise DocumentError(f"scalar mode must be 'rational' or 'float', got {mode!r}")
    gens = data.get("generators")
    if not isinstance(gens, list) or not gens:
        raise DocumentError("'generators' must be a nonempty list")
    d = data.get("dimension")
    names, mats = [], []
    for g, gen in enumerate(gens):
        if not isinstance(gen, dict) or "matrix" not in gen:
            raise DocumentError(f"generator {g}: expected an object with a 'matrix'")
        name = str(gen.get("name", f"x{g + 1}"))
        rows = gen["matrix"]
        if not isinstance(rows, list) or not rows:
            raise DocumentError(f"generator {name}: matrix must be a nonempty list of rows")
        if d is None:
            d = len(rows)
        if len(rows) != d or any(not isinstance(r, list) or len(r) != d for r in rows):
            raise DocumentError(f"generator {name}: matrix must be {d} x {d}")
        entries = [[_entry(v, mode, f"generator {name}[{i}][{j}]") for j, v in enumerate(r)]
                   for i, r in enumerate(rows)]
        if mode == "rational":
            M = np.empty((d, d), dtype=object)
            for i in range(d):
                for j in range(d):
                    M[i, j] = entries[i][j]
        else:
            M = np.array(entries, dtype=complex)
        names.append(name)
        mats.append(M)
    if len(set(names)) != len(names):
        raise DocumentError("generator names must be distinct")
    if not isinstance(d, int) or d < 1:
        raise DocumentError("'dimension' must be a positive integer")
    order = data.get("order")
    if order is not None and not isinstance(order, list):
        raise DocumentError("'order' must be a list of generator names")
    return AlgebraDocument(mode, d, names, mats, order, data.get("expected"))


def load_document(path) -> AlgebraDocument:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return parse_document(data)


# encoding ---------------------------------------------------------------------------

def encode_scalar(z):
    """[re, im] pair: strings for exact values, numbers for floats."""
    if isinstance(z, GaussianRational):
        return [str(z.real), str(z.imag)]
    if isinstance(z, (int, Fraction)):
        return [str(Fraction(z)), "0"]
    z = complex(z)
    return [z.real, z.imag]


def encode_character(f) -> list:
    return [encode_scalar(z) for z in f]


def encode_value(v):
    """Real quantity (radius, norm): exact string, float, or interval."""
    if v is None:
        return None
    if hasattr(v, "lower") and hasattr(v, "upper"):
        return {"lower": encode_value(v.lower), "upper": encode_value(v.upper)}
    if isinstance(v, (int, Fraction)):
        return str(Fraction(v))
    v = float(v)
    if math.isinf(v):
        return "inf"
    return v


def format_scalar(z) -> str:
    if isinstance(z, GaussianRational):
        return str(z)
    if isinstance(z, (int, Fraction)):
        return str(z)
    z = complex(z)
    if abs(z.imag) < 1e-12:
        return f"{z.real:.6g}"
    return f"{z.real:.6g}{z.imag:+.6g}i"


def format_character(f) -> str:
    return "(" + ", ".join(format_scalar(z) for z in f) + ")"


def format_value(v) -> str:
    if v is None:
        return "-"
    if hasattr(v, "lower") and hasattr(v, "upper"):
        return f"[{format_value(v.lower)}, {format_value(v.upper)}]"
    if isinstance(v, (int, Fraction)):
        return str(v)
    return f"{float(v):.6g}"


def document_to_dict(names, matrices, scalar: str = "rational", order=None, expected=None) -> dict:
    d = matrices[0].shape[0]
    gens = []
    for name, M in zip(names, matrices):
        if scalar == "rational":
            rows = [[encode_scalar(M[i, j]) for j in range(d)] for i in range(d)]
        else:
            Mf = la.to_float(M)
            rows = [[[Mf[i, j].real, Mf[i, j].imag] for j in range(d)] for i in range(d)]
        gens.append({"name": name, "matrix": rows})
    doc = {"scalar": scalar, "dimension": d, "generators": gens}
    if order is not None:
        doc["order"] = list(order)
    if expected is not None:
        doc["expected"] = expected
    return doc


def fixture_document(fixture) -> dict:
    """Serialize a :class:`~liespectra.generators.Fixture` with its expectations."""
    expected = {}
    for key, val in fixture.expected.items():
        if key in ("sigma_pt", "sp", "weights"):
            expected[key] = [encode_character(f) for f in val]
        elif key == "blocks":
            expected[key] = list(val)
        else:
            expected[key] = encode_value(val)
    L = fixture.presentation
    names = list(fixture.names) or [f"x{i + 1}" for i in range(L.n)]
    return document_to_dict(names, list(L.basis), "rational" if L.exact else "float",
                            order=names, expected=expected)


def decode_character(f) -> tuple:
    return tuple(gq(tuple(pair)) if isinstance(pair[0], str) else complex(*pair) for pair in f)
