"""Family documents (input) and report serialization (output).

Both are JSON. Complex numbers are encoded as two-element arrays
``[re, im]``; matrices as nested row-major lists of those. Report floats are
written with 17 significant digits so every binary64 value round-trips.

Family document, schema version 1::

    {
      "schema_version": 1,
      "kind": "linear",                 # or "polynomial"
      "dimension": 2,
      "tau0": [0.0, 0.0],
      "matrices": {"A0": [[[1, 0], [0, 0]], [[0, 0], [2, 0]]],
                   "dA": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]]},
      "selector": "closest=1,0",        # optional, CLI grammar
      "scheme": {"kind": "n1", "pin_j": 1, "pin_k": 1}   # optional, 1-based pins
    }

Linear families use ``A(tau) = A0 + (tau - tau0) dA``; polynomial families
list ``C0 .. Cd`` and use ``A(tau) = sum_k tau^k Ck``.
"""

import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .eigentriple import EigenSelector
from .errors import InputError
from .family import MAX_DEGREE, MatrixFamily
from .normalizations import SCHEMES, NormalizationScheme

SCHEMA_VERSION = 1

__all__ = [
    "FamilyDocument",
    "ParseError",
    "cplx",
    "dumps",
    "family_document_from_family",
    "loads",
    "matrix_to_json",
    "parse_family_document",
    "parse_selector",
    "scheme_from_spec",
    "vector_to_json",
]


class ParseError(InputError):
    pass


# -- encoding helpers --------------------------------------------------------


def cplx(z):
    z = complex(z)
    return [z.real, z.imag]


def vector_to_json(v):
    return [cplx(z) for z in np.asarray(v).reshape(-1)]


def matrix_to_json(M):
    return [[cplx(z) for z in row] for row in np.asarray(M)]


def _fmt_float(x):
    if not math.isfinite(x):
        return "null"
    return format(x, ".16e")


def _encode(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        # short numeric leaves (complex pairs, rows) stay on one line
        if all(not isinstance(v, (dict, list, tuple)) for v in obj) or all(
            isinstance(v, (list, tuple)) and len(v) == 2 and not isinstance(v[0], (list, tuple, dict)) for v in obj
        ):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        items = [f"{pad}{_encode(v, indent, level + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent=2):
    """Serialize JSON-native data; floats as 17-significant-digit exponent form."""
    return _encode(obj, indent, 0) + "\n"


def loads(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc


# -- selectors and schemes ---------------------------------------------------


def parse_selector(text):
    """``closest=RE,IM`` | ``largest-real`` | ``largest-modulus`` | ``index=K``."""
    text = text.strip()
    if text == "largest-real":
        return EigenSelector.largest_real()
    if text == "largest-modulus":
        return EigenSelector.largest_modulus()
    if text.startswith("closest="):
        parts = text[len("closest="):].split(",")
        try:
            vals = [float(p) for p in parts]
        except ValueError:
            raise ParseError(f"bad selector {text!r}") from None
        if len(vals) not in (1, 2) or not all(math.isfinite(v) for v in vals):
            raise ParseError(f"bad selector {text!r}")
        return EigenSelector.closest_to(complex(vals[0], vals[1] if len(vals) == 2 else 0.0))
    if text.startswith("index="):
        try:
            return EigenSelector.index(int(text[len("index="):]))
        except ValueError:
            raise ParseError(f"bad selector {text!r}") from None
    raise ParseError(f"bad selector {text!r}")


def scheme_from_spec(kind, pin_j=None, pin_k=None, sign=None):
    """Build a scheme from 1-based pinned indices (as used in files and flags)."""
    kind = str(kind).lower()
    if kind not in SCHEMES:
        raise ParseError(f"unknown scheme {kind!r}")
    for p in (pin_j, pin_k):
        if p is not None and (not isinstance(p, int) or isinstance(p, bool) or p < 1):
            raise ParseError("pinned indices are positive 1-based integers")
    return NormalizationScheme(
        kind,
        None if pin_j is None else pin_j - 1,
        None if pin_k is None else pin_k - 1,
        sign,
    )


# -- family documents --------------------------------------------------------


def _number(v, where):
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise ParseError(f"{where}: expected a finite number, got {v!r}")
    return float(v)


def _complex(v, where):
    if not isinstance(v, list) or len(v) != 2:
        raise ParseError(f"{where}: complex entries must be [re, im] arrays, got {v!r}")
    return complex(_number(v[0], where), _number(v[1], where))


def _matrix(rows, n, where):
    if not isinstance(rows, list) or len(rows) != n:
        raise ParseError(f"{where}: expected {n} rows")
    out = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise ParseError(f"{where}: row {i} must have {n} entries")
        out.append([_complex(v, f"{where}[{i}][{j}]") for j, v in enumerate(row)])
    return out


@dataclass
class FamilyDocument:
    kind: str
    dimension: int
    tau0: complex
    matrices: dict
    selector: Optional[str] = None
    scheme: Optional[dict] = None
    schema_version: int = SCHEMA_VERSION

    def to_family(self):
        if self.kind == "linear":
            return MatrixFamily.linear(np.array(self.matrices["A0"]), np.array(self.matrices["dA"]), self.tau0)
        coeffs = [np.array(self.matrices[f"C{k}"]) for k in range(len(self.matrices))]
        return MatrixFamily.polynomial(coeffs, self.tau0)

    def to_selector(self):
        return None if self.selector is None else parse_selector(self.selector)

    def to_scheme(self):
        if self.scheme is None:
            return None
        return scheme_from_spec(
            self.scheme.get("kind"), self.scheme.get("pin_j"), self.scheme.get("pin_k"), self.scheme.get("sign")
        )

    def to_json(self):
        d = {
            "schema_version": self.schema_version,
            "kind": self.kind,
            "dimension": self.dimension,
            "tau0": cplx(self.tau0),
            "matrices": {k: [[cplx(z) for z in row] for row in M] for k, M in self.matrices.items()},
        }
        if self.selector is not None:
            d["selector"] = self.selector
        if self.scheme is not None:
            d["scheme"] = dict(self.scheme)
        return d


def parse_family_document(data):
    """Validate a decoded JSON object (or JSON text) into a ``FamilyDocument``."""
    if isinstance(data, str):
        data = loads(data)
    if not isinstance(data, dict):
        raise ParseError("family document must be a JSON object")
    if data.get("schema_version") != SCHEMA_VERSION:
        raise ParseError(f"schema_version must be {SCHEMA_VERSION}")
    kind = data.get("kind")
    if kind not in ("linear", "polynomial"):
        raise ParseError(f"kind must be 'linear' or 'polynomial', got {kind!r}")
    n = data.get("dimension")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParseError("dimension must be a positive integer")
    tau0 = _complex(data.get("tau0"), "tau0")
    mats = data.get("matrices")
    if not isinstance(mats, dict):
        raise ParseError("matrices must be an object")
    if kind == "linear":
        names = ["A0", "dA"]
        if set(mats) != set(names):
            raise ParseError("linear family needs exactly matrices A0 and dA")
    else:
        names = [f"C{k}" for k in range(len(mats))]
        if not mats or set(mats) != set(names):
            raise ParseError("polynomial family needs matrices C0, C1, ..., Cd")
        if len(names) - 1 > MAX_DEGREE:
            raise ParseError(f"polynomial degree exceeds {MAX_DEGREE}")
    matrices = {k: _matrix(mats[k], n, f"matrices.{k}") for k in names}
    selector = data.get("selector")
    if selector is not None:
        if not isinstance(selector, str):
            raise ParseError("selector must be a string")
        parse_selector(selector)
    scheme = data.get("scheme")
    if scheme is not None:
        if not isinstance(scheme, dict) or "kind" not in scheme:
            raise ParseError("scheme must be an object with a 'kind'")
        unknown = set(scheme) - {"kind", "pin_j", "pin_k", "sign"}
        if unknown:
            raise ParseError(f"unknown scheme keys {sorted(unknown)}")
        if scheme.get("sign") not in (None, 1, -1):
            raise ParseError("scheme sign must be 1 or -1")
        scheme_from_spec(scheme["kind"], scheme.get("pin_j"), scheme.get("pin_k"), scheme.get("sign"))
    return FamilyDocument(kind, n, tau0, matrices, selector, scheme)


def family_document_from_family(F, selector=None, scheme=None):
    if F.kind == "linear":
        names = {"A0": F.terms[0], "dA": F.terms[1]}
    elif F.kind == "polynomial":
        names = {f"C{k}": C for k, C in enumerate(F.terms)}
    else:
        raise InputError("sampled families have no document form")
    mats = {k: [[complex(z) for z in row] for row in M] for k, M in names.items()}
    return FamilyDocument(F.kind, F.n, complex(F.tau0), mats, selector, scheme)
