"""Model file parsing (UTF-8 JSON) with field-level diagnostics.

Schema: {"n": int, "K": 2n x 2n reals, "lindblad": list of 2n-length vectors
of [re, im] pairs (bare reals accepted), optional "tolerances" object and
"labels"}.  Canonical files always use [re, im] pairs.
"""

from __future__ import annotations

import json
from dataclasses import fields
from pathlib import Path

import numpy as np

from .analysis import Tolerances
from .errors import ParseError
from .model import QuadraticLindbladModel, validate_model


def _entry_to_complex(v, where: str) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, list) and len(v) == 2 and all(isinstance(x, (int, float)) for x in v):
        return complex(v[0], v[1])
    raise ParseError(f"{where}: expected a number or [re, im] pair, got {v!r}")


def parse_model_dict(doc: dict) -> tuple[QuadraticLindbladModel, Tolerances]:
    if not isinstance(doc, dict):
        raise ParseError("model file must contain a JSON object")
    for key in ("n", "K", "lindblad"):
        if key not in doc:
            raise ParseError(f"missing required field '{key}'")
    n = doc["n"]
    if not isinstance(n, int) or n < 1:
        raise ParseError(f"field 'n': expected a positive integer, got {n!r}")
    K = doc["K"]
    if (not isinstance(K, list) or len(K) != 2 * n
            or any(not isinstance(row, list) or len(row) != 2 * n for row in K)):
        raise ParseError(f"field 'K': expected a {2*n}x{2*n} array of reals")
    try:
        K_arr = np.array(K, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"field 'K': non-numeric entry ({exc})") from exc
    if not isinstance(doc["lindblad"], list):
        raise ParseError("field 'lindblad': expected a list of coupling vectors")
    vectors = []
    for mu, vec in enumerate(doc["lindblad"]):
        if not isinstance(vec, list) or len(vec) != 2 * n:
            raise ParseError(
                f"field 'lindblad[{mu}]': expected a vector of length {2*n}"
            )
        vectors.append(
            np.array([_entry_to_complex(v, f"lindblad[{mu}][{i}]") for i, v in enumerate(vec)])
        )
    tol_kwargs = {}
    tol_doc = doc.get("tolerances", {})
    if not isinstance(tol_doc, dict):
        raise ParseError("field 'tolerances': expected an object")
    known = {f.name for f in fields(Tolerances)}
    for key, value in tol_doc.items():
        if key not in known:
            raise ParseError(f"field 'tolerances.{key}': unknown tolerance")
        if not isinstance(value, (int, float)):
            raise ParseError(f"field 'tolerances.{key}': expected a number")
        tol_kwargs[key] = value
    tolerances = Tolerances(**tol_kwargs)
    model = validate_model(n, K_arr, vectors, tolerances.tol_input)
    return model, tolerances


def load_model(path: str | Path) -> tuple[QuadraticLindbladModel, Tolerances]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    return parse_model_dict(doc)


def model_to_dict(model: QuadraticLindbladModel) -> dict:
    return {
        "n": model.n,
        "K": [[float(v) for v in row] for row in model.K],
        "lindblad": [
            [[float(v.real), float(v.imag)] for v in l] for l in model.lindblad_vectors
        ],
    }
