"""JSON exchange format for matrices and pure states.

Matrices: ``{"dim": d, "entries": [[re, im], ...]}`` row-major, ``d*d`` pairs.
Pure states: ``{"dim": d, "amplitudes": [[re, im], ...]}``.
"""
import json

import numpy as np


class InputError(ValueError):
    """Malformed or invalid input file."""


def _pairs(values):
    z = np.asarray(values, dtype=np.complex128).ravel()
    return [[float(v.real), float(v.imag)] for v in z]


def matrix_to_json(m):
    m = np.asarray(m)
    return {"dim": int(m.shape[0]), "entries": _pairs(m)}


def pure_state_to_json(psi):
    psi = np.asarray(psi)
    return {"dim": int(psi.shape[0]), "amplitudes": _pairs(psi)}


def _complex_list(obj, key, expected):
    if key not in obj:
        raise InputError(f"missing field {key!r}")
    raw = obj[key]
    if not isinstance(raw, list):
        raise InputError(f"field {key!r} must be a list of [re, im] pairs")
    if len(raw) != expected:
        raise InputError(f"field {key!r} has {len(raw)} entries, expected {expected}")
    out = np.empty(expected, dtype=np.complex128)
    for k, pair in enumerate(raw):
        if (not isinstance(pair, list) or len(pair) != 2
                or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in pair)):
            raise InputError(f"field {key!r}[{k}] must be a [re, im] pair of numbers")
        out[k] = complex(pair[0], pair[1])
    if not np.all(np.isfinite(out)):
        raise InputError(f"field {key!r} contains non-finite values")
    return out


def _dim(obj):
    if not isinstance(obj, dict):
        raise InputError("top-level JSON value must be an object")
    if "dim" not in obj:
        raise InputError("missing field 'dim'")
    d = obj["dim"]
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise InputError("field 'dim' must be a positive integer")
    return d


def matrix_from_json(obj):
    d = _dim(obj)
    return _complex_list(obj, "entries", d * d).reshape(d, d)


def pure_state_from_json(obj):
    d = _dim(obj)
    return _complex_list(obj, "amplitudes", d)


def _load(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON ({exc})") from exc
    except OSError as exc:
        raise InputError(f"cannot read file ({exc.strerror})") from exc


def load_matrix(path):
    try:
        return matrix_from_json(_load(path))
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from exc


def load_pure_state(path):
    try:
        return pure_state_from_json(_load(path))
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from exc


def dump(obj, path):
    with open(path, "w") as fh:
        json.dump(obj, fh, sort_keys=True)
        fh.write("\n")
