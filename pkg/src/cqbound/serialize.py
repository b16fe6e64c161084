"""JSON state format.

Two kinds of document are understood, both with row-major matrices written
as lists of ``[re, im]`` pairs::

    {"kind": "density", "dim": d, "matrix": [[re, im], ...]}
    {"kind": "cq", "alphabet": n, "dim_b": d, "weights": [...],
     "conditionals": [[[re, im], ...], ...]}

Parsing validates every state invariant and raises the matching error
(:class:`~cqbound.errors.NotHermitian`, ``TraceNotOne``, ``NotPSD``, ...);
structural problems raise :class:`~cqbound.errors.MalformedState`.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import MalformedState
from .states import CQState, make_density


def _pairs(m) -> list:
    flat = np.asarray(m, dtype=complex).ravel()
    return [[float(z.real), float(z.imag)] for z in flat]


def _unpairs(obj, d: int, what: str) -> np.ndarray:
    try:
        arr = np.array(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise MalformedState(f"{what}: entries must be [re, im] number pairs") from exc
    if arr.shape != (d * d, 2):
        raise MalformedState(f"{what}: expected {d * d} [re, im] pairs, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise MalformedState(f"{what}: non-finite entry")
    return (arr[:, 0] + 1j * arr[:, 1]).reshape(d, d)


def density_to_dict(rho) -> dict:
    rho = np.asarray(rho, dtype=complex)
    return {"kind": "density", "dim": int(rho.shape[0]), "matrix": _pairs(rho)}


def cq_to_dict(state: CQState) -> dict:
    return {
        "kind": "cq",
        "alphabet": state.alphabet_size,
        "dim_b": state.dim_b,
        "weights": [float(w) for w in state.weights],
        "conditionals": [_pairs(c) for c in state.conditionals],
    }


def state_to_dict(state) -> dict:
    if isinstance(state, CQState):
        return cq_to_dict(state)
    return density_to_dict(state)


def _positive_int(obj, key):
    v = obj.get(key)
    if not isinstance(v, int) or isinstance(v, bool) or v < 1:
        raise MalformedState(f"field {key!r} must be a positive integer, got {v!r}")
    return v


def state_from_dict(obj):
    """Parse a state document into a ``CQState`` or a validated density matrix."""
    if not isinstance(obj, dict):
        raise MalformedState("state document must be a JSON object")
    kind = obj.get("kind")
    if kind == "density":
        d = _positive_int(obj, "dim")
        if "matrix" not in obj:
            raise MalformedState("missing field 'matrix'")
        return make_density(_unpairs(obj["matrix"], d, "matrix"))
    if kind == "cq":
        n = _positive_int(obj, "alphabet")
        d = _positive_int(obj, "dim_b")
        weights, conds = obj.get("weights"), obj.get("conditionals")
        if not isinstance(weights, list) or len(weights) != n:
            raise MalformedState(f"'weights' must be a list of {n} numbers")
        if not isinstance(conds, list) or len(conds) != n:
            raise MalformedState(f"'conditionals' must be a list of {n} matrices")
        try:
            w = np.array(weights, dtype=float)
        except (TypeError, ValueError) as exc:
            raise MalformedState("'weights' must be numbers") from exc
        c = np.stack([_unpairs(m, d, f"conditional {x}") for x, m in enumerate(conds)])
        return CQState(w, c)
    raise MalformedState(f"unknown state kind {kind!r}")


def dumps_state(state) -> str:
    return json.dumps(state_to_dict(state))


def loads_state(text: str):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedState(f"invalid JSON: {exc}") from exc
    return state_from_dict(obj)


def save_state(state, path) -> None:
    Path(path).write_text(dumps_state(state) + "\n")


def load_state(path):
    return loads_state(Path(path).read_text())
