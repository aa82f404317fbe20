"""Problem-file parsing and report serialization.

Complex numbers travel as ``[re, im]`` pairs of doubles.  Non-finite floats
are written as the strings ``"inf"``, ``"-inf"`` and ``"nan"`` so that every
report is strict JSON.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
from dataclasses import dataclass, field
from importlib import resources
from typing import Any

import numpy as np


class ProblemError(ValueError):
    """Malformed or invalid problem file."""


@dataclass(frozen=True)
class Problem:
    nodes: np.ndarray
    values: np.ndarray | None
    metadata: dict
    digest: str


def _pair(item, where: str) -> complex:
    if (not isinstance(item, (list, tuple)) or len(item) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in item)):
        raise ProblemError(f"{where}: expected a [re, im] pair of numbers, got {item!r}")
    z = complex(float(item[0]), float(item[1]))
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ProblemError(f"{where}: non-finite number")
    return z


def parse_problem(text: str) -> Problem:
    """Parse and validate a problem file given as JSON text."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ProblemError("top level must be a JSON object")
    unknown = set(data) - {"nodes", "values", "metadata"}
    if unknown:
        raise ProblemError(f"unknown fields: {', '.join(sorted(unknown))}")
    if "nodes" not in data or not isinstance(data["nodes"], list):
        raise ProblemError("nodes: required list of [re, im] pairs")
    nodes = np.array([_pair(p, f"nodes[{i}]") for i, p in enumerate(data["nodes"])], dtype=complex)
    for i, z in enumerate(nodes):
        if z.real**2 + z.imag**2 >= 1.0:
            raise ProblemError(f"nodes[{i}]: point {[z.real, z.imag]} is not inside the unit disc")
    values = None
    if data.get("values") is not None:
        if not isinstance(data["values"], list):
            raise ProblemError("values: expected a list of [re, im] pairs")
        values = np.array([_pair(p, f"values[{i}]") for i, p in enumerate(data["values"])], dtype=complex)
        if values.size != nodes.size:
            raise ProblemError(f"values: length {values.size} differs from nodes length {nodes.size}")
        for i, w in enumerate(values):
            if abs(w) > 1.0:
                raise ProblemError(f"values[{i}]: modulus {abs(w)!r} exceeds 1")
    metadata = data.get("metadata", {})
    if not isinstance(metadata, dict) or not all(isinstance(k, str) and isinstance(v, str)
                                                 for k, v in metadata.items()):
        raise ProblemError("metadata: expected a map of strings to strings")
    canonical = json.dumps(data, sort_keys=True, separators=(",", ":"))
    digest = "sha256:" + hashlib.sha256(canonical.encode()).hexdigest()
    return Problem(nodes, values, metadata, digest)


def to_jsonable(obj: Any) -> Any:
    """Convert library results to plain JSON-compatible structures."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(obj, (complex, np.complexfloating)):
        return [to_jsonable(obj.real), to_jsonable(obj.imag)]
    if obj is None or isinstance(obj, str):
        return obj
    raise TypeError(f"cannot serialise {type(obj).__name__}")


@dataclass
class Report:
    command: str
    inputs_digest: str
    parameters: dict
    results: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(to_jsonable(self), indent=2, allow_nan=False) + "\n"


def load_schema(name: str = "report") -> dict:
    """Load a bundled JSON schema (``report`` or ``problem``)."""
    text = resources.files("schwarzpick").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)
