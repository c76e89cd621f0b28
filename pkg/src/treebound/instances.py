"""Instance files, random instance generation and JSON output.

Instance files are JSON with 1-indexed vertices::

    {"n": 3, "entries": [[1, 2, -1.0], [1, 3, 0.5], [2, 3, 0.5, 0.25]], "b": [1, 1, 1]}

An entry with a fourth component (imaginary part) makes the potential complex.
"""

from __future__ import annotations

import hashlib
import json
import math
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DomainError, InstanceError
from .graph import edge_index, edge_pairs
from .potentials import MAX_POTENTIAL, Potential, StabilityCertificate

GENERATOR_NAME = "PCG64"


def _is_number(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def load_json(path) -> object:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InstanceError(f"cannot read {path}: {exc.strerror or exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"malformed JSON in {path}: {exc.msg} at line {exc.lineno} column {exc.colno}") from None


def certificate_from_json(data, n: int) -> StabilityCertificate:
    if isinstance(data, dict):
        if "b" not in data:
            raise InstanceError("certificate object has no 'b' field")
        data = data["b"]
    if not isinstance(data, list) or not all(_is_number(x) for x in data):
        raise InstanceError("'b' must be an array of numbers")
    if len(data) != n:
        raise InstanceError(f"'b' has {len(data)} entries, expected n={n}")
    for k, x in enumerate(data, start=1):
        if not math.isfinite(x):
            raise InstanceError(f"non-finite b_{k}")
        if x < 0:
            raise InstanceError(f"negative b_{k} = {x}")
    return StabilityCertificate(tuple(float(x) for x in data))


def instance_from_json(data) -> tuple[Potential, StabilityCertificate | None]:
    if not isinstance(data, dict):
        raise InstanceError("instance must be a JSON object")
    n = data.get("n")
    if not _is_int(n):
        raise InstanceError("field 'n' must be an integer")
    if not 2 <= n <= MAX_POTENTIAL:
        raise InstanceError(f"n = {n} out of range [2, {MAX_POTENTIAL}]")
    entries = data.get("entries")
    if not isinstance(entries, list):
        raise InstanceError("field 'entries' must be an array")
    values = np.zeros(len(edge_pairs(n)), dtype=np.complex128)
    seen = set()
    is_complex = False
    for k, entry in enumerate(entries):
        if not isinstance(entry, list) or len(entry) not in (3, 4):
            raise InstanceError(f"entry {k} must be [i, j, re] or [i, j, re, im]")
        i, j = entry[0], entry[1]
        if not (_is_int(i) and _is_int(j)):
            raise InstanceError(f"entry {k}: vertex labels must be integers")
        if i == j:
            raise InstanceError(f"self-pair ({i},{j})")
        if not (1 <= i <= n and 1 <= j <= n):
            raise InstanceError(f"pair ({i},{j}) out of range 1..{n}")
        a, b = min(i, j), max(i, j)
        if (a, b) in seen:
            raise InstanceError(f"duplicate pair ({a},{b})")
        seen.add((a, b))
        parts = entry[2:]
        if not all(_is_number(x) for x in parts):
            raise InstanceError(f"pair ({a},{b}): value must be numeric")
        if not all(math.isfinite(x) for x in parts):
            raise InstanceError(f"non-finite value for pair ({a},{b})")
        if len(parts) == 2:
            is_complex = True
            values[edge_index(a - 1, b - 1, n)] = complex(parts[0], parts[1])
        else:
            values[edge_index(a - 1, b - 1, n)] = parts[0]
    for i, j in edge_pairs(n):
        if (i + 1, j + 1) not in seen:
            raise InstanceError(f"missing pair ({i + 1},{j + 1})")
    cert = certificate_from_json(data["b"], n) if data.get("b") is not None else None
    return Potential(n, values, is_complex), cert


def parse_instance(path) -> tuple[Potential, StabilityCertificate | None]:
    """Read and validate an instance file."""
    return instance_from_json(load_json(path))


def emit_instance(u: Potential, b: StabilityCertificate | None = None) -> dict:
    entries = []
    for (i, j), v in zip(edge_pairs(u.n), u.values.tolist()):
        entry = [i + 1, j + 1, v.real]
        if u.is_complex:
            entry.append(v.imag)
        entries.append(entry)
    data = {"n": u.n, "entries": entries}
    if b is not None:
        data["b"] = list(b.b)
    return data


def write_instance(path, u: Potential, b: StabilityCertificate | None = None) -> None:
    Path(path).write_text(dumps(emit_instance(u, b)) + "\n")


def instance_digest(u: Potential, b: StabilityCertificate | None = None) -> str:
    canonical = json.dumps(emit_instance(u, b), sort_keys=True, separators=(",", ":"))
    return "sha256:" + hashlib.sha256(canonical.encode()).hexdigest()


@dataclass(frozen=True)
class Distribution:
    """Edge-value law: ``uniform``, ``gaussian`` or ``complex-uniform``."""

    kind: str
    params: tuple[float, ...]

    def __post_init__(self):
        arity = {"uniform": 2, "gaussian": 2, "complex-uniform": 4}
        if self.kind not in arity:
            raise DomainError(f"unknown distribution {self.kind!r}; expected one of {sorted(arity)}")
        if len(self.params) != arity[self.kind]:
            raise DomainError(f"{self.kind} takes {arity[self.kind]} parameters, got {len(self.params)}")
        if not all(math.isfinite(p) for p in self.params):
            raise DomainError("distribution parameters must be finite")
        if self.kind == "gaussian":
            if self.params[1] < 0:
                raise DomainError(f"gaussian sigma must be >= 0, got {self.params[1]}")
        else:
            for lo, hi in zip(self.params[::2], self.params[1::2]):
                if lo > hi:
                    raise DomainError(f"invalid range [{lo}, {hi}]")

    @classmethod
    def parse(cls, text: str) -> Distribution:
        """Parse ``kind:p1,p2[,...]``, e.g. ``uniform:-2,3``."""
        m = re.fullmatch(r"\s*([a-z-]+)\s*(?::(.*))?", text)
        if not m:
            raise DomainError(f"cannot parse distribution {text!r}")
        try:
            params = tuple(float(p) for p in m.group(2).split(",")) if m.group(2) else ()
        except ValueError:
            raise DomainError(f"cannot parse distribution parameters in {text!r}") from None
        return cls(m.group(1), params)

    @property
    def is_complex(self) -> bool:
        return self.kind == "complex-uniform"

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        p = self.params
        if self.kind == "uniform":
            return rng.uniform(p[0], p[1], size)
        if self.kind == "gaussian":
            return rng.normal(p[0], p[1], size)
        re = rng.uniform(p[0], p[1], size)
        im = rng.uniform(p[2], p[3], size)
        return re + 1j * im

    def __str__(self):
        return f"{self.kind}:" + ",".join(repr(p) for p in self.params)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def spawn_rngs(seed: int, count: int) -> list[np.random.Generator]:
    """Independent per-trial streams split from one seed."""
    return [np.random.Generator(np.random.PCG64(s)) for s in np.random.SeedSequence(seed).spawn(count)]


def sample_potential(n: int, dist: Distribution, rng: np.random.Generator) -> Potential:
    return Potential(n, dist.sample(rng, len(edge_pairs(n))), dist.is_complex)


def generate_instance(n: int, distribution, seed: int) -> Potential:
    if isinstance(distribution, str):
        distribution = Distribution.parse(distribution)
    if not _is_int(n) or not 2 <= n <= MAX_POTENTIAL:
        raise DomainError(f"n = {n!r} out of range [2, {MAX_POTENTIAL}]")
    return sample_potential(n, distribution, make_rng(seed))


def _format_float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    text = format(x, ".17g")
    if not any(c in text for c in ".eEn"):
        text += ".0"
    return text


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON text with floats at 17 significant digits; non-finite floats become null."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _format_float(float(obj))
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(x, (int, float, np.number)) and not isinstance(x, bool) for x in obj):
            return "[" + ", ".join(dumps(x) for x in obj) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")
