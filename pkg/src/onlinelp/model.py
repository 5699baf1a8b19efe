"""Domain types for online allocation instances and run outcomes.

An instance is a fixed-capacity allocation problem: ``n`` columns arrive one
at a time, column ``t`` carries a reward ``pi_t >= 0`` and a consumption
vector ``a_t`` in ``[0, 1]^m``, and row ``i`` has capacity ``b_i > 0``.  The
multi-choice variant replaces the scalar decision with a pick among ``k``
options per arrival (reward vector ``f_t``, consumption matrix ``G_t``).

Columns are stored as dense arrays internally; :class:`Column` /
:class:`MultiColumn` are lightweight per-arrival views used by the streaming
API.  JSON serialization writes reals with 17 significant digits so files
round-trip bit-exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterator, Union

import numpy as np

from .errors import DimensionMismatch, ParseError

__all__ = [
    "Column",
    "Instance",
    "MultiColumn",
    "MultiInstance",
    "DualPrice",
    "RunResult",
    "MultiRunResult",
    "instance_to_json",
    "instance_from_json",
    "load_instance",
    "save_instance",
]


def _as_float_vector(x, name: str) -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1:
        raise DimensionMismatch(f"{name} must be one-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


@dataclass(frozen=True)
class Column:
    """One arrival: reward ``pi`` and per-row consumption ``a`` in [0, 1]^m."""

    pi: float
    a: np.ndarray

    def __post_init__(self):
        a = _as_float_vector(self.a, "a")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "pi", float(self.pi))
        if self.pi < 0:
            raise ValueError(f"column reward must be nonnegative, got {self.pi}")
        if a.size and (a.min() < 0.0 or a.max() > 1.0):
            raise ValueError("column consumption entries must lie in [0, 1]")


@dataclass(frozen=True)
class MultiColumn:
    """One multi-choice arrival: option rewards ``f`` (k,) and consumption ``G`` (m, k)."""

    f: np.ndarray
    G: np.ndarray

    def __post_init__(self):
        f = _as_float_vector(self.f, "f")
        G = np.asarray(self.G, dtype=np.float64)
        if G.ndim != 2:
            raise DimensionMismatch(f"G must be two-dimensional, got shape {G.shape}")
        if G.shape[1] != f.size:
            raise DimensionMismatch(
                f"G has {G.shape[1]} option columns but f has {f.size} entries"
            )
        if not np.all(np.isfinite(G)):
            raise ValueError("G contains non-finite entries")
        if f.size and f.min() < 0.0:
            raise ValueError("option rewards must be nonnegative")
        if G.size and (G.min() < 0.0 or G.max() > 1.0):
            raise ValueError("option consumption entries must lie in [0, 1]")
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "G", G)

    @property
    def k(self) -> int:
        return self.f.size


@dataclass
class Instance:
    """A complete scalar-decision instance.

    Attributes:
        m: number of capacity rows.
        n: number of columns (arrivals).
        b: capacities, shape (m,), strictly positive.
        rewards: per-column rewards, shape (n,), nonnegative.
        consumption: per-column consumption, shape (n, m), entries in [0, 1].
        meta: optional free-form provenance (generator name, parameters, seed).
    """

    m: int
    n: int
    b: np.ndarray
    rewards: np.ndarray
    consumption: np.ndarray
    meta: dict | None = None

    def __post_init__(self):
        self.b = _as_float_vector(self.b, "b")
        self.rewards = _as_float_vector(self.rewards, "rewards")
        self.consumption = np.asarray(self.consumption, dtype=np.float64)
        if self.b.shape != (self.m,):
            raise DimensionMismatch(f"b has shape {self.b.shape}, expected ({self.m},)")
        if self.rewards.shape != (self.n,):
            raise DimensionMismatch(
                f"rewards has shape {self.rewards.shape}, expected ({self.n},)"
            )
        if self.consumption.shape != (self.n, self.m):
            raise DimensionMismatch(
                f"consumption has shape {self.consumption.shape}, expected ({self.n}, {self.m})"
            )
        if self.n < 1:
            raise ValueError("instance needs at least one column")
        if np.any(self.b <= 0.0):
            raise ValueError("capacities must be strictly positive")
        if self.rewards.size and self.rewards.min() < 0.0:
            raise ValueError("rewards must be nonnegative")
        if self.consumption.size and (
            self.consumption.min() < 0.0 or self.consumption.max() > 1.0
        ):
            raise ValueError("consumption entries must lie in [0, 1]")
        if not np.all(np.isfinite(self.consumption)):
            raise ValueError("consumption contains non-finite entries")

    @classmethod
    def from_columns(cls, b, columns: list[Column], meta: dict | None = None) -> "Instance":
        b = _as_float_vector(b, "b")
        n = len(columns)
        if n == 0:
            raise ValueError("instance needs at least one column")
        rewards = np.array([c.pi for c in columns], dtype=np.float64)
        consumption = np.stack([c.a for c in columns]).astype(np.float64)
        return cls(m=b.size, n=n, b=b, rewards=rewards, consumption=consumption, meta=meta)

    def column(self, t: int) -> Column:
        """Column at position ``t`` (0-based)."""
        return Column(pi=float(self.rewards[t]), a=self.consumption[t].copy())

    def columns(self) -> Iterator[Column]:
        """Iterate columns in arrival order."""
        for t in range(self.n):
            yield self.column(t)


@dataclass
class MultiInstance:
    """A complete multi-choice instance.

    ``rewards`` has shape (n, k) and ``consumption`` shape (n, m, k); column
    ``t`` offers ``k`` options, option ``j`` paying ``rewards[t, j]`` and
    consuming ``consumption[t, :, j]``.  At most one option per arrival may
    be chosen.
    """

    m: int
    n: int
    k: int
    b: np.ndarray
    rewards: np.ndarray
    consumption: np.ndarray
    meta: dict | None = None

    def __post_init__(self):
        self.b = _as_float_vector(self.b, "b")
        self.rewards = np.asarray(self.rewards, dtype=np.float64)
        self.consumption = np.asarray(self.consumption, dtype=np.float64)
        if self.b.shape != (self.m,):
            raise DimensionMismatch(f"b has shape {self.b.shape}, expected ({self.m},)")
        if self.rewards.shape != (self.n, self.k):
            raise DimensionMismatch(
                f"rewards has shape {self.rewards.shape}, expected ({self.n}, {self.k})"
            )
        if self.consumption.shape != (self.n, self.m, self.k):
            raise DimensionMismatch(
                "consumption has shape "
                f"{self.consumption.shape}, expected ({self.n}, {self.m}, {self.k})"
            )
        if self.n < 1 or self.k < 1:
            raise ValueError("instance needs at least one column and one option")
        if np.any(self.b <= 0.0):
            raise ValueError("capacities must be strictly positive")
        if not (np.all(np.isfinite(self.rewards)) and np.all(np.isfinite(self.consumption))):
            raise ValueError("instance contains non-finite entries")
        if self.rewards.size and self.rewards.min() < 0.0:
            raise ValueError("rewards must be nonnegative")
        if self.consumption.size and (
            self.consumption.min() < 0.0 or self.consumption.max() > 1.0
        ):
            raise ValueError("consumption entries must lie in [0, 1]")

    def column(self, t: int) -> MultiColumn:
        return MultiColumn(f=self.rewards[t].copy(), G=self.consumption[t].copy())

    def columns(self) -> Iterator[MultiColumn]:
        for t in range(self.n):
            yield self.column(t)


AnyInstance = Union[Instance, MultiInstance]


@dataclass(frozen=True)
class DualPrice:
    """A nonnegative price vector, one entry per capacity row."""

    p: np.ndarray

    def __post_init__(self):
        p = _as_float_vector(self.p, "p")
        if p.size and p.min() < 0.0:
            raise ValueError("dual prices must be nonnegative")
        object.__setattr__(self, "p", p)

    @property
    def m(self) -> int:
        return self.p.size


@dataclass
class RunResult:
    """Outcome of one online run on a scalar-decision instance.

    ``decisions`` holds 0/1 per arrival; ``fill`` is the consumed capacity per
    row (never exceeding ``b``, enforced by the capacity guard during the run);
    ``prices_used`` logs each learned price as ``(ell, DualPrice)`` where
    ``ell`` is the number of columns the price was learned from.
    """

    decisions: np.ndarray
    objective: float
    fill: np.ndarray
    prices_used: list[tuple[int, DualPrice]] = field(default_factory=list)

    @property
    def accepted(self) -> int:
        return int(self.decisions.sum())


@dataclass
class MultiRunResult:
    """Outcome of one online run on a multi-choice instance.

    ``choices[t]`` is the chosen option index, or -1 when the arrival was
    declined.  ``objective`` is the summed reward of the chosen options.
    """

    choices: np.ndarray
    objective: float
    fill: np.ndarray
    prices_used: list[tuple[int, DualPrice]] = field(default_factory=list)

    @property
    def accepted(self) -> int:
        return int((self.choices >= 0).sum())

    def decisions_onehot(self, k: int) -> np.ndarray:
        """Decisions as an (n, k) 0/1 array."""
        out = np.zeros((self.choices.size, k), dtype=np.int8)
        taken = np.flatnonzero(self.choices >= 0)
        out[taken, self.choices[taken]] = 1
        return out


# ---------------------------------------------------------------------------
# JSON serialization
# ---------------------------------------------------------------------------
# Reals are written with 17 significant digits, enough for float64 values to
# survive a write/read cycle bit-exactly, and the writer is deterministic so
# regenerating a file yields identical bytes.


def _real(x: float) -> str:
    return format(float(x), ".17g")

def _real_list(xs) -> str:
    return "[" + ", ".join(_real(v) for v in xs) + "]"


def instance_to_json(inst: AnyInstance) -> str:
    """Serialize an instance to the interchange JSON format."""
    lines = ["{"]
    lines.append(f'  "m": {inst.m},')
    lines.append(f'  "n": {inst.n},')
    if isinstance(inst, MultiInstance):
        lines.append(f'  "k": {inst.k},')
    lines.append(f'  "b": {_real_list(inst.b)},')
    col_lines = []
    if isinstance(inst, MultiInstance):
        for t in range(inst.n):
            g_rows = ", ".join(_real_list(inst.consumption[t, i]) for i in range(inst.m))
            col_lines.append(
                '    {"f": ' + _real_list(inst.rewards[t]) + ', "G": [' + g_rows + "]}"
            )
    else:
        for t in range(inst.n):
            col_lines.append(
                '    {"pi": ' + _real(inst.rewards[t])
                + ', "a": ' + _real_list(inst.consumption[t]) + "}"
            )
    body = ",\n".join(col_lines)
    meta_suffix = ""
    if inst.meta:
        meta_suffix = ',\n  "meta": ' + json.dumps(inst.meta, sort_keys=True)
    lines.append('  "columns": [\n' + body + "\n  ]" + meta_suffix)
    lines.append("}")
    return "\n".join(lines) + "\n"


def instance_from_json(text: str) -> AnyInstance:
    """Parse the interchange JSON format into an instance.

    Raises ParseError on malformed JSON or schema violations.
    """
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise ParseError("top-level JSON value must be an object")
    for key in ("m", "n", "b", "columns"):
        if key not in obj:
            raise ParseError(f"missing required key {key!r}")
    m, n = obj["m"], obj["n"]
    if not (isinstance(m, int) and isinstance(n, int)):
        raise ParseError("m and n must be integers")
    cols = obj["columns"]
    if not isinstance(cols, list) or len(cols) != n:
        raise ParseError(f"columns must be a list of length n={n}")
    meta = obj.get("meta")
    try:
        if "k" in obj:
            k = obj["k"]
            if not isinstance(k, int):
                raise ParseError("k must be an integer")
            rewards = np.empty((n, k), dtype=np.float64)
            consumption = np.empty((n, m, k), dtype=np.float64)
            for t, col in enumerate(cols):
                rewards[t] = np.asarray(col["f"], dtype=np.float64)
                consumption[t] = np.asarray(col["G"], dtype=np.float64)
            return MultiInstance(
                m=m, n=n, k=k, b=np.asarray(obj["b"], dtype=np.float64),
                rewards=rewards, consumption=consumption, meta=meta,
            )
        rewards = np.empty(n, dtype=np.float64)
        consumption = np.empty((n, m), dtype=np.float64)
        for t, col in enumerate(cols):
            rewards[t] = float(col["pi"])
            consumption[t] = np.asarray(col["a"], dtype=np.float64)
        return Instance(
            m=m, n=n, b=np.asarray(obj["b"], dtype=np.float64),
            rewards=rewards, consumption=consumption, meta=meta,
        )
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError, DimensionMismatch) as exc:
        raise ParseError(f"instance schema violation: {exc}") from exc


def save_instance(inst: AnyInstance, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(instance_to_json(inst))


def load_instance(path) -> AnyInstance:
    with open(path, "r", encoding="utf-8") as fh:
        return instance_from_json(fh.read())
