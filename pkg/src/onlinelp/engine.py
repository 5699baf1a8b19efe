"""Threshold policies for online allocation with learned dual prices.

Two policies are provided, both operating under a random-arrival-order
model and both keeping every capacity constraint satisfied at every step:

* ``run_ola``: learn a price vector once, from the first ``ceil(n*eps)``
  arrivals (all declined), by solving a scaled-down LP over that prefix,
  then accept any later arrival whose reward beats its priced consumption
  and still fits in the remaining capacity.
* ``run_dpa``: re-learn the price at geometrically spaced points
  ``ceil(2^r * n * eps)``, shrinking the prefix LP's capacities by
  ``h = eps * sqrt(n / ell)`` so early, noisier prices are more
  conservative.

``step`` exposes the same logic one arrival at a time for streaming use;
folding it over a column sequence reproduces the batch runs exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateWindow, DimensionMismatch, NonpositiveReward, StreamExhausted
from .lp import BoxedLp, solve_boxed_lp
from .model import Column, DualPrice, Instance, MultiInstance, RunResult

__all__ = [
    "allocation_rule",
    "h_factor",
    "geometric_schedule",
    "sample_lp",
    "learn_price",
    "run_ola",
    "run_dpa",
    "OnlineState",
    "step",
    "ConditionReport",
    "check_input_condition",
]


def _ceil_snap(x: float) -> int:
    """Ceiling with a 1e-9 relative snap toward the nearest integer.

    Guards schedule arithmetic against one-ulp drift in products like
    n * eps (e.g. 100 * 0.07) without changing any exactly-representable
    case.
    """
    nearest = round(x)
    if abs(x - nearest) <= 1e-9 * max(1.0, abs(x)):
        return int(nearest)
    return int(math.ceil(x))


def _learning_window(n: int, eps: float) -> int:
    if not 0.0 < eps:
        raise ValueError(f"eps must be positive, got {eps}")
    prod = n * eps
    s = _ceil_snap(prod)
    if prod < 1.0 - 1e-9:
        raise DegenerateWindow(f"n*eps = {prod:.6g} < 1 leaves no columns to learn from")
    if s >= n:
        raise DegenerateWindow(f"ceil(n*eps) = {s} >= n = {n} leaves no decisions to make")
    return s


def h_factor(ell: int, n: int, eps: float) -> float:
    """Capacity shrink used when learning from the first ``ell`` of ``n`` columns.

    Equal to eps * sqrt(n / ell): largest (sqrt(1/eps) * eps) at the first
    update point ell = n*eps, decaying to eps at ell = n.
    """
    if not 1 <= ell <= n:
        raise ValueError(f"ell must be in [1, n], got ell={ell}, n={n}")
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must be in (0, 1), got {eps}")
    return eps * math.sqrt(n / ell)


def geometric_schedule(n: int, eps: float) -> list[int]:
    """Price-update points ceil(2^r * n * eps) for r = 0, 1, ... while < n."""
    _learning_window(n, eps)
    base = n * eps
    points: list[int] = []
    r = 0
    while True:
        ell = _ceil_snap(base * (1 << r))
        if ell >= n:
            break
        points.append(ell)
        r += 1
    return sorted(set(points))


def _accepts(pvec: np.ndarray, pi: float, a: np.ndarray) -> bool:
    # Strict inequality: a column priced exactly at its reward is declined.
    return pi > float(np.dot(pvec, a))


def allocation_rule(price: DualPrice, col: Column) -> int:
    """1 if the column's reward strictly beats its consumption priced at ``price``."""
    if price.m != col.a.size:
        raise DimensionMismatch(
            f"price has {price.m} rows, column consumption has {col.a.size}"
        )
    return 1 if _accepts(price.p, col.pi, col.a) else 0


def sample_lp(inst: Instance, ell: int, shrink: float) -> BoxedLp:
    """The prefix LP over columns 1..ell with capacities (1-shrink)*(ell/n)*b."""
    if not 1 <= ell <= inst.n:
        raise ValueError(f"ell must be in [1, n], got ell={ell}, n={inst.n}")
    if not 0.0 <= shrink < 1.0:
        raise ValueError(f"shrink must be in [0, 1), got {shrink}")
    return _prefix_lp(inst.rewards[:ell], inst.consumption[:ell], inst.b, inst.n, ell, shrink)


def _prefix_lp(rewards, consumption, b, n, ell, shrink) -> BoxedLp:
    d = (1.0 - shrink) * (ell / n) * b
    return BoxedLp(c=rewards, A=np.ascontiguousarray(consumption.T), d=d)


def _learn(rewards, consumption, b, n, ell, shrink) -> DualPrice:
    lp = _prefix_lp(rewards, consumption, b, n, ell, shrink)
    sol = solve_boxed_lp(lp)
    return DualPrice(p=np.maximum(sol.dual, 0.0))


def learn_price(inst: Instance, ell: int, shrink: float) -> DualPrice:
    """Dual prices of the prefix LP (negatives from roundoff clipped to zero).

    Args:
        inst: the instance whose first ``ell`` columns are visible.
        ell: prefix length, 1 <= ell <= n.
        shrink: capacity shrink factor in [0, 1); the prefix LP right-hand
            side is (1 - shrink) * (ell / n) * b.
    """
    if not 1 <= ell <= inst.n:
        raise ValueError(f"ell must be in [1, n], got ell={ell}, n={inst.n}")
    if not 0.0 <= shrink < 1.0:
        raise ValueError(f"shrink must be in [0, 1), got {shrink}")
    return _learn(inst.rewards[:ell], inst.consumption[:ell], inst.b, inst.n, ell, shrink)


def _run_scalar(inst: Instance, eps: float, mode: str) -> RunResult:
    t0 = _learning_window(inst.n, eps)
    points = [t0] if mode == "ola" else geometric_schedule(inst.n, eps)
    remaining = inst.b.copy()
    decisions = np.zeros(inst.n, dtype=np.int8)
    prices_used: list[tuple[int, DualPrice]] = []
    pvec = None
    next_point = 0
    for t in range(1, inst.n + 1):
        if t <= t0:
            continue  # learning window: decline everything
        while next_point < len(points) and points[next_point] < t:
            ell = points[next_point]
            shrink = eps if mode == "ola" else h_factor(ell, inst.n, eps)
            price = _learn(
                inst.rewards[:ell], inst.consumption[:ell], inst.b, inst.n, ell, shrink
            )
            prices_used.append((ell, price))
            pvec = price.p
            next_point += 1
        a = inst.consumption[t - 1]
        if _accepts(pvec, float(inst.rewards[t - 1]), a) and bool(np.all(a <= remaining)):
            decisions[t - 1] = 1
            remaining -= a
    fill = inst.b - remaining
    objective = float(np.dot(inst.rewards, decisions.astype(np.float64)))
    return RunResult(decisions=decisions, objective=objective, fill=fill, prices_used=prices_used)


def run_ola(inst: Instance, eps: float) -> RunResult:
    """One-time learning: a single price from the first ceil(n*eps) columns.

    Those columns are declined; each later column is accepted when the rule
    fires and its consumption fits every row's remaining capacity (checked
    exactly, so the fill can never exceed b).
    """
    return _run_scalar(inst, eps, "ola")


def run_dpa(inst: Instance, eps: float) -> RunResult:
    """Dynamic pricing: prices re-learned at geometrically spaced points.

    The price learned from the first ``ell`` columns governs arrivals
    ``ell+1 .. 2*ell`` (the last one up to n); the prefix LP's capacities
    carry the h_factor shrink, so early prices over-protect capacity while
    little has been observed.
    """
    return _run_scalar(inst, eps, "dpa")


@dataclass
class OnlineState:
    """Mutable state for the streaming API; single-owner, advance with step().

    Tracks remaining capacity, the arrival count, the current price, and the
    columns seen so far (needed to re-learn prices at update points).
    """

    m: int
    n: int
    b: np.ndarray
    eps: float
    mode: str
    schedule: list[int]
    remaining: np.ndarray
    t: int = 0
    current_price: DualPrice | None = None
    decisions: list[int] = field(default_factory=list)
    prices_used: list[tuple[int, DualPrice]] = field(default_factory=list)
    _seen_pi: list[float] = field(default_factory=list)
    _seen_a: list[np.ndarray] = field(default_factory=list)
    _next_point: int = 0

    @classmethod
    def start(cls, m: int, n: int, b, eps: float, mode: str = "dpa") -> "OnlineState":
        if mode not in ("ola", "dpa"):
            raise ValueError(f"mode must be 'ola' or 'dpa', got {mode!r}")
        b = np.asarray(b, dtype=np.float64)
        if b.shape != (m,):
            raise DimensionMismatch(f"b has shape {b.shape}, expected ({m},)")
        t0 = _learning_window(n, eps)
        schedule = [t0] if mode == "ola" else geometric_schedule(n, eps)
        return cls(
            m=m, n=n, b=b.copy(), eps=eps, mode=mode,
            schedule=schedule, remaining=b.copy(),
        )

    @property
    def window(self) -> int:
        return self.schedule[0]


def step(state: OnlineState, col: Column) -> tuple[int, OnlineState]:
    """Process one arrival and return (decision, state).

    The state is advanced in place and returned for convenience.  Raises
    StreamExhausted once n arrivals have been processed.  Folding step over
    an instance's columns reproduces run_ola / run_dpa decision for
    decision.
    """
    if state.t >= state.n:
        raise StreamExhausted(f"all {state.n} arrivals already processed")
    if col.a.size != state.m:
        raise DimensionMismatch(f"column has {col.a.size} rows, state has {state.m}")
    state._seen_pi.append(col.pi)
    state._seen_a.append(col.a.copy())
    t = state.t + 1
    decision = 0
    if t > state.window:
        while state._next_point < len(state.schedule) and state.schedule[state._next_point] < t:
            ell = state.schedule[state._next_point]
            shrink = state.eps if state.mode == "ola" else h_factor(ell, state.n, state.eps)
            price = _learn(
                np.array(state._seen_pi[:ell], dtype=np.float64),
                np.vstack(state._seen_a[:ell]),
                state.b, state.n, ell, shrink,
            )
            state.prices_used.append((ell, price))
            state.current_price = price
            state._next_point += 1
        if _accepts(state.current_price.p, col.pi, col.a) and bool(
            np.all(col.a <= state.remaining)
        ):
            decision = 1
            state.remaining -= col.a
    state.t = t
    state.decisions.append(decision)
    return decision, state


@dataclass(frozen=True)
class ConditionReport:
    """Outcome of a capacity-size check: advisory only, never blocks a run."""

    variant: str
    satisfied: bool
    lhs: float
    rhs: float


def _dpa_threshold(m: int, n: int, eps: float) -> float:
    return 20.0 * m * math.log(n) / eps**2


def _ola_threshold(m: int, n: int, eps: float) -> float:
    return 6.0 * m * math.log(n / eps) / eps**3


def _per_row_threshold(m: int, n: int, eps: float) -> float:
    # The option count folds into the log term; it is pinned at 1 here.
    return 20.0 * m * math.log(n / eps) / eps**2


def check_input_condition(
    inst: Instance | MultiInstance, eps: float, variant: str = "dpa"
) -> ConditionReport:
    """Compare capacities against the size the guarantees ask for.

    Variants (all use natural log; B = min_i b_i except per_row):

    * ``ola``:       B >= 6 m log(n/eps) / eps^3
    * ``dpa``:       B >= 20 m log(n) / eps^2
    * ``corollary``: B >= 20 (m L + m^2 log(1/eps)) / eps^2 with
      L = log log(max reward / min reward), inner log clamped at 1; all
      rewards must be strictly positive (NonpositiveReward otherwise).
    * ``per_row``:   b_i / abar_i >= 20 m log(n/eps) / eps^2 for every row,
      where abar_i is the row's largest consumption entry; rows that are
      never consumed pass trivially.  lhs reports the worst row.

    The report is diagnostic: runs proceed regardless of the outcome.
    """
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must be in (0, 1), got {eps}")
    m, n = inst.m, inst.n
    if variant == "ola":
        return ConditionReport(
            variant, float(inst.b.min()) >= _ola_threshold(m, n, eps),
            float(inst.b.min()), _ola_threshold(m, n, eps),
        )
    if variant == "dpa":
        rhs = _dpa_threshold(m, n, eps)
        lhs = float(inst.b.min())
        return ConditionReport(variant, lhs >= rhs, lhs, rhs)
    if variant == "corollary":
        rewards = inst.rewards
        if float(rewards.min()) <= 0.0:
            raise NonpositiveReward("corollary check needs strictly positive rewards")
        ratio = float(rewards.max() / rewards.min())
        lam = math.log(max(math.log(ratio), 1.0))
        rhs = 20.0 * (m * lam + m * m * math.log(1.0 / eps)) / eps**2
        lhs = float(inst.b.min())
        return ConditionReport(variant, lhs >= rhs, lhs, rhs)
    if variant == "per_row":
        if isinstance(inst, MultiInstance):
            abar = inst.consumption.max(axis=(0, 2))
        else:
            abar = inst.consumption.max(axis=0)
        with np.errstate(divide="ignore"):
            per_row = np.where(abar > 0.0, inst.b / np.where(abar > 0.0, abar, 1.0), np.inf)
        rhs = _per_row_threshold(m, n, eps)
        lhs = float(per_row.min())
        return ConditionReport(variant, bool(lhs >= rhs), lhs, rhs)
    raise ValueError(f"unknown variant {variant!r}")
