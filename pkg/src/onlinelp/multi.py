"""Multi-choice online allocation: pick one of k options per arrival.

Arrival ``t`` offers option rewards ``f_t`` (length k) and a consumption
matrix ``G_t`` (m rows by k options); at most one option may be taken.  The
pricing policy mirrors the scalar one: learn row prices from a prefix LP,
then take the option with the largest priced surplus ``f_j - p' G[:, j]``
when that surplus is positive, subject to the exact capacity guard.

The prefix LP flattens the first ``ell`` arrivals into one boxed LP: one
scalar variable per (arrival, option) pair, the m resource rows scaled and
shrunk exactly as in the scalar case, plus one "pick at most one" row per
arrival.  Only the m resource-row duals feed the allocation rule.  For
k = 1 the pick-one rows literally restate the 0..1 box and are omitted,
which makes the k = 1 solve identical to the scalar path, LP for LP.
"""

from __future__ import annotations

import numpy as np

from .errors import AllZeroBids, DimensionMismatch
from .engine import _learning_window, geometric_schedule, h_factor
from .lp import BoxedLp, solve_boxed_lp
from .model import DualPrice, MultiColumn, MultiInstance, MultiRunResult

__all__ = [
    "MultiDecision",
    "multi_allocation_rule",
    "flatten_lp",
    "learn_price_multi",
    "run_dpa_multi",
    "adwords_to_multi",
]

# A multi-choice decision: the chosen option index, or None to decline.
MultiDecision = int | None


def _priced_consumption(pvec: np.ndarray, G: np.ndarray) -> np.ndarray:
    # Per-option dot products, each on a contiguous copy of the option's
    # column so the k = 1 case computes exactly what the scalar rule does.
    k = G.shape[1]
    out = np.empty(k)
    for j in range(k):
        out[j] = float(np.dot(pvec, np.ascontiguousarray(G[:, j])))
    return out


def _choose(pvec: np.ndarray, f: np.ndarray, G: np.ndarray) -> MultiDecision:
    priced = _priced_consumption(pvec, G)
    winners = f > priced  # strict: ties decline, as in the scalar rule
    if not winners.any():
        return None
    surplus = np.where(winners, f - priced, -np.inf)
    return int(np.argmax(surplus))  # first maximum, so ties pick the lowest index


def multi_allocation_rule(price: DualPrice, col: MultiColumn) -> MultiDecision:
    """Option with the largest positive priced surplus, or None if there is none.

    Ties on the surplus go to the lowest option index; an option priced
    exactly at its reward never wins.
    """
    if price.m != col.G.shape[0]:
        raise DimensionMismatch(
            f"price has {price.m} rows, column consumption has {col.G.shape[0]}"
        )
    return _choose(price.p, col.f, col.G)


def _flatten(rewards: np.ndarray, consumption: np.ndarray, d_res: np.ndarray) -> BoxedLp:
    ell, m, k = consumption.shape[0], consumption.shape[1], consumption.shape[2]
    c = rewards.reshape(-1)  # variable (t, j) lands at position t*k + j
    if k == 1:
        return BoxedLp(
            c=c, A=np.ascontiguousarray(consumption[:, :, 0].T), d=d_res
        )
    A = np.zeros((m + ell, ell * k))
    A[:m, :] = np.transpose(consumption, (1, 0, 2)).reshape(m, ell * k)
    rows = np.repeat(np.arange(ell), k)
    A[m + rows, np.arange(ell * k)] = 1.0
    d = np.concatenate([d_res, np.ones(ell)])
    return BoxedLp(c=c, A=A, d=d)


def flatten_lp(minst: MultiInstance, ell: int | None = None, shrink: float = 0.0) -> BoxedLp:
    """Flatten the first ``ell`` arrivals (default all) into one boxed LP.

    The resource rows get capacities (1 - shrink) * (ell / n) * b; with
    ``ell = n`` and ``shrink = 0`` this is the full offline LP.
    """
    if ell is None:
        ell = minst.n
    if not 1 <= ell <= minst.n:
        raise ValueError(f"ell must be in [1, n], got ell={ell}, n={minst.n}")
    if not 0.0 <= shrink < 1.0:
        raise ValueError(f"shrink must be in [0, 1), got {shrink}")
    d_res = (1.0 - shrink) * (ell / minst.n) * minst.b
    return _flatten(minst.rewards[:ell], minst.consumption[:ell], d_res)


def learn_price_multi(minst: MultiInstance, ell: int, shrink: float) -> DualPrice:
    """Resource-row duals of the flattened prefix LP (pick-one rows not priced)."""
    sol = solve_boxed_lp(flatten_lp(minst, ell, shrink))
    return DualPrice(p=np.maximum(sol.dual[: minst.m], 0.0))


def run_dpa_multi(minst: MultiInstance, eps: float) -> MultiRunResult:
    """Dynamic pricing over multi-choice arrivals.

    Same protocol as run_dpa: decline the first ceil(n*eps) arrivals,
    re-learn prices at geometrically spaced points with the h_factor
    shrink, and between updates pick each arrival's best surplus option if
    it is positive and fits the remaining capacity in every row.
    """
    n, m = minst.n, minst.m
    t0 = _learning_window(n, eps)
    points = geometric_schedule(n, eps)
    remaining = minst.b.copy()
    choices = np.full(n, -1, dtype=np.int64)
    prices_used: list[tuple[int, DualPrice]] = []
    pvec = None
    next_point = 0
    for t in range(1, n + 1):
        if t <= t0:
            continue
        while next_point < len(points) and points[next_point] < t:
            ell = points[next_point]
            price = learn_price_multi(minst, ell, h_factor(ell, n, eps))
            prices_used.append((ell, price))
            pvec = price.p
            next_point += 1
        G = minst.consumption[t - 1]
        r = _choose(pvec, minst.rewards[t - 1], G)
        if r is not None and bool(np.all(G[:, r] <= remaining)):
            choices[t - 1] = r
            remaining -= G[:, r]
    fill = minst.b - remaining
    onehot = np.zeros((n, minst.k))
    taken = np.flatnonzero(choices >= 0)
    onehot[taken, choices[taken]] = 1.0
    objective = float(np.dot(minst.rewards.reshape(-1), onehot.reshape(-1)))
    return MultiRunResult(
        choices=choices, objective=objective, fill=fill, prices_used=prices_used
    )


def adwords_to_multi(bids, budgets) -> MultiInstance:
    """Map an n-by-m bid table with per-bidder budgets to a multi-choice instance.

    Query ``t`` becomes an arrival with k = m options (one per bidder):
    option ``i`` pays ``bids[t, i]`` in original units and consumes
    ``bids[t, i] / max_bid_i`` of bidder i's budget row, where ``max_bid_i``
    is bidder i's largest bid anywhere in the table.  Budget rows are scaled
    by the same factor so all consumption lands in [0, 1].  The scale
    factors are recorded in the instance metadata.

    Raises AllZeroBids if the whole table is zero.  Bidders who never bid
    keep their budget row unscaled (their options are never worth taking).
    """
    bids = np.asarray(bids, dtype=np.float64)
    budgets = np.asarray(budgets, dtype=np.float64)
    if bids.ndim != 2:
        raise ValueError(f"bids must be an n-by-m table, got shape {bids.shape}")
    n, m = bids.shape
    if budgets.shape != (m,):
        raise ValueError(f"budgets has shape {budgets.shape}, expected ({m},)")
    if not np.all(np.isfinite(bids)) or bids.min() < 0.0:
        raise ValueError("bids must be finite and nonnegative")
    if bids.max() <= 0.0:
        raise AllZeroBids("every bid in the table is zero")
    scale = bids.max(axis=0)
    scale = np.where(scale > 0.0, scale, 1.0)
    consumption = np.zeros((n, m, m))
    idx = np.arange(m)
    consumption[:, idx, idx] = bids / scale
    return MultiInstance(
        m=m, n=n, k=m, b=budgets / scale,
        rewards=bids.copy(), consumption=consumption,
        meta={
            "kind": "adwords",
            "row_scale": [float(v) for v in scale],
            "budgets_original": [float(v) for v in budgets],
        },
    )
