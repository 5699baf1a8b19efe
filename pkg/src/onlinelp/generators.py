"""Seeded instance families for experiments and benchmarks.

Four families: network-routing style 0/1 consumption columns, single-knapsack
"secretary" columns, adwords bid tables (converted to multi-choice
instances), and a yield-management stream with Poisson arrival counts.  All
randomness flows through ``numpy.random.default_rng(seed)``, so every family
regenerates bit-identically for a fixed seed, and each instance records its
generating parameters in ``meta``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BadSpec
from .model import Instance, MultiInstance
from .multi import adwords_to_multi

__all__ = [
    "GenSpec",
    "generate",
    "gen_routing",
    "gen_secretary",
    "gen_adwords",
    "gen_yield",
    "shuffle",
]


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise BadSpec(msg)


def gen_routing(
    m: int,
    n: int,
    q: float,
    capacity: float,
    reward_lo: float = 0.5,
    reward_hi: float = 1.5,
    seed: int = 0,
) -> Instance:
    """Columns with Bernoulli(q) 0/1 consumption per row and uniform rewards.

    Every column uses at least one row: all-zero draws are redrawn, so the
    per-entry mean conditional on inclusion is q / (1 - (1-q)^m), not q.
    """
    _require(m >= 1 and n >= 1, f"need m >= 1 and n >= 1, got m={m}, n={n}")
    _require(0.0 < q <= 1.0, f"q must be in (0, 1], got {q}")
    _require(capacity > 0.0, f"capacity must be positive, got {capacity}")
    _require(0.0 <= reward_lo <= reward_hi, "need 0 <= reward_lo <= reward_hi")
    rng = np.random.default_rng(seed)
    paths = (rng.random((n, m)) < q).astype(np.float64)
    while True:
        empty = np.flatnonzero(paths.sum(axis=1) == 0.0)
        if empty.size == 0:
            break
        paths[empty] = (rng.random((empty.size, m)) < q).astype(np.float64)
    rewards = rng.uniform(reward_lo, reward_hi, n)
    return Instance(
        m=m, n=n, b=np.full(m, float(capacity)),
        rewards=rewards, consumption=paths,
        meta={
            "kind": "routing", "m": m, "n": n, "q": q, "capacity": capacity,
            "reward_lo": reward_lo, "reward_hi": reward_hi, "seed": seed,
        },
    )


def gen_secretary(
    n: int,
    k: int,
    reward_dist: str = "uniform",
    reward_lo: float = 0.0,
    reward_hi: float = 1.0,
    sigma: float = 3.0,
    seed: int = 0,
) -> Instance:
    """Single row, unit consumption, capacity k: choose at most k of n rewards.

    ``reward_dist`` is "uniform" on [reward_lo, reward_hi] or "heavy_tail"
    (lognormal with the given sigma), the latter concentrating most of the
    optimal value in a few columns.
    """
    _require(n >= 1, f"need n >= 1, got {n}")
    _require(1 <= k <= n, f"need 1 <= k <= n, got k={k}, n={n}")
    rng = np.random.default_rng(seed)
    if reward_dist == "uniform":
        _require(0.0 <= reward_lo <= reward_hi, "need 0 <= reward_lo <= reward_hi")
        rewards = rng.uniform(reward_lo, reward_hi, n)
    elif reward_dist == "heavy_tail":
        _require(sigma > 0.0, f"sigma must be positive, got {sigma}")
        rewards = rng.lognormal(0.0, sigma, n)
    else:
        raise BadSpec(f"unknown reward_dist {reward_dist!r}")
    return Instance(
        m=1, n=n, b=np.array([float(k)]),
        rewards=rewards, consumption=np.ones((n, 1)),
        meta={
            "kind": "secretary", "n": n, "k": k, "reward_dist": reward_dist,
            "reward_lo": reward_lo, "reward_hi": reward_hi, "sigma": sigma,
            "seed": seed,
        },
    )


def gen_adwords(
    n: int,
    m: int,
    bid_lo: float = 0.1,
    bid_hi: float = 1.0,
    budget_rule: str = "fraction",
    budget: float = 0.3,
    condition_eps: float = 0.1,
    seed: int = 0,
) -> tuple[np.ndarray, np.ndarray]:
    """An n-by-m uniform bid table plus per-bidder budgets.

    budget_rule:
      * "fraction": bidder i gets ``budget * (n/m) * mean_bid_i``, a binding
        budget when ``budget`` is well under 1.
      * "meet" / "miss": budgets sized just above / well below the
        per-bidder capacity threshold that the theory asks for at
        ``condition_eps`` (the stricter of m*log(m*n/eps)/eps^2 and the
        per_row check's 20*m*log(n/eps)/eps^2, times the bidder's max bid).

    Returns the raw (bids, budgets) pair; feed it to adwords_to_multi to get
    a runnable instance.
    """
    _require(n >= 1 and m >= 1, f"need n >= 1 and m >= 1, got n={n}, m={m}")
    _require(0.0 <= bid_lo <= bid_hi, "need 0 <= bid_lo <= bid_hi")
    _require(0.0 < condition_eps < 1.0, f"condition_eps must be in (0, 1), got {condition_eps}")
    rng = np.random.default_rng(seed)
    bids = rng.uniform(bid_lo, bid_hi, (n, m))
    if budget_rule == "fraction":
        _require(budget > 0.0, f"budget fraction must be positive, got {budget}")
        budgets = budget * (n / m) * bids.mean(axis=0)
    elif budget_rule in ("meet", "miss"):
        eps = condition_eps
        per_unit = max(
            m * math.log(m * n / eps) / eps**2,
            20.0 * m * math.log(n / eps) / eps**2,
        )
        factor = 1.05 if budget_rule == "meet" else 0.25
        budgets = factor * per_unit * bids.max(axis=0)
    else:
        raise BadSpec(f"unknown budget_rule {budget_rule!r}")
    return bids, budgets


def gen_yield(
    horizon: float,
    rate: float,
    n_products: int = 5,
    n_resources: int = 3,
    capacity: float = 50.0,
    price_lo: float = 0.5,
    price_hi: float = 1.5,
    seed: int = 0,
) -> Instance:
    """Poisson-many requests over a booking horizon, one product each.

    The arrival count n is a Poisson(rate * horizon) draw (redrawn in the
    zero-probability event n = 0), each request picks a product uniformly,
    pays a price jittered within 20 percent of the product's base price, and
    consumes the product's fixed resource bundle (entries in [0, 1]).
    """
    _require(horizon > 0.0 and rate > 0.0, "need horizon > 0 and rate > 0")
    _require(rate * horizon >= 1.0, f"rate*horizon must be >= 1, got {rate * horizon}")
    _require(n_products >= 1 and n_resources >= 1, "need at least one product and resource")
    _require(capacity > 0.0, f"capacity must be positive, got {capacity}")
    _require(0.0 <= price_lo <= price_hi, "need 0 <= price_lo <= price_hi")
    rng = np.random.default_rng(seed)
    n = int(rng.poisson(rate * horizon))
    while n < 1:
        n = int(rng.poisson(rate * horizon))
    usage = rng.uniform(0.0, 1.0, (n_products, n_resources))
    base = rng.uniform(price_lo, price_hi, n_products)
    kinds = rng.integers(0, n_products, n)
    rewards = base[kinds] * rng.uniform(0.8, 1.2, n)
    return Instance(
        m=n_resources, n=n, b=np.full(n_resources, float(capacity)),
        rewards=rewards, consumption=usage[kinds],
        meta={
            "kind": "yield", "horizon": horizon, "rate": rate,
            "n_products": n_products, "n_resources": n_resources,
            "capacity": capacity, "price_lo": price_lo, "price_hi": price_hi,
            "seed": seed, "realized_n": n,
        },
    )


def shuffle(inst: Instance | MultiInstance, seed: int):
    """Uniform random permutation of the columns (seeded Fisher-Yates)."""
    perm = np.random.default_rng(seed).permutation(inst.n)
    meta = dict(inst.meta or {})
    meta["shuffle_seed"] = seed
    if isinstance(inst, MultiInstance):
        return MultiInstance(
            m=inst.m, n=inst.n, k=inst.k, b=inst.b.copy(),
            rewards=inst.rewards[perm].copy(),
            consumption=inst.consumption[perm].copy(), meta=meta,
        )
    return Instance(
        m=inst.m, n=inst.n, b=inst.b.copy(),
        rewards=inst.rewards[perm].copy(),
        consumption=inst.consumption[perm].copy(), meta=meta,
    )


@dataclass(frozen=True)
class GenSpec:
    """A generator request: family name, seed, and family-specific parameters."""

    kind: str
    seed: int = 0
    params: dict = field(default_factory=dict)


_ALLOWED = {
    "routing": {"m", "n", "q", "capacity", "reward_lo", "reward_hi"},
    "secretary": {"n", "k", "reward_dist", "reward_lo", "reward_hi", "sigma"},
    "adwords": {"n", "m", "bid_lo", "bid_hi", "budget_rule", "budget", "condition_eps"},
    "yield": {
        "horizon", "rate", "n_products", "n_resources", "capacity",
        "price_lo", "price_hi",
    },
}


def generate(spec: GenSpec) -> Instance | MultiInstance:
    """Materialize a GenSpec; adwords specs come back as multi-choice instances."""
    if spec.kind not in _ALLOWED:
        raise BadSpec(f"unknown generator kind {spec.kind!r}")
    unknown = set(spec.params) - _ALLOWED[spec.kind]
    if unknown:
        raise BadSpec(f"unknown parameters for {spec.kind}: {sorted(unknown)}")
    try:
        if spec.kind == "routing":
            return gen_routing(seed=spec.seed, **spec.params)
        if spec.kind == "secretary":
            return gen_secretary(seed=spec.seed, **spec.params)
        if spec.kind == "yield":
            return gen_yield(seed=spec.seed, **spec.params)
        bids, budgets = gen_adwords(seed=spec.seed, **spec.params)
    except TypeError as exc:  # missing required parameter
        raise BadSpec(f"incomplete {spec.kind} spec: {exc}") from exc
    inst = adwords_to_multi(bids, budgets)
    inst.meta.update({"params": dict(spec.params), "seed": spec.seed})
    return inst
