"""Benchmarks, baselines, and verification oracles.

``run_trials`` shuffles an instance R times with consecutive seeds, runs one
policy on each shuffle, and aggregates ratios against the offline LP optimum
(computed once; it is permutation invariant).  The two lemma oracles back the
structural claims the policies rest on: the KKT oracle counts columns where
the offline optimum and the price rule disagree (at most m after reward
perturbation), and the sample-OPT oracle averages the prefix LP's value over
shuffles (at most eps times the full optimum in expectation).
``column_sample_solve`` is the offline cousin of one-time learning: price
every column with a dual learned from a random sample.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .engine import _accepts, _ceil_snap, run_dpa, run_ola, sample_lp
from .errors import DegenerateWindow
from .generators import shuffle
from .lp import BoxedLp, perturb_rewards, perturb_rewards_multi, solve_boxed_lp
from .model import DualPrice, Instance, MultiInstance, MultiRunResult, RunResult
from .multi import _choose, flatten_lp, run_dpa_multi

__all__ = [
    "TrialRecord",
    "TrialStats",
    "offline_opt",
    "greedy_baseline",
    "run_trials",
    "lemma_kkt_oracle",
    "lemma_sample_opt_oracle",
    "ColumnSampleResult",
    "column_sample_solve",
]

ALGORITHMS = ("ola", "dpa", "dpa_multi", "greedy_baseline")


def offline_opt(inst: Instance | MultiInstance) -> tuple[float, np.ndarray, DualPrice]:
    """Full-information LP optimum: (value, optimal x, row prices).

    For multi-choice instances x comes back with shape (n, k); scalar
    instances get shape (n,).  The LP relaxation allows fractional x, so the
    value upper-bounds every feasible integral allocation.
    """
    if isinstance(inst, MultiInstance):
        sol = solve_boxed_lp(flatten_lp(inst))
        x = sol.x[: inst.n * inst.k].reshape(inst.n, inst.k)
        return sol.objective, x, DualPrice(p=np.maximum(sol.dual[: inst.m], 0.0))
    lp = BoxedLp(c=inst.rewards, A=np.ascontiguousarray(inst.consumption.T), d=inst.b)
    sol = solve_boxed_lp(lp)
    return sol.objective, sol.x, DualPrice(p=np.maximum(sol.dual, 0.0))


def greedy_baseline(inst: Instance | MultiInstance):
    """First-come allocation with no prices: take whatever still fits.

    Scalar instances accept every column that fits the remaining capacity;
    multi-choice instances take the best-paying option that fits, if any.
    A deliberately weak yardstick for the priced policies.
    """
    if isinstance(inst, MultiInstance):
        remaining = inst.b.copy()
        choices = np.full(inst.n, -1, dtype=np.int64)
        for t in range(inst.n):
            G = inst.consumption[t]
            fits = np.flatnonzero((G <= remaining[:, None]).all(axis=0))
            if fits.size:
                r = int(fits[np.argmax(inst.rewards[t, fits])])
                choices[t] = r
                remaining -= G[:, r]
        onehot = np.zeros((inst.n, inst.k))
        taken = np.flatnonzero(choices >= 0)
        onehot[taken, choices[taken]] = 1.0
        objective = float(np.dot(inst.rewards.reshape(-1), onehot.reshape(-1)))
        return MultiRunResult(
            choices=choices, objective=objective, fill=inst.b - remaining
        )
    remaining = inst.b.copy()
    decisions = np.zeros(inst.n, dtype=np.int8)
    for t in range(inst.n):
        a = inst.consumption[t]
        if bool(np.all(a <= remaining)):
            decisions[t] = 1
            remaining -= a
    objective = float(np.dot(inst.rewards, decisions.astype(np.float64)))
    return RunResult(
        decisions=decisions, objective=objective, fill=inst.b - remaining
    )


@dataclass(frozen=True)
class TrialRecord:
    """One shuffled run: seed, value, optimum, ratio, violations, wall time."""

    trial: int
    seed: int
    objective: float
    opt: float
    ratio: float
    violations: int
    runtime_ms: float


@dataclass
class TrialStats:
    """Aggregate of run_trials: per-trial records plus summary statistics."""

    algo: str
    eps: float
    opt: float
    records: list[TrialRecord] = field(default_factory=list)
    wall_time_s: float = 0.0

    @property
    def ratios(self) -> np.ndarray:
        return np.array([r.ratio for r in self.records])

    @property
    def mean_ratio(self) -> float:
        return float(self.ratios.mean()) if self.records else float("nan")

    @property
    def std_ratio(self) -> float:
        return float(self.ratios.std()) if self.records else float("nan")

    @property
    def violations(self) -> int:
        return sum(r.violations for r in self.records)


def _dispatch(inst, algo: str, eps: float):
    multi = isinstance(inst, MultiInstance)
    if algo == "greedy_baseline":
        return greedy_baseline(inst)
    if algo == "dpa_multi":
        if not multi:
            raise ValueError("dpa_multi needs a multi-choice instance")
        return run_dpa_multi(inst, eps)
    if multi:
        raise ValueError(f"{algo} needs a scalar instance; use dpa_multi")
    if algo == "ola":
        return run_ola(inst, eps)
    if algo == "dpa":
        return run_dpa(inst, eps)
    raise ValueError(f"unknown algorithm {algo!r}; expected one of {ALGORITHMS}")


def _one_trial(inst, algo: str, eps: float, trial: int, seed: int, opt: float) -> TrialRecord:
    shuffled = shuffle(inst, seed)
    t0 = time.perf_counter()
    result = _dispatch(shuffled, algo, eps)
    elapsed_ms = (time.perf_counter() - t0) * 1e3
    violations = int(np.sum(result.fill > shuffled.b))
    ratio = result.objective / opt if opt > 0.0 else 0.0
    return TrialRecord(
        trial=trial, seed=seed, objective=result.objective, opt=opt,
        ratio=ratio, violations=violations, runtime_ms=elapsed_ms,
    )


def run_trials(
    inst: Instance | MultiInstance,
    algo: str,
    eps: float,
    trials: int,
    base_seed: int = 0,
    jobs: int = 1,
) -> TrialStats:
    """Run ``trials`` shuffled replays of one policy and aggregate the ratios.

    Trial r shuffles with seed ``base_seed + r`` (r = 1..trials), so results
    are reproducible and different policies can be compared on identical
    arrival orders.  ``jobs > 1`` runs trials in worker processes; records
    come back in trial order either way.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    start = time.perf_counter()
    opt, _, _ = offline_opt(inst)
    stats = TrialStats(algo=algo, eps=eps, opt=opt)
    seeds = [(r, base_seed + r) for r in range(1, trials + 1)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [
                pool.submit(_one_trial, inst, algo, eps, r, seed, opt)
                for r, seed in seeds
            ]
            stats.records = [f.result() for f in futures]
    else:
        stats.records = [_one_trial(inst, algo, eps, r, seed, opt) for r, seed in seeds]
    stats.wall_time_s = time.perf_counter() - start
    return stats


def lemma_kkt_oracle(
    inst: Instance | MultiInstance, eta: float | None = None, seed: int = 0
) -> int:
    """Count arrivals where the offline optimum and the price rule disagree.

    Perturbs rewards by Uniform[0, eta) (eta=0 skips perturbation), solves
    the offline LP, prices every column with the optimal duals, and counts
    positions where the rule's 0/1 (or one-hot) decision differs from the
    LP's x by more than 1e-9.  With a generic perturbation the count is at
    most m: only columns priced exactly at their reward, or left fractional
    by the basis, can disagree.
    """
    tol = 1e-9
    if isinstance(inst, MultiInstance):
        pert = perturb_rewards_multi(inst, eta, seed)
        _, x, price = offline_opt(pert)
        mismatches = 0
        for t in range(pert.n):
            r = _choose(price.p, pert.rewards[t], pert.consumption[t])
            onehot = np.zeros(pert.k)
            if r is not None:
                onehot[r] = 1.0
            if np.any(np.abs(x[t] - onehot) > tol):
                mismatches += 1
        return mismatches
    pert = perturb_rewards(inst, eta, seed)
    _, x, price = offline_opt(pert)
    mismatches = 0
    for t in range(pert.n):
        ruled = 1.0 if _accepts(price.p, float(pert.rewards[t]), pert.consumption[t]) else 0.0
        if abs(float(x[t]) - ruled) > tol:
            mismatches += 1
    return mismatches


def lemma_sample_opt_oracle(
    inst: Instance, eps: float, trials: int, base_seed: int = 0
) -> tuple[float, float]:
    """Mean prefix-LP value over shuffles versus the eps * OPT ceiling.

    Returns (mean over ``trials`` shuffles of the value of the sampled LP on
    the first ceil(n*eps) columns with shrunk capacities, eps * OPT).  The
    expectation of the first term never exceeds the second; the caller
    chooses how much sampling slack to allow on top.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    s = _ceil_snap(inst.n * eps)
    opt, _, _ = offline_opt(inst)
    values = []
    for r in range(1, trials + 1):
        shuffled = shuffle(inst, base_seed + r)
        values.append(solve_boxed_lp(sample_lp(shuffled, s, eps)).objective)
    return float(np.mean(values)), eps * opt


@dataclass
class ColumnSampleResult:
    """Outcome of column_sample_solve: integral x plus a feasibility report."""

    x: np.ndarray
    objective: float
    fill: np.ndarray
    guard_rejections: int
    price: DualPrice
    sample_indices: np.ndarray


def column_sample_solve(inst: Instance, eps: float, seed: int = 0) -> ColumnSampleResult:
    """Approximate the offline LP by pricing all columns with a sampled dual.

    Draws ceil(n*eps) columns without replacement, learns the dual of their
    LP with capacities (1-eps)*(s/n)*b, then walks all n columns in input
    order applying the threshold rule with the exact capacity guard, so the
    output is integral and feasible no matter how rough the dual is.
    ``guard_rejections`` counts columns the rule accepted but the guard
    blocked.
    """
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must be in (0, 1), got {eps}")
    prod = inst.n * eps
    if prod < 1.0 - 1e-9:
        raise DegenerateWindow(f"n*eps = {prod:.6g} < 1 leaves nothing to sample")
    s = min(_ceil_snap(prod), inst.n)
    rng = np.random.default_rng(seed)
    idx = rng.choice(inst.n, size=s, replace=False)
    d = (1.0 - eps) * (s / inst.n) * inst.b
    lp = BoxedLp(
        c=inst.rewards[idx], A=np.ascontiguousarray(inst.consumption[idx].T), d=d
    )
    price = DualPrice(p=np.maximum(solve_boxed_lp(lp).dual, 0.0))
    remaining = inst.b.copy()
    x = np.zeros(inst.n, dtype=np.int8)
    blocked = 0
    for t in range(inst.n):
        a = inst.consumption[t]
        if _accepts(price.p, float(inst.rewards[t]), a):
            if bool(np.all(a <= remaining)):
                x[t] = 1
                remaining -= a
            else:
                blocked += 1
    objective = float(np.dot(inst.rewards, x.astype(np.float64)))
    return ColumnSampleResult(
        x=x, objective=objective, fill=inst.b - remaining,
        guard_rejections=blocked, price=price, sample_indices=idx,
    )
