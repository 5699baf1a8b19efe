"""Multi-choice arrivals: the priced rule versus reward-chasing.

Each arrival offers three service tiers — premium pays the most but burns
5-8x the resources of economy.  Per resource unit, economy is the better
deal, so the offline optimum serves almost everyone cheaply.  A greedy
rule that grabs the best-paying tier that still fits sells premium until
the racks are full; the priced rule subtracts the learned opportunity cost
of capacity from each tier's payment and routes nearly everything to
economy on its own.
"""

import numpy as np

from onlinelp import MultiInstance, adwords_to_multi, run_dpa_multi, shuffle
from onlinelp.harness import greedy_baseline, offline_opt

TIERS = ("premium", "standard", "economy")


def tiered_services(seed=5, n=500, m=3, capacity=60.0):
    rng = np.random.default_rng(seed)
    rewards = np.column_stack([
        rng.uniform(2.2, 3.0, n),
        rng.uniform(1.2, 1.7, n),
        rng.uniform(0.55, 0.85, n),
    ])
    consumption = np.zeros((n, m, 3))
    consumption[:, :, 0] = rng.uniform(0.65, 1.0, (n, m))
    consumption[:, :, 1] = rng.uniform(0.28, 0.45, (n, m))
    consumption[:, :, 2] = rng.uniform(0.08, 0.16, (n, m))
    return MultiInstance(m=m, n=n, k=3, b=np.full(m, capacity),
                         rewards=rewards, consumption=consumption)


def tier_counts(choices):
    return np.bincount(choices[choices >= 0], minlength=3)


def main():
    minst = tiered_services()
    opt, x_off, price = offline_opt(minst)
    print(f"{minst.n} arrivals x {minst.k} tiers, {minst.m} resources of {minst.b[0]:.0f}")
    print(f"offline OPT {opt:.1f}, tier mix {np.round(x_off.sum(axis=0), 1)},"
          f" resource prices {np.round(price.p, 3)}")
    print()

    res = run_dpa_multi(minst, eps=0.1)
    grd = greedy_baseline(minst)
    print(f"{'':10s}  revenue   ratio   {'  '.join(f'{t:>8s}' for t in TIERS)}")
    for name, r in (("priced", res), ("greedy", grd)):
        counts = tier_counts(r.choices)
        print(f"{name:10s}  {r.objective:7.1f}   {r.objective / opt:.3f}   "
              + "  ".join(f"{c:8d}" for c in counts))

    ratios_p, ratios_g = [], []
    for s in range(1, 4):
        sh = shuffle(minst, s)
        ratios_p.append(run_dpa_multi(sh, 0.1).objective / opt)
        ratios_g.append(greedy_baseline(sh).objective / opt)
    print(f"\nmean ratio over 3 arrival orders: priced {np.mean(ratios_p):.3f},"
          f" greedy {np.mean(ratios_g):.3f}")

    # The same engine runs budgeted ad allocation: divide each bidder's bids
    # by their largest bid and the budget constraint becomes a [0, 1]-row.
    rng = np.random.default_rng(3)
    bids = rng.uniform(0.0, 1.0, (400, 4))
    budgets = np.full(4, 14.0)
    ads = adwords_to_multi(bids, budgets)
    ares = run_dpa_multi(ads, eps=0.1)
    spent = ares.fill * np.asarray(ads.meta["row_scale"])
    assert np.all(spent <= budgets + 1e-12)
    print(f"\nadwords mapping: 400 queries, 4 bidders, budget 14.00 each;")
    print(f"revenue {ares.objective:.2f} in original bid units, "
          f"spend {spent.sum():.2f} of {budgets.sum():.2f}, no budget exceeded —")
    print("the guard runs in scaled units, so feasibility survives the")
    print("round-trip back to dollars.")


if __name__ == "__main__":
    main()
