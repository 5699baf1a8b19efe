"""Re-learn the price at geometric checkpoints and watch it converge.

Where one-time learning commits to whatever the first window showed, the
dynamic variant re-solves the prefix LP at t = n*eps, 2n*eps, 4n*eps, ...
with a shrink factor h = eps*sqrt(n/ell) that relaxes as evidence grows.
Early prices are conservative (large shrink), late prices approach the
offline dual.
"""

import numpy as np

from onlinelp import GenSpec, generate, geometric_schedule, h_factor, run_dpa, run_ola, shuffle
from onlinelp.harness import offline_opt


def main():
    inst = generate(GenSpec(kind="routing", seed=21,
                            params=dict(m=3, n=3000, q=0.5, capacity=120.0)))
    opt, _, offline_price = offline_opt(inst)
    eps = 0.1

    print("update schedule:", geometric_schedule(inst.n, eps))
    print(f"offline prices:  {np.round(offline_price.p, 4)}")
    print()

    res = run_dpa(inst, eps)
    for ell, price in res.prices_used:
        gap = float(np.linalg.norm(price.p - offline_price.p))
        print(f"  after {ell:4d} arrivals (shrink {h_factor(ell, inst.n, eps):.4f}): "
              f"p = {np.round(price.p, 4)}   |p - p_offline| = {gap:.4f}")

    print()
    ola_ratios, dpa_ratios = [], []
    for seed in range(1, 31):
        sh = shuffle(inst, seed)
        ola_ratios.append(run_ola(sh, eps).objective / opt)
        dpa_ratios.append(run_dpa(sh, eps).objective / opt)
    print(f"mean ratio over 30 arrival orders:  "
          f"ola {np.mean(ola_ratios):.4f}   dpa {np.mean(dpa_ratios):.4f}")


if __name__ == "__main__":
    main()
