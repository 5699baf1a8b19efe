"""Learn a threshold price once, then ride it for the rest of the stream.

A hiring-style instance: 2000 candidates arrive in random order, 120 slots.
The algorithm watches the first n*eps arrivals without hiring, solves a
shrunken prefix LP to learn what "good enough" costs, then accepts exactly
the candidates whose reward strictly beats the learned price — subject to
never overrunning capacity.
"""

import numpy as np

from onlinelp import GenSpec, generate, run_ola, shuffle
from onlinelp.harness import offline_opt


def main():
    inst = generate(GenSpec(kind="secretary", seed=7,
                            params=dict(n=2000, k=120)))
    opt, _, offline_price = offline_opt(inst)
    print(f"2000 candidates, 120 slots, offline price {offline_price.p[0]:.4f}")
    print()

    for eps in (0.05, 0.1, 0.2):
        res = run_ola(inst, eps)
        ell, price = res.prices_used[0]
        ratios = [run_ola(shuffle(inst, s), eps).objective / opt
                  for s in range(1, 21)]
        print(f"eps={eps:4}: watched {ell:3d} arrivals, "
              f"learned price {price.p[0]:.4f}, "
              f"hired {res.accepted:3d}/120, "
              f"mean ratio {np.mean(ratios):.4f} "
              f"(worst of 20 orders {min(ratios):.4f})")

    print()
    print("On an easy i.i.d. instance the smallest window already nails the")
    print("price, so small eps wins: the forfeited prefix and the (1-eps)")
    print("shrink are pure cost. What rules out eps -> 0 in general is the")
    print("input condition B >= 6m*log(n/eps)/eps^3 — far from satisfied at")
    print("B=120 (it wants B in the hundreds of thousands), and the decent")
    print("ratios above show it is sufficient, never necessary.")


if __name__ == "__main__":
    main()
