"""Solve a small capacity-constrained LP by hand and read the certificate.

Four candidate columns compete for 1.5 units of a single resource.  The
optimum takes the best column whole, half of the second best, and prices
the resource at the reward rate of the marginal (fractional) column.
"""

import numpy as np

from onlinelp import BoxedLp, solve_boxed_lp, verify_complementary_slackness


def main():
    lp = BoxedLp(
        c=np.array([4.0, 3.0, 2.0, 1.0]),
        A=np.array([[1.0, 1.0, 1.0, 1.0]]),
        d=np.array([1.5]),
    )
    sol = solve_boxed_lp(lp)

    print("columns (reward per unit):", lp.c)
    print("capacity:", lp.d[0])
    print()
    print("x* =", sol.x)
    print(f"objective = {sol.objective}  (4*1 + 3*0.5)")
    print(f"resource price = {sol.dual[0]}  (the marginal column's rate)")
    print(f"dual objective = {sol.dual_objective(lp)}  (equals primal: strong duality)")

    report = verify_complementary_slackness(lp, sol)
    print("slackness violations:", report or "none — (x, p) is a certified optimum")

    # The price tells an accept/reject story before the LP is ever re-solved:
    # a column is worth taking iff its reward beats price * consumption.
    print()
    for j, reward in enumerate(lp.c):
        surplus = reward - sol.dual[0] * lp.A[0, j]
        print(f"  column {j}: reward {reward} vs priced cost {sol.dual[0] * lp.A[0, j]}"
              f" -> surplus {surplus:+.1f}")


if __name__ == "__main__":
    main()
