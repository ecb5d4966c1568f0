"""Star graphs and single-surviving-vertex marginals.

Stars interpolate between exactly flat reduced states, sharp projector
limits, and the square-case free Poisson law, with closed forms for the
average entropy and purity in every regime.  When all surviving
subsystems sit inside one vertex the same trichotomy is controlled by
the kept/traced balance of that vertex alone.
"""

from fractions import Fraction

from graphstate import (
    classify,
    estimate,
    exact_moment,
    marginal_max_flow,
    moment_table,
    one_unitary_marginal,
    star_graph,
    star_marginal,
)

print("=== the (s,t) phase diagram of the 2-star ===")
for s in range(3):
    for t in range(3):
        if s == 0 and t == 0:
            continue
        fam = star_marginal(2, s, t)
        print(f"  (s={s}, t={t}): {fam.law.describe():45s} "
              f"purity ~ {fam.purity_coeff}*N^{fam.purity_exponent}")
print()

print("=== balanced case (1,1): free Poisson, verified three ways ===")
marginal = star_graph(2, 1, 1)
fam = star_marginal(2, 1, 1)
print("  prediction: purity", f"{fam.purity_coeff}*N^{fam.purity_exponent},",
      "entropy 2 ln N - 1/2")
print("  engine:", [(r.p, str(r.coefficient)) for r in moment_table(marginal, 4)],
      "->", classify(marginal, 4).describe())
rep = estimate(marginal, 16, 200, p_list=(1, 2), seed=11)
print(f"  sampled purity at N=16: {rep.purity_mean:.5e} "
      f"(exact {float(exact_moment(marginal, 2, 16)):.5e}, "
      f"asymptotic {2 / 256:.5e})")
print(f"  sampled entropy: {rep.entropy_mean:.4f} "
      f"(prediction {fam.entropy(16):.4f})")
print()

print("=== one-vertex marginals: the kept/traced trichotomy ===")
cases = [
    (1, 2, 1, 1, 1, 1),   # kept < traced + external: flat on the kept space
    (2, 1, 1, 1, 1, 1),   # balanced: free Poisson, c = 1
    (3, 1, 0, 1, 1, 1),   # kept side too large: flat on the complement rank
    (3, 2, 1, 1, 2, 2),   # balanced with weights: free Poisson, c = 4
]
for kept, tb, ext, dk, dt, de in cases:
    fam = one_unitary_marginal(kept, tb, ext, dk, dt, de)
    print(f"  kept={kept} traced={tb} external={ext} "
          f"dims=({dk},{dt},{de}): {fam.law.describe()}")
assert one_unitary_marginal(3, 2, 1, 1, 2, 2).law.c == Fraction(4)
print()
print("flow values for the star family:",
      {(s, t): marginal_max_flow(star_graph(2, s, t))
       for s in (0, 1, 2) for t in (1, 2)})
