"""Greedy demand and the successor walk on a certified instance.

For additive, unit-demand, and weighted-matroid-rank success functions the
greedy rule (take the action with the best marginal utility while it is
non-negative, ties toward the costlier action) computes an exact best
response, and successors between critical values come from a small family
of marginal-ratio candidates -- no exponential enumeration anywhere.
"""

from fractions import Fraction as F

from combicontracts import (
    Instance,
    UniformMatroid,
    WeightedMatroidRank,
    brute_force_critical_set,
    greedy_demand,
    optimal_contract,
    succ_gs,
)

inst = Instance(
    WeightedMatroidRank((F(4, 8), F(3, 8), F(2, 8), F(1, 8)), UniformMatroid(2)),
    (F(1, 8), F(1, 8), F(1, 16), F(1, 16)),
    k=4,
)
print("weighted rank-2 matroid, weights (1/2, 3/8, 1/4, 1/8)")
print()

for alpha in (F(1, 8), F(1, 4), F(1, 2)):
    ordered = greedy_demand(inst, alpha)
    print(
        f"alpha = {alpha}: greedy picks {list(ordered.actions)} "
        f"with step utilities {[str(u) for u in ordered.step_utilities]}"
    )

print()
print("walking the successors from zero:")
alpha = F(0)
while True:
    nxt = succ_gs(inst, alpha)
    if nxt is None:
        break
    print(f"  succ({alpha}) = {nxt}")
    alpha = nxt

profile = brute_force_critical_set(inst)
print(f"envelope agrees: criticals {[str(a) for a in profile.alphas]}")
print()

sol = optimal_contract(inst, "gs")
print(
    f"optimal contract: alpha* = {sol.alpha_star}, principal utility "
    f"{sol.utility}, incentivized set {sorted(sol.actions)}, "
    f"{sol.v_queries} V queries"
)
reference = optimal_contract(inst, "brute")
print(f"exhaustive check: alpha* = {reference.alpha_star}, utility {reference.utility}")
