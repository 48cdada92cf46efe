"""Two constructions that separate easy from hard.

First, a budget-additive family whose optimal contract encodes subset-sum:
deciding whether alpha* equals the construction's threshold answers the
subset-sum question.  Second, a recursive coverage function whose critical
set doubles with every added action -- enumeration-based approaches cannot
stay polynomial outside the certified classes.
"""

from fractions import Fraction as F

from combicontracts import (
    SubsetSumSpec,
    brute_force_critical_set,
    gen_exponential_coverage,
    gen_subset_sum,
    normalize,
    optimal_contract,
)

print("subset-sum reduction (f(S) = min(1, sum x_i / Z), c(i) = x_i / Z^3):")
for values, target in (((3, 5), 8), ((3, 5), 7), ((2, 7), 8), ((4, 9, 10), 23)):
    inst = gen_subset_sum(SubsetSumSpec(values, target))
    sol = optimal_contract(inst, "brute")
    threshold = F(1, target * target)
    verdict = "YES" if sol.alpha_star == threshold else "NO "
    print(
        f"  X = {str(values):12} Z = {target:2d}: alpha* = {str(sol.alpha_star):>7} "
        f"vs threshold {str(threshold):>6} -> {verdict} instance"
    )

print()
print("coverage tower: critical-set size doubles per action")
for n in (1, 2, 3, 4):
    inst = gen_exponential_coverage(n)
    profile = brute_force_critical_set(inst)
    top = inst.f.value(range(1, n + 1))
    print(
        f"  n = {n}: f(full set) = {str(top):>12}  criticals = {profile.size:2d} "
        f"(= 2^{n} - 1)"
    )

print()
inst = gen_exponential_coverage(2)
profile = brute_force_critical_set(inst)
print(f"the n = 2 tower in full: criticals {[str(a) for a in profile.alphas]}")
norm = normalize(inst)
print(
    "after joint normalization (f and c divided by f(full set)) the criticals "
    f"are unchanged: {[str(a) for a in brute_force_critical_set(norm).alphas]}"
)
