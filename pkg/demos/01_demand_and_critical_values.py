"""Agent demand and the step structure of V.

A three-action project where acting on {1,2} together succeeds half the
time, while action 3 alone reaches 0.6.  We trace the agent's best
response as the principal raises the revenue share, and watch V jump at
the critical contract values.
"""

from fractions import Fraction as F

from combicontracts import (
    ExplicitTable,
    Instance,
    brute_force_critical_set,
    brute_force_demand,
    canonical_best_response,
    v_value,
)

table = [F(0), F(3, 10), F(3, 10), F(1, 2), F(3, 5), F(3, 5), F(3, 5), F(3, 5)]
inst = Instance(ExplicitTable(3, table), (F(1, 10), F(1, 10), F(3, 10)))

print("success probabilities: f({1})=f({2})=3/10, f({1,2})=1/2, f with 3: 3/5")
print("costs: c(1)=c(2)=1/10, c(3)=3/10")
print()

for alpha in (F(1, 4), F(2, 5), F(1, 2), F(3, 4), F(1)):
    prof = brute_force_demand(inst, alpha)
    sets = " ".join("{" + ",".join(map(str, sorted(s))) + "}" for s in prof.demand)
    print(
        f"alpha = {str(alpha):>4}: agent-optimal sets {sets:24}"
        f" best response {sorted(canonical_best_response(prof))}"
        f"  V = {prof.v}"
    )

print()
profile = brute_force_critical_set(inst)
print("critical contract values (where V jumps):")
for a, v, dset in zip(profile.alphas, profile.values, profile.demand_sets):
    print(f"  alpha = {str(a):>4}  V -> {str(v):>4}  demand {sorted(dset)}")

print()
print("between criticals V is flat, e.g.")
for alpha in (F(5, 12), F(17, 24)):
    print(f"  V({alpha}) = {v_value(inst, alpha)}")
