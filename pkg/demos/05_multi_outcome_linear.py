"""Linear contracts are worst-case optimal with multiple outcomes.

With m reward levels and only the expected reward of each action set
known, nature can pick any compatible distribution family.  Against the
adversarial two-point family (all mass on 0 and the top reward), the
linearization of any contract does at least as well -- so the principal
loses nothing by restricting to linear contracts, and those reduce to the
binary model.
"""

import random
from fractions import Fraction as F

from combicontracts import (
    Additive,
    GeneralContract,
    GeneralInstance,
    Instance,
    embed_binary,
    linearize,
    optimal_contract,
    optimal_linear_general,
    worst_case_utility_twopoint,
)

binary = Instance(Additive((F(1, 2), F(2, 5))), (F(1, 10), F(1, 5)))
ginst = embed_binary(binary)
print("two-outcome embedding of the additive instance, R(full set) =", ginst.top_reward)
print()

rng = random.Random(7)
levels = sorted(ginst.observable_levels())
print("random payment tables versus their linearizations (two-point worst case):")
for trial in range(5):
    table = {lv: lv * F(rng.randint(0, 8), 8) + F(rng.randint(0, 2), 16) for lv in levels}
    t = GeneralContract.tabular(table)
    alpha = linearize(t, ginst)
    wc_t = worst_case_utility_twopoint(t, ginst)
    wc_lin = worst_case_utility_twopoint(GeneralContract.linear(alpha), ginst)
    print(
        f"  contract {trial + 1}: worst-case {str(wc_t):>8}  "
        f"linear alpha = {str(alpha):>5} gives {str(wc_lin):>6}  "
        f"dominates: {wc_lin >= wc_t}"
    )

print()
sol = optimal_linear_general(ginst)
ref = optimal_contract(binary)
print(
    f"optimal linear contract in the general model: alpha* = {sol.alpha_star}, "
    f"utility {sol.utility}"
)
print(f"binary model agrees: alpha* = {ref.alpha_star}, utility {ref.utility}")

expected_only = GeneralInstance(
    costs=tuple(2 * c for c in binary.costs),
    rewards=(F(0), F(2)),
    expected=binary.f.scaled(2),
)
sol2 = optimal_linear_general(expected_only)
print(
    "doubling all rewards and costs: same alpha* = "
    f"{sol2.alpha_star}, utility scales to {sol2.utility}"
)
