"""The optimal-contract engine.

Successor computation for certified gross-substitutes instances, the
critical-set envelope oracle used to verify everything, and the generic
iterate-the-successors algorithm for the optimal linear contract.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .demand import (
    VOracle,
    brute_force_demand,
    canonical_best_response,
    greedy_demand,
    v_value,
)
from .errors import (
    DomainError,
    InvariantError,
    ResourceLimitError,
    UnsupportedClassError,
)
from .functions import (
    Instance,
    actions_of,
    brute_force_limit,
    cost_table,
    value_table,
)
from .rational import as_fraction

__all__ = [
    "CriticalProfile",
    "ContractSolution",
    "succ_gs",
    "brute_force_critical_set",
    "successor_from_profile",
    "optimal_contract",
]


@dataclass(frozen=True)
class CriticalProfile:
    """Sorted critical contract values with V values and canonical demand sets.

    V strictly increases along the sorted list; the number of rows is always
    below 2**n and at most n(n+1)/2 for certified gross-substitutes classes.
    """

    alphas: tuple
    values: tuple
    demand_sets: tuple

    def __post_init__(self):
        for i in range(1, len(self.alphas)):
            if not self.alphas[i - 1] < self.alphas[i]:
                raise InvariantError("critical values not strictly increasing")
            if not self.values[i - 1] < self.values[i]:
                raise InvariantError("V not strictly increasing along criticals")

    @property
    def size(self) -> int:
        return len(self.alphas)

    def __len__(self) -> int:
        return len(self.alphas)


@dataclass(frozen=True)
class ContractSolution:
    """An optimal (or approximately optimal) linear contract.

    ``utility`` is the principal's (1 - alpha) * V(alpha); ``actions`` the
    incentivized set; ``profile`` is attached when a full enumeration was
    performed; ``v_queries`` counts V-oracle calls where that is contractual.
    """

    alpha_star: Fraction
    utility: Fraction
    actions: frozenset | None = None
    profile: CriticalProfile | None = None
    v_queries: int | None = None


def _intersect_x(line_a, line_b) -> Fraction:
    # slope-intercept pairs; caller guarantees distinct slopes
    (m1, b1), (m2, b2) = line_a[:2], line_b[:2]
    return (b1 - b2) / (m2 - m1)


@lru_cache(maxsize=512)
def brute_force_critical_set(inst: Instance, beyond_one: bool = False) -> CriticalProfile:
    """Exact critical set from the upper envelope of all 2**n subset lines.

    Each subset S induces the agent-utility line alpha -> alpha*f(S) - c(S).
    V(alpha) is the slope of the envelope segment at alpha (the maximal
    slope at breakpoints, matching principal-favoring tie-breaks), so the
    critical set is exactly the envelope breakpoints inside (0, 1].  The
    sweep is exact rational arithmetic throughout; every critical value is
    the intersection abscissa (c(S) - c(S')) / (f(S) - f(S')) of two subset
    lines, the same finite candidate family the definition quantifies over.

    ``beyond_one`` lifts the upper cap and reports every demand change on
    (0, infinity); cost perturbations shift breakpoints upward, so the
    perturbation-monotonicity law compares these uncapped counts (a jump
    sitting exactly at 1 would otherwise leave the capped window).
    """
    limit = brute_force_limit()
    if inst.n > limit:
        raise ResourceLimitError(
            f"brute force limited to {limit} actions, instance has {inst.n}"
        )
    ftab = value_table(inst.f)
    ctab = cost_table(inst)

    # One line per distinct slope: keep the max intercept (min cost) and
    # every mask attaining it; those masks are exactly D* on the segment.
    best: dict = {}
    for mask in range(1 << inst.n):
        slope = ftab[mask]
        intercept = -ctab[mask]
        cur = best.get(slope)
        if cur is None or intercept > cur[0]:
            best[slope] = (intercept, [mask])
        elif intercept == cur[0]:
            cur[1].append(mask)

    lines = [(slope, pair[0], pair[1]) for slope, pair in sorted(best.items())]
    hull: list = []
    for line in lines:
        while hull:
            if line[1] >= hull[-1][1]:
                # Same-or-higher intercept with a higher slope dominates the
                # previous line everywhere on alpha >= 0.
                hull.pop()
            elif len(hull) >= 2 and _intersect_x(hull[-2], line) <= _intersect_x(
                hull[-2], hull[-1]
            ):
                hull.pop()
            else:
                break
        hull.append(line)

    alphas: list = []
    values: list = []
    demand_sets: list = []
    for i in range(1, len(hull)):
        x = _intersect_x(hull[i - 1], hull[i])
        if not x > 0:
            raise InvariantError("envelope breakpoint not positive")
        if x > 1 and not beyond_one:
            break
        alphas.append(x)
        values.append(hull[i][0])
        canon = min(tuple(sorted(actions_of(m))) for m in hull[i][2])
        demand_sets.append(frozenset(canon))
    return CriticalProfile(tuple(alphas), tuple(values), tuple(demand_sets))


def successor_from_profile(profile: CriticalProfile, alpha) -> Fraction | None:
    """Smallest critical value strictly above alpha, or None."""
    alpha = as_fraction(alpha)
    idx = bisect_right(profile.alphas, alpha)
    if idx == len(profile.alphas):
        return None
    return profile.alphas[idx]


def succ_gs(inst: Instance, alpha, *, oracle: VOracle | None = None, v_alpha=None):
    """Successor critical value for a certified instance.

    Builds the greedy ordered set at alpha, then enumerates the finite
    candidate family: replacement ratios
    (c(a) - c(s_i)) / (f(a | prefix) - f(s_i | prefix)) over every action a
    and greedy step i with strictly positive denominator, plus the entry
    ratios c(a) / f(a | S) for actions with positive marginal on top of the
    full greedy set.  Candidates are deduplicated, restricted to
    (alpha, 1], and probed in ascending order with early exit at the first
    one whose V exceeds V(alpha); V-equal candidates are not critical.

    Returns None when no critical value above alpha exists.
    """
    if not inst.f.gs_certified:
        raise UnsupportedClassError(
            f"succ_gs requires a greedy-certified class, got {inst.f.kind!r}"
        )
    alpha = as_fraction(alpha)
    if not 0 <= alpha <= 1:
        raise DomainError(f"contract value {alpha} outside [0, 1]")
    if oracle is None:
        oracle = VOracle(inst, "greedy")
    if v_alpha is None:
        v_alpha = v_value(inst, alpha, "greedy")

    f = inst.f
    ordered = greedy_demand(inst, alpha).actions
    candidates = set()
    prefix: frozenset = frozenset()
    for step_action in ordered:
        m_chosen = f.marginal(step_action, prefix)
        c_chosen = inst.costs[step_action - 1]
        for a in range(1, inst.n + 1):
            if a == step_action:
                continue
            denom = f.marginal_or_zero(a, prefix) - m_chosen
            if denom > 0:
                beta = (inst.costs[a - 1] - c_chosen) / denom
                if alpha < beta <= 1:
                    candidates.add(beta)
        prefix = prefix | {step_action}
    for a in range(1, inst.n + 1):
        if a in prefix:
            continue
        gain = f.marginal(a, prefix)
        if gain > 0:
            beta = inst.costs[a - 1] / gain
            if alpha < beta <= 1:
                candidates.add(beta)

    for beta in sorted(candidates):
        if oracle(beta) > v_alpha:
            return beta
    return None


def _resolve_contract_method(inst: Instance, method: str) -> str:
    if method == "auto":
        if inst.f.gs_certified:
            return "gs"
        if inst.n <= brute_force_limit():
            return "brute"
        if inst.k is not None:
            return "search"
        raise ResourceLimitError(
            "no successor backend available: not greedy-certified, above the "
            "brute-force limit, and no declared bit precision"
        )
    if method not in ("gs", "search", "brute"):
        raise DomainError(f"unknown successor method {method!r}")
    return method


def optimal_contract(inst: Instance, method: str = "auto") -> ContractSolution:
    """Optimal linear contract by iterating successors from zero.

    Walks alpha(t+1) = succ(alpha(t)) starting at 0, tracking the argmax of
    (1 - alpha) * V(alpha) including the alpha = 0 baseline; ties go to the
    smallest alpha.  ``method`` picks the successor backend: "gs" (greedy,
    certified classes), "search" (bisection, needs declared k), "brute"
    (envelope enumeration), or "auto".
    """
    method = _resolve_contract_method(inst, method)

    if method == "brute":
        profile = brute_force_critical_set(inst)
        best_alpha, best_util = Fraction(0), Fraction(0)
        best_set: frozenset = frozenset()
        for a, v, dset in zip(profile.alphas, profile.values, profile.demand_sets):
            u = (1 - a) * v
            if u > best_util:
                best_alpha, best_util, best_set = a, u, dset
        return ContractSolution(
            alpha_star=best_alpha,
            utility=best_util,
            actions=best_set,
            profile=profile,
            v_queries=0,
        )

    if method == "search":
        from .approx import succ_search

        oracle = VOracle(inst)

        def successor(a, va):
            return succ_search(inst, a, oracle=oracle, v_alpha=va)

        step_cap = 1 << (2 * inst.k) if inst.k is not None else 1 << 30
    else:
        oracle = VOracle(inst, "greedy")

        def successor(a, va):
            return succ_gs(inst, a, oracle=oracle, v_alpha=va)

        step_cap = inst.n * (inst.n + 1) // 2

    alpha, v_alpha = Fraction(0), Fraction(0)
    best_alpha, best_util = alpha, Fraction(0)
    steps = 0
    while True:
        nxt = successor(alpha, v_alpha)
        if nxt is None:
            break
        if not nxt > alpha:
            raise InvariantError("successor did not advance")
        steps += 1
        if steps > step_cap:
            raise InvariantError(
                f"successor iteration exceeded the critical-set bound {step_cap}"
            )
        v_next = oracle(nxt)
        if not v_next > v_alpha:
            raise InvariantError("V did not increase across a successor step")
        util = (1 - nxt) * v_next
        if util > best_util:
            best_alpha, best_util = nxt, util
        alpha, v_alpha = nxt, v_next

    if best_alpha == 0:
        best_set: frozenset | None = frozenset()
    elif inst.f.gs_certified:
        best_set = greedy_demand(inst, best_alpha).set
    elif inst.n <= brute_force_limit():
        best_set = canonical_best_response(brute_force_demand(inst, best_alpha))
    else:
        best_set = None
    return ContractSolution(
        alpha_star=best_alpha,
        utility=best_util,
        actions=best_set,
        profile=None,
        v_queries=oracle.queries,
    )
