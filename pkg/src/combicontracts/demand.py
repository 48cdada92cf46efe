"""Agent best-response computation.

The greedy demand oracle (exact for certified gross-substitutes classes),
exhaustive demand over all subsets, the principal-favoring selection, and
the counted V oracle used by the query-complexity results.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, InvariantError, ResourceLimitError, UnsupportedClassError
from .functions import (
    Instance,
    actions_of,
    brute_force_limit,
    cost_table,
    value_table,
)
from .rational import as_fraction

__all__ = [
    "OrderedDemand",
    "DemandProfile",
    "greedy_demand",
    "brute_force_demand",
    "best_response_set",
    "canonical_best_response",
    "v_value",
    "VOracle",
]


@dataclass(frozen=True)
class OrderedDemand:
    """Greedy pick order with the per-step marginal utilities.

    Step utilities are non-negative and non-increasing; zero-utility steps
    are included, which realizes principal-favoring tie-breaking at the
    contract values where the demand changes.
    """

    actions: tuple
    step_utilities: tuple

    @property
    def set(self) -> frozenset:
        return frozenset(self.actions)

    def __len__(self) -> int:
        return len(self.actions)


@dataclass(frozen=True)
class DemandProfile:
    """Exhaustive demand at one contract value.

    ``demand`` holds every agent-optimal set, ``d_star`` the f-maximizers
    among them (all sharing success probability ``v``); both are sorted by
    their sorted action tuples for determinism.
    """

    alpha: Fraction
    demand: tuple
    d_star: tuple
    u_agent: Fraction
    v: Fraction


def _check_alpha(alpha) -> Fraction:
    alpha = as_fraction(alpha)
    if not 0 <= alpha <= 1:
        raise DomainError(f"contract value {alpha} outside [0, 1]")
    return alpha


def greedy_demand(inst: Instance, alpha) -> OrderedDemand:
    """Ordered demanded set via greedy with principal-favoring tie-breaks.

    Repeatedly adds an action of maximal marginal utility while that
    maximum is >= 0 (zero included).  Ties break toward the action with
    maximal cost, then the smallest index.  Exact for certified classes
    only; others raise UnsupportedClassError.

    Parameters
    ----------
    inst : Instance
        Problem with a gs_certified success function.
    alpha : rational
        Contract value in [0, 1].
    """
    if not inst.f.gs_certified:
        raise UnsupportedClassError(
            f"greedy demand is not certified for class {inst.f.kind!r}; "
            "use brute_force_demand"
        )
    alpha = _check_alpha(alpha)
    f = inst.f
    chosen: list = []
    chosen_set: frozenset = frozenset()
    utilities: list = []
    remaining = set(range(1, inst.n + 1))
    while remaining:
        best_a = None
        best_key = None
        for a in remaining:
            u = alpha * f.marginal(a, chosen_set) - inst.costs[a - 1]
            key = (u, inst.costs[a - 1], -a)
            if best_key is None or key > best_key:
                best_key = key
                best_a = a
        if best_key[0] < 0:
            break
        chosen.append(best_a)
        utilities.append(best_key[0])
        chosen_set = chosen_set | {best_a}
        remaining.remove(best_a)
    return OrderedDemand(tuple(chosen), tuple(utilities))


def _sorted_sets(masks) -> tuple:
    sets = [tuple(sorted(actions_of(m))) for m in masks]
    sets.sort()
    return tuple(frozenset(s) for s in sets)


def brute_force_demand(inst: Instance, alpha) -> DemandProfile:
    """Exhaustive maximization of alpha*f(S) - c(S) over all 2**n subsets."""
    limit = brute_force_limit()
    if inst.n > limit:
        raise ResourceLimitError(
            f"brute force limited to {limit} actions, instance has {inst.n}"
        )
    alpha = _check_alpha(alpha)
    ftab = value_table(inst.f)
    ctab = cost_table(inst)
    best_u = None
    argmax: list = []
    for mask in range(1 << inst.n):
        u = alpha * ftab[mask] - ctab[mask]
        if best_u is None or u > best_u:
            best_u = u
            argmax = [mask]
        elif u == best_u:
            argmax.append(mask)
    best_f = max(ftab[m] for m in argmax)
    star = [m for m in argmax if ftab[m] == best_f]
    return DemandProfile(
        alpha=alpha,
        demand=_sorted_sets(argmax),
        d_star=_sorted_sets(star),
        u_agent=best_u,
        v=best_f,
    )


def canonical_best_response(profile: DemandProfile) -> frozenset:
    """Deterministic representative: lexicographically smallest member of D*."""
    return profile.d_star[0]


def best_response_set(inst: Instance, alpha) -> frozenset:
    """A principal-favored best response, greedy when certified."""
    if inst.f.gs_certified:
        return greedy_demand(inst, alpha).set
    return canonical_best_response(brute_force_demand(inst, alpha))


def v_value(inst: Instance, alpha, method: str = "auto") -> Fraction:
    """V(alpha): success probability of the principal-favored best response.

    Dispatches to greedy for certified classes and exhaustive search
    otherwise; this function does not count queries (wrap it in a VOracle
    where query complexity matters).
    """
    method = _resolve_method(inst, method)
    if method == "greedy":
        return inst.f.value(greedy_demand(inst, alpha).set)
    return brute_force_demand(inst, alpha).v


def _resolve_method(inst: Instance, method: str) -> str:
    if method == "auto":
        if inst.f.gs_certified:
            return "greedy"
        if inst.n <= brute_force_limit():
            return "brute"
        raise ResourceLimitError(
            "no V oracle available: function class is not certified for "
            f"greedy and {inst.n} actions exceed the brute-force limit"
        )
    if method not in ("greedy", "brute"):
        raise DomainError(f"unknown V-oracle method {method!r}")
    if method == "greedy" and not inst.f.gs_certified:
        raise UnsupportedClassError(f"class {inst.f.kind!r} is not greedy-certified")
    if method == "brute" and inst.n > brute_force_limit():
        raise ResourceLimitError(f"{inst.n} actions exceed the brute-force limit")
    return method


class VOracle:
    """Counted access to V; the query counter is part of the contract.

    Query-complexity statements (the 2k+1 successor bound, the FPTAS grid
    size) are phrased in V-oracle calls, so callers that need accounting
    route every evaluation through one oracle instance.
    """

    def __init__(self, inst: Instance, method: str = "auto"):
        self.inst = inst
        self.method = _resolve_method(inst, method)
        self.queries = 0

    def __call__(self, alpha) -> Fraction:
        self.queries += 1
        return v_value(self.inst, alpha, self.method)

    def expect_at_most(self, bound: int) -> None:
        if self.queries > bound:
            raise InvariantError(
                f"V-oracle used {self.queries} queries, bound is {bound}"
            )
