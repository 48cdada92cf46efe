"""Success-probability function classes and problem instances.

Six function classes share one value-oracle interface: additive, unit
demand, weighted matroid rank (uniform or partition matroids), budget
additive, coverage, and explicit tables.  The first three are certified
for the greedy demand oracle (``gs_certified``); budget additive and
coverage are submodular but fall outside that guarantee and must use
brute force.

Action sets are subsets of {1, .., n}.  Public APIs accept any iterable
of action indices; enumeration-heavy internals work on integer bitmasks
(bit i-1 encodes action i).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, ClassVar, Iterable, Union

from .errors import DomainError, ResourceLimitError
from .rational import as_fraction, is_k_valid

__all__ = [
    "ActionSet",
    "Additive",
    "UnitDemand",
    "UniformMatroid",
    "PartitionMatroid",
    "WeightedMatroidRank",
    "BudgetAdditive",
    "Coverage",
    "ExplicitTable",
    "SuccessFunction",
    "Instance",
    "ValidationReport",
    "action_set",
    "mask_of",
    "actions_of",
    "value",
    "marginal",
    "cost",
    "validate",
    "value_table",
    "cost_table",
    "brute_force_limit",
    "EXPLICIT_TABLE_MAX_ACTIONS",
]

ActionSet = frozenset

EXPLICIT_TABLE_MAX_ACTIONS = 24
DEFAULT_BRUTE_FORCE_LIMIT = 12
BRUTE_LIMIT_ENV = "COMBICONTRACTS_BRUTE_LIMIT"


def brute_force_limit() -> int:
    """Action-count cap for exhaustive enumeration (env-overridable)."""
    raw = os.environ.get(BRUTE_LIMIT_ENV)
    if raw is None:
        return DEFAULT_BRUTE_FORCE_LIMIT
    try:
        limit = int(raw)
    except ValueError as exc:
        raise DomainError(f"{BRUTE_LIMIT_ENV} must be an integer, got {raw!r}") from exc
    if limit < 1:
        raise DomainError(f"{BRUTE_LIMIT_ENV} must be positive")
    return limit


def action_set(n: int, actions: Iterable[int]) -> frozenset:
    """Validate and freeze a subset of the ground set {1, .., n}."""
    s = frozenset(actions)
    for a in s:
        if not isinstance(a, int) or not 1 <= a <= n:
            raise DomainError(f"action {a!r} outside ground set 1..{n}")
    return s


def mask_of(n: int, actions: Iterable[int]) -> int:
    mask = 0
    for a in action_set(n, actions):
        mask |= 1 << (a - 1)
    return mask


def actions_of(mask: int) -> frozenset:
    out = []
    a = 1
    while mask:
        if mask & 1:
            out.append(a)
        mask >>= 1
        a += 1
    return frozenset(out)


class SuccessFunction:
    """Base value-oracle interface; subclasses implement ``value_mask``."""

    gs_certified: ClassVar[bool] = False
    kind: ClassVar[str] = "abstract"

    @property
    def n(self) -> int:
        raise NotImplementedError

    def value_mask(self, mask: int) -> Fraction:
        raise NotImplementedError

    def value(self, actions: Iterable[int]) -> Fraction:
        return self.value_mask(mask_of(self.n, actions))

    def marginal(self, a: int, actions: Iterable[int]) -> Fraction:
        """f(S + a) - f(S); requires a outside S."""
        s = action_set(self.n, actions)
        if not 1 <= a <= self.n:
            raise DomainError(f"action {a} outside ground set 1..{self.n}")
        if a in s:
            raise DomainError(f"action {a} already in the set")
        mask = mask_of(self.n, s)
        return self.value_mask(mask | (1 << (a - 1))) - self.value_mask(mask)

    def marginal_or_zero(self, a: int, actions: Iterable[int]) -> Fraction:
        """Like marginal but 0 for members; used by candidate enumeration."""
        s = action_set(self.n, actions)
        if a in s:
            return Fraction(0)
        return self.marginal(a, s)

    def singleton_values(self) -> tuple:
        return tuple(self.value_mask(1 << i) for i in range(self.n))

    def parameter_fractions(self) -> tuple:
        """Every rational parameter entering f values (for k-validity checks)."""
        raise NotImplementedError

    def scaled(self, factor) -> "SuccessFunction":
        """Same class with all values multiplied by a positive factor."""
        raise NotImplementedError

    def to_table(self) -> "ExplicitTable":
        if self.n > EXPLICIT_TABLE_MAX_ACTIONS:
            raise ResourceLimitError(
                f"explicit tables support at most {EXPLICIT_TABLE_MAX_ACTIONS} actions"
            )
        return ExplicitTable(self.n, value_table(self))


def _coerce_fractions(obj, name: str) -> tuple:
    return tuple(as_fraction(v) for v in obj)


@dataclass(frozen=True)
class Additive(SuccessFunction):
    """f(S) = sum of per-action values."""

    values: tuple

    kind: ClassVar[str] = "additive"
    gs_certified: ClassVar[bool] = True

    def __post_init__(self):
        object.__setattr__(self, "values", _coerce_fractions(self.values, "values"))

    @property
    def n(self) -> int:
        return len(self.values)

    def value_mask(self, mask: int) -> Fraction:
        total = Fraction(0)
        i = 0
        while mask:
            if mask & 1:
                total += self.values[i]
            mask >>= 1
            i += 1
        return total

    def parameter_fractions(self) -> tuple:
        return self.values

    def scaled(self, factor) -> "Additive":
        factor = as_fraction(factor)
        return Additive(tuple(v * factor for v in self.values))


@dataclass(frozen=True)
class UnitDemand(SuccessFunction):
    """f(S) = max per-action value in S (0 on the empty set)."""

    values: tuple

    kind: ClassVar[str] = "unit-demand"
    gs_certified: ClassVar[bool] = True

    def __post_init__(self):
        object.__setattr__(self, "values", _coerce_fractions(self.values, "values"))

    @property
    def n(self) -> int:
        return len(self.values)

    def value_mask(self, mask: int) -> Fraction:
        best = Fraction(0)
        i = 0
        while mask:
            if mask & 1 and self.values[i] > best:
                best = self.values[i]
            mask >>= 1
            i += 1
        return best

    def parameter_fractions(self) -> tuple:
        return self.values

    def scaled(self, factor) -> "UnitDemand":
        factor = as_fraction(factor)
        return UnitDemand(tuple(v * factor for v in self.values))


@dataclass(frozen=True)
class UniformMatroid:
    """Independent sets are all subsets of size at most ``rank``."""

    rank: int

    def admits(self, counts: dict, a: int, taken: int) -> bool:
        return taken < self.rank

    def block_of(self, a: int):
        return 0


@dataclass(frozen=True)
class PartitionMatroid:
    """Ground set split into blocks, each with its own capacity."""

    blocks: tuple
    capacities: tuple

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(frozenset(b) for b in self.blocks))
        object.__setattr__(self, "capacities", tuple(int(c) for c in self.capacities))

    def block_of(self, a: int) -> int:
        for idx, block in enumerate(self.blocks):
            if a in block:
                return idx
        raise DomainError(f"action {a} not covered by any partition block")


@dataclass(frozen=True)
class WeightedMatroidRank(SuccessFunction):
    """f(S) = max weight of an independent subset of S."""

    weights: tuple
    matroid: Union[UniformMatroid, PartitionMatroid]

    kind: ClassVar[str] = "matroid-rank"
    gs_certified: ClassVar[bool] = True

    def __post_init__(self):
        object.__setattr__(self, "weights", _coerce_fractions(self.weights, "weights"))

    @property
    def n(self) -> int:
        return len(self.weights)

    def value_mask(self, mask: int) -> Fraction:
        members = []
        i = 0
        m = mask
        while m:
            if m & 1:
                members.append(i + 1)
            m >>= 1
            i += 1
        # Greedy by weight is optimal on matroids.
        members.sort(key=lambda a: self.weights[a - 1], reverse=True)
        total = Fraction(0)
        if isinstance(self.matroid, UniformMatroid):
            for a in members[: max(self.matroid.rank, 0)]:
                total += self.weights[a - 1]
            return total
        used = [0] * len(self.matroid.blocks)
        for a in members:
            b = self.matroid.block_of(a)
            if used[b] < self.matroid.capacities[b]:
                used[b] += 1
                total += self.weights[a - 1]
        return total

    def parameter_fractions(self) -> tuple:
        return self.weights

    def scaled(self, factor) -> "WeightedMatroidRank":
        factor = as_fraction(factor)
        return WeightedMatroidRank(
            tuple(w * factor for w in self.weights), self.matroid
        )


@dataclass(frozen=True)
class BudgetAdditive(SuccessFunction):
    """f(S) = min(budget, sum of per-action values). Not greedy-certified."""

    values: tuple
    budget: Fraction

    kind: ClassVar[str] = "budget-additive"

    def __post_init__(self):
        object.__setattr__(self, "values", _coerce_fractions(self.values, "values"))
        object.__setattr__(self, "budget", as_fraction(self.budget))

    @property
    def n(self) -> int:
        return len(self.values)

    def value_mask(self, mask: int) -> Fraction:
        total = Fraction(0)
        i = 0
        while mask:
            if mask & 1:
                total += self.values[i]
            mask >>= 1
            i += 1
        return min(self.budget, total)

    def parameter_fractions(self) -> tuple:
        return self.values + (self.budget,)

    def scaled(self, factor) -> "BudgetAdditive":
        factor = as_fraction(factor)
        return BudgetAdditive(
            tuple(v * factor for v in self.values), self.budget * factor
        )


@dataclass(frozen=True)
class Coverage(SuccessFunction):
    """Weighted coverage: actions cover universe elements, f sums covered weight.

    ``weights[j]`` is the weight of universe element j; ``covers[i]`` lists the
    element indices covered by action i+1.
    """

    weights: tuple
    covers: tuple

    kind: ClassVar[str] = "coverage"

    def __post_init__(self):
        object.__setattr__(self, "weights", _coerce_fractions(self.weights, "weights"))
        object.__setattr__(
            self, "covers", tuple(frozenset(int(j) for j in c) for c in self.covers)
        )

    @property
    def n(self) -> int:
        return len(self.covers)

    @property
    def universe_size(self) -> int:
        return len(self.weights)

    def _cover_mask(self, i: int) -> int:
        mask = 0
        for j in self.covers[i]:
            mask |= 1 << j
        return mask

    def value_mask(self, mask: int) -> Fraction:
        covered = 0
        i = 0
        while mask:
            if mask & 1:
                covered |= self._cover_mask(i)
            mask >>= 1
            i += 1
        total = Fraction(0)
        j = 0
        while covered:
            if covered & 1:
                total += self.weights[j]
            covered >>= 1
            j += 1
        return total

    def parameter_fractions(self) -> tuple:
        return self.weights

    def scaled(self, factor) -> "Coverage":
        factor = as_fraction(factor)
        return Coverage(tuple(w * factor for w in self.weights), self.covers)


@dataclass(frozen=True)
class ExplicitTable(SuccessFunction):
    """All 2**n values given explicitly; the universal interchange format."""

    n_actions: int
    table: tuple

    kind: ClassVar[str] = "table"

    def __post_init__(self):
        if self.n_actions > EXPLICIT_TABLE_MAX_ACTIONS:
            raise ResourceLimitError(
                f"explicit tables support at most {EXPLICIT_TABLE_MAX_ACTIONS} actions"
            )
        object.__setattr__(self, "table", _coerce_fractions(self.table, "table"))
        if len(self.table) != 1 << self.n_actions:
            raise DomainError(
                f"table needs {1 << self.n_actions} entries, got {len(self.table)}"
            )

    @property
    def n(self) -> int:
        return self.n_actions

    def value_mask(self, mask: int) -> Fraction:
        if not 0 <= mask < len(self.table):
            raise DomainError(f"subset mask {mask} outside the table")
        return self.table[mask]

    def parameter_fractions(self) -> tuple:
        return self.table

    def scaled(self, factor) -> "ExplicitTable":
        factor = as_fraction(factor)
        return ExplicitTable(self.n_actions, tuple(v * factor for v in self.table))


@dataclass(frozen=True)
class Instance:
    """A binary-outcome problem: success function, positive costs, optional k.

    ``scale`` declares the upper bound for f values (1 unless a generator
    emitted an unnormalized construction); contract values always live in
    [0, 1] regardless of scale.
    """

    f: SuccessFunction
    costs: tuple
    k: int | None = None
    scale: Fraction = Fraction(1)
    meta: Any = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "costs", _coerce_fractions(self.costs, "costs"))
        object.__setattr__(self, "scale", as_fraction(self.scale))
        if len(self.costs) != self.f.n:
            raise DomainError(
                f"{len(self.costs)} costs for {self.f.n} actions"
            )
        if self.k is not None and (not isinstance(self.k, int) or self.k < 1):
            raise DomainError(f"k must be a positive integer, got {self.k!r}")

    @property
    def n(self) -> int:
        return self.f.n

    def cost_of(self, a: int) -> Fraction:
        if not 1 <= a <= self.n:
            raise DomainError(f"action {a} outside ground set 1..{self.n}")
        return self.costs[a - 1]

    def cost(self, actions: Iterable[int]) -> Fraction:
        return sum(
            (self.costs[a - 1] for a in action_set(self.n, actions)), Fraction(0)
        )

    def cost_mask(self, mask: int) -> Fraction:
        total = Fraction(0)
        i = 0
        while mask:
            if mask & 1:
                total += self.costs[i]
            mask >>= 1
            i += 1
        return total


def value(f: SuccessFunction, actions: Iterable[int]) -> Fraction:
    """Exact f(S) for a subset of the ground set."""
    return f.value(actions)


def marginal(f: SuccessFunction, a: int, actions: Iterable[int]) -> Fraction:
    """Exact f(a | S) = f(S + a) - f(S); a must lie outside S."""
    return f.marginal(a, actions)


def cost(inst: Instance, actions: Iterable[int]) -> Fraction:
    """Additive cost of a subset; cost of the empty set is 0."""
    return inst.cost(actions)


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        if self.ok:
            return "valid"
        return "\n".join(f"violation: {v}" for v in self.violations)


def _structural_violations(f: SuccessFunction) -> list:
    out = []
    if isinstance(f, (Additive, UnitDemand)):
        if any(v < 0 for v in f.values):
            out.append("negative per-action value")
    elif isinstance(f, WeightedMatroidRank):
        if any(w < 0 for w in f.weights):
            out.append("negative matroid weight")
        m = f.matroid
        if isinstance(m, UniformMatroid):
            if m.rank < 0:
                out.append("negative matroid rank")
        else:
            if len(m.blocks) != len(m.capacities):
                out.append("partition blocks and capacities differ in length")
            if any(c < 0 for c in m.capacities):
                out.append("negative block capacity")
            seen = set()
            for block in m.blocks:
                if block & seen:
                    out.append("partition blocks overlap")
                seen |= block
            if seen != set(range(1, f.n + 1)):
                out.append("partition blocks do not cover the ground set")
    elif isinstance(f, BudgetAdditive):
        if any(v < 0 for v in f.values):
            out.append("negative per-action value")
        if f.budget < 0:
            out.append("negative budget")
    elif isinstance(f, Coverage):
        if any(w < 0 for w in f.weights):
            out.append("negative universe weight")
        for i, cov in enumerate(f.covers):
            if any(not 0 <= j < f.universe_size for j in cov):
                out.append(f"action {i + 1} covers elements outside the universe")
    return out


def validate(inst: Instance) -> ValidationReport:
    """Check instance well-formedness; violations are reported, not raised."""
    out = []
    f = inst.f
    if f.n < 1:
        out.append("empty action set")
    out.extend(_structural_violations(f))
    for idx, c in enumerate(inst.costs):
        if c <= 0:
            out.append(f"non-positive cost for action {idx + 1}")
    if inst.scale <= 0:
        out.append("non-positive scale")

    exhaustive = isinstance(f, (ExplicitTable, Coverage)) and f.n <= EXPLICIT_TABLE_MAX_ACTIONS
    if not out:
        if f.value_mask(0) != 0:
            out.append("f(empty set) != 0")
        if exhaustive:
            table = value_table(f)
            full = (1 << f.n) - 1
            for mask in range(1 << f.n):
                if not 0 <= table[mask] <= inst.scale:
                    out.append(f"f value outside [0, scale] on mask {mask}")
                    break
            for mask in range(1 << f.n):
                rest = full & ~mask
                m = rest
                bad = False
                while m:
                    low = m & -m
                    if table[mask | low] < table[mask]:
                        out.append("f is not monotone")
                        bad = True
                        break
                    m ^= low
                if bad:
                    break
        else:
            # Structural classes are monotone by construction once their
            # parameters are non-negative; range reduces to the full set.
            if f.value_mask((1 << f.n) - 1) > inst.scale:
                out.append("f(full set) exceeds the declared scale")

    if inst.k is not None and not out:
        for v in f.parameter_fractions():
            if not is_k_valid(v, inst.k):
                out.append(f"f value {v} is not a multiple of 2**-{inst.k}")
                break
        for c in inst.costs:
            if not is_k_valid(c, inst.k):
                out.append(f"cost {c} is not a multiple of 2**-{inst.k}")
                break
    return ValidationReport(tuple(out))


@lru_cache(maxsize=512)
def value_table(f: SuccessFunction) -> tuple:
    """All 2**n values of f indexed by bitmask (cached per function)."""
    n = f.n
    if n > EXPLICIT_TABLE_MAX_ACTIONS:
        raise ResourceLimitError(f"cannot tabulate {n} actions")
    size = 1 << n
    if isinstance(f, ExplicitTable):
        return f.table
    if isinstance(f, (Additive, BudgetAdditive)):
        sums = [Fraction(0)] * size
        for mask in range(1, size):
            low = mask & -mask
            sums[mask] = sums[mask ^ low] + f.values[low.bit_length() - 1]
        if isinstance(f, Additive):
            return tuple(sums)
        return tuple(min(f.budget, s) for s in sums)
    if isinstance(f, UnitDemand):
        vals = [Fraction(0)] * size
        for mask in range(1, size):
            low = mask & -mask
            vals[mask] = max(vals[mask ^ low], f.values[low.bit_length() - 1])
        return tuple(vals)
    if isinstance(f, Coverage):
        cover_masks = [f._cover_mask(i) for i in range(n)]
        union = [0] * size
        for mask in range(1, size):
            low = mask & -mask
            union[mask] = union[mask ^ low] | cover_masks[low.bit_length() - 1]
        weight_sum: dict = {}
        out = []
        for mask in range(size):
            u = union[mask]
            if u not in weight_sum:
                total = Fraction(0)
                m, j = u, 0
                while m:
                    if m & 1:
                        total += f.weights[j]
                    m >>= 1
                    j += 1
                weight_sum[u] = total
            out.append(weight_sum[u])
        return tuple(out)
    return tuple(f.value_mask(mask) for mask in range(size))


@lru_cache(maxsize=512)
def cost_table(inst: Instance) -> tuple:
    """All 2**n subset costs indexed by bitmask (cached per instance)."""
    n = inst.n
    if n > EXPLICIT_TABLE_MAX_ACTIONS:
        raise ResourceLimitError(f"cannot tabulate {n} actions")
    size = 1 << n
    out = [Fraction(0)] * size
    for mask in range(1, size):
        low = mask & -mask
        out[mask] = out[mask ^ low] + inst.costs[low.bit_length() - 1]
    return tuple(out)
