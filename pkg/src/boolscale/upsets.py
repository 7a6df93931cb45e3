"""A computable non-Archimedean scale: ultimately periodic subsets of N.

The carrier is the Boolean algebra of sets that are exactly periodic beyond a
finite threshold.  It is closed under union, intersection, and complement,
membership and difference cardinalities are decidable, and it is rich enough
to exhibit the phenomena of the galaxy-structured scale on subsets of N:
values rho(A) compared by difference cardinalities, galaxies of values one
point apart, infinitesimals, dividedness witnesses, a discontinuity at the
finite-kernel homomorphism, and failure of countable additivity.  Full P(N)
is not representable here; everything below lives in this subalgebra.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import islice
from math import lcm
from typing import Iterable, Iterator


class UPSetError(ValueError):
    pass


class NotStrictlyBelowError(UPSetError):
    pass


class _Aleph0:
    """Countable infinity, strictly above every int."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "aleph0"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("aleph0")

    def __gt__(self, other):
        return isinstance(other, int)

    def __ge__(self, other):
        return True

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self


ALEPH0 = _Aleph0()


def _divisors(p: int) -> list[int]:
    return [d for d in range(1, p + 1) if p % d == 0]


class UPSet:
    """An ultimately periodic subset of N = {0, 1, 2, ...}.

    Membership below ``threshold`` is exactly ``head``; at and beyond it,
    n is a member iff n mod period is in ``residues``.  Construction
    normalizes to the unique minimal form: smallest eventual period, then
    smallest threshold from which the set is exactly periodic.
    """

    __slots__ = ("period", "residues", "threshold", "head")

    def __init__(self, period: int, residues: Iterable[int] = (),
                 threshold: int = 0, head: Iterable[int] = ()):
        if period < 1:
            raise UPSetError("period must be at least 1")
        res = frozenset(r % period for r in residues)
        t = threshold
        hd = set(h for h in head if 0 <= h < t)
        for d in _divisors(period):
            folded = frozenset(r % d for r in res)
            if res == frozenset(r for r in range(period) if r % d in folded):
                period, res = d, folded
                break
        while t > 0:
            if ((t - 1) in hd) != ((t - 1) % period in res):
                break
            hd.discard(t - 1)
            t -= 1
        self.period = period
        self.residues = res
        self.threshold = t
        self.head = frozenset(hd)

    # -- constructors -----------------------------------------------------

    @classmethod
    def finite(cls, members: Iterable[int]) -> "UPSet":
        ms = set(members)
        span = max(ms) + 1 if ms else 0
        return cls(1, (), span, ms)

    @classmethod
    def periodic(cls, period: int, residues: Iterable[int]) -> "UPSet":
        return cls(period, residues)

    @classmethod
    def cofinite(cls, excluded: Iterable[int]) -> "UPSet":
        return ~cls.finite(excluded)

    @classmethod
    def tail(cls, n: int) -> "UPSet":
        """{n, n+1, n+2, ...}"""
        return cls(1, (0,), n, ())

    @classmethod
    def progression(cls, start: int, step: int) -> "UPSet":
        """{start, start+step, start+2*step, ...}"""
        return cls(step, (start % step,), start, ())

    # -- queries ----------------------------------------------------------

    def __contains__(self, n: int) -> bool:
        if n < 0:
            return False
        if n < self.threshold:
            return n in self.head
        return n % self.period in self.residues

    def is_empty(self) -> bool:
        return not self.residues and not self.head

    def is_finite(self) -> bool:
        return not self.residues

    def cardinality(self):
        return len(self.head) if self.is_finite() else ALEPH0

    def members(self) -> Iterator[int]:
        n = 0
        while True:
            if n in self:
                yield n
            n += 1

    def _key(self):
        return (self.period, self.residues, self.threshold, self.head)

    def __eq__(self, other):
        return isinstance(other, UPSet) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        if self.is_finite():
            return "{" + ",".join(map(str, sorted(self.head))) + "}"
        first = list(islice(self.members(), 6))
        return "{" + ",".join(map(str, first)) + ",...}"

    def describe(self) -> str:
        res = ",".join(map(str, sorted(self.residues)))
        hd = ",".join(map(str, sorted(self.head)))
        return (f"head {{{hd}}} below {self.threshold}, "
                f"then n mod {self.period} in {{{res}}}")

    # -- Boolean operations ----------------------------------------------

    def _combine(self, other: "UPSet", keep) -> "UPSet":
        p = lcm(self.period, other.period)
        t = max(self.threshold, other.threshold)
        res = (r for r in range(p)
               if keep(r % self.period in self.residues,
                       r % other.period in other.residues))
        head = (n for n in range(t) if keep(n in self, n in other))
        return UPSet(p, res, t, head)

    def __and__(self, other: "UPSet") -> "UPSet":
        return self._combine(other, lambda a, b: a and b)

    def __or__(self, other: "UPSet") -> "UPSet":
        return self._combine(other, lambda a, b: a or b)

    def __sub__(self, other: "UPSet") -> "UPSet":
        return self._combine(other, lambda a, b: a and not b)

    def __invert__(self) -> "UPSet":
        return UPSet(self.period,
                     set(range(self.period)) - self.residues,
                     self.threshold,
                     set(range(self.threshold)) - self.head)

    def __le__(self, other: "UPSet") -> bool:
        return (self - other).is_empty()

    def __lt__(self, other: "UPSet") -> bool:
        return self <= other and self != other


EMPTY = UPSet.finite(())
NATURALS = UPSet.periodic(1, (0,))
EVENS = UPSet.periodic(2, (0,))
ODDS = UPSet.periodic(2, (1,))


@dataclass(frozen=True)
class UpsetOps:
    union: UPSet
    intersection: UPSet
    complement: UPSet
    difference: UPSet
    cardinality_of_difference: object  # int or ALEPH0


def upset_ops(a: UPSet, b: UPSet) -> UpsetOps:
    """Boolean combinations of a and b, plus |a minus b|."""
    diff = a - b
    return UpsetOps(a | b, a & b, ~a, diff, diff.cardinality())


class Comparison(Enum):
    LT = "lt"
    EQ = "eq"
    GT = "gt"
    INCOMPARABLE = "incomparable"


def nonarch_compare(a: UPSet, b: UPSet) -> Comparison:
    """Order by difference cardinalities: rho(a) < rho(b) iff |a-b| < |b-a|.

    Equal infinite differences are incomparable; equal finite differences
    mean equal values.
    """
    ab = (a - b).cardinality()
    ba = (b - a).cardinality()
    if ab == ALEPH0 and ba == ALEPH0:
        return Comparison.INCOMPARABLE
    if ab == ba:
        return Comparison.EQ
    return Comparison.LT if ab < ba else Comparison.GT


@dataclass(frozen=True)
class GalaxyValue:
    """A value of the scale: the periodic core of its representatives plus an
    integer offset against the pure-core representative.  Two sets get the
    same value iff they share a core and an offset."""

    core: UPSet
    offset: int

    def __post_init__(self):
        if self.core.threshold != 0:
            raise UPSetError("core must be purely periodic")
        if self.core.is_empty() and self.offset < 0:
            raise UPSetError("finite-galaxy values cannot have negative offset")
        if self.core == NATURALS and self.offset > 0:
            raise UPSetError("no value lies above the whole of N")

    def representative(self) -> UPSet:
        """A set whose value is this one."""
        if self.offset >= 0:
            extra = islice((~self.core).members(), self.offset)
            return self.core | UPSet.finite(extra)
        removed = islice(self.core.members(), -self.offset)
        return self.core - UPSet.finite(removed)

    def successor(self) -> "GalaxyValue":
        return GalaxyValue(self.core, self.offset + 1)

    def predecessor(self) -> "GalaxyValue":
        return GalaxyValue(self.core, self.offset - 1)

    def compare(self, other: "GalaxyValue") -> Comparison:
        if self.core == other.core:
            d = self.offset - other.offset
            return (Comparison.EQ if d == 0
                    else Comparison.LT if d < 0 else Comparison.GT)
        return nonarch_compare(self.representative(), other.representative())

    def leq(self, other: "GalaxyValue") -> bool:
        return self.compare(other) in (Comparison.LT, Comparison.EQ)

    def __repr__(self):
        if self.core.is_empty():
            return f"rho(empty)+{self.offset}" if self.offset else "rho(empty)"
        sign = "+" if self.offset >= 0 else ""
        tag = f"{sign}{self.offset}" if self.offset else ""
        return f"rho({self.core!r}){tag}"


def galaxy_value(a: UPSet) -> GalaxyValue:
    """rho(a): the core is a's periodic part, the offset counts the finite
    exchanges separating a from that core."""
    core = UPSet.periodic(a.period, a.residues)
    plus = (a - core).cardinality()
    minus = (core - a).cardinality()
    return GalaxyValue(core, plus - minus)


def value_complement(v: GalaxyValue) -> GalaxyValue:
    """The complement of the value within [rho(empty), rho(N)]."""
    return galaxy_value(~v.representative())


@dataclass
class InfinitesimalReport:
    value: GalaxyValue
    infinitesimal: bool
    witnesses: tuple[UPSet, ...]
    reason: str

    def __bool__(self):
        return self.infinitesimal

    @staticmethod
    def family(k: int) -> UPSet:
        """k-th progression {n : n = 2^k - 1 mod 2^(k+1)}; pairwise disjoint
        across k because n mod 2^(j+1) = 2^(j+1) - 1 != 2^j - 1 for members
        with k > j."""
        return UPSet.progression(2 ** k - 1, 2 ** (k + 1))


def is_infinitesimal(v: GalaxyValue, checked: int = 8) -> InfinitesimalReport:
    """A value is infinitesimal iff some infinite pairwise disjoint family
    sits at or above it; here exactly the finite-core (initial galaxy) values.

    For those, the dyadic progressions witness it.  For an infinite-core
    value no family exists: any set at or above it must contain a residue
    class of the core up to finitely many points, so two such sets intersect.
    """
    if v.core.is_empty():
        fam = tuple(InfinitesimalReport.family(k) for k in range(checked))
        for i, x in enumerate(fam):
            if nonarch_compare(v.representative(), x) is not Comparison.LT:
                raise UPSetError("witness family member not above the value")
            for y in fam[i + 1:]:
                if not (x & y).is_empty():
                    raise UPSetError("witness family not disjoint")
        return InfinitesimalReport(
            v, True, fam,
            "finite-core value; disjoint progressions all lie above it")
    return InfinitesimalReport(
        v, False, (),
        "infinite-core value; any two sets at or above it share a residue "
        "class of the core and therefore intersect, so no infinite disjoint "
        "family fits")


def divided_witness(a: UPSet, b: UPSet) -> UPSet:
    """For rho(a) < rho(b), a subset b1 of b with rho(b1) = rho(a).

    Strictly-below forces |a - b| finite, so a & b differs from a by finitely
    many points; adding the same number of points drawn from b - a restores
    the offset without leaving b.
    """
    if nonarch_compare(a, b) is not Comparison.LT:
        raise NotStrictlyBelowError("first set must sit strictly below the second")
    missing = (a - b).cardinality()
    patch = UPSet.finite(islice((b - a).members(), missing))
    b1 = (a & b) | patch
    assert nonarch_compare(b1, a) is Comparison.EQ and b1 <= b and b1 != b
    return b1


@dataclass
class DiscontinuityReport:
    """The tail chain T_n = {n, n+1, ...} has meet empty, yet rho(empty)+5
    bounds every rho(T_n) from below: the value of the meet is not the meet
    of the values, so the scaling is discontinuous at the homomorphism whose
    kernel is the finite sets.  The same chain kills countable additivity."""

    checked_tails: dict
    gap: int
    meet_value: GalaxyValue
    lower_bound: GalaxyValue
    bound_strictly_above_meet: bool
    meet_empty_checks: int
    partial_sums_checked: int
    partial_sums_all_below_total: bool

    @property
    def ok(self) -> bool:
        return (all(self.checked_tails.values())
                and self.bound_strictly_above_meet
                and self.partial_sums_all_below_total)

    def summary(self) -> str:
        ns = ", ".join(str(n) for n in self.checked_tails)
        lines = [
            f"tail chain T_n = {{n, n+1, ...}} with meet empty "
            f"(first {self.meet_empty_checks} exclusions checked)",
            f"{self.lower_bound!r} <= rho(T_n) for n in {{{ns}}}: "
            f"{all(self.checked_tails.values())}",
            f"{self.lower_bound!r} strictly above {self.meet_value!r}: "
            f"{self.bound_strictly_above_meet}",
            f"countable additivity fails: first {self.partial_sums_checked} "
            f"singleton partial sums all below rho(N): "
            f"{self.partial_sums_all_below_total}",
        ]
        return "\n".join(lines)


def discontinuity_witness(sample_ns=(0, 10, 1000), gap: int = 5,
                          partial_sums: int = 50) -> DiscontinuityReport:
    bound = GalaxyValue(EMPTY, gap)
    checked = {}
    for n in sample_ns:
        t = UPSet.tail(n)
        checked[n] = bound.leq(galaxy_value(t))
    # meet of the chain is empty: m falls out of the chain at stage m+1
    meet_checks = 32
    for m in range(meet_checks):
        if m in UPSet.tail(m + 1):
            raise UPSetError("tail chain member failed to drop out")
    total = galaxy_value(NATURALS)
    below = all(
        GalaxyValue(EMPTY, m).compare(total) is Comparison.LT
        for m in range(1, partial_sums + 1)
    )
    zero = GalaxyValue(EMPTY, 0)
    return DiscontinuityReport(
        checked_tails=checked,
        gap=gap,
        meet_value=zero,
        lower_bound=bound,
        bound_strictly_above_meet=zero.compare(bound) is Comparison.LT,
        meet_empty_checks=meet_checks,
        partial_sums_checked=partial_sums,
        partial_sums_all_below_total=below,
    )


@dataclass
class ShiftReport:
    """Shifting one galaxy up by one is a poset-automorphism of the value
    order, but not a scale-automorphism: it breaks complement reversal."""

    galaxy_core: UPSet
    pairs_checked: int
    order_preserved: bool
    witness_value: GalaxyValue
    complement_of_image: GalaxyValue
    image_of_complement: GalaxyValue

    @property
    def breaks_complements(self) -> bool:
        return self.complement_of_image != self.image_of_complement

    def summary(self) -> str:
        return (
            f"shift of the {self.galaxy_core!r}-galaxy preserves order on "
            f"{self.pairs_checked} sampled comparable pairs: {self.order_preserved}; "
            f"complement of shifted {self.witness_value!r} is "
            f"{self.complement_of_image!r} but the shift maps the complement to "
            f"{self.image_of_complement!r}: relative complementation broken: "
            f"{self.breaks_complements}"
        )


def galaxy_shift_report(values: Iterable[GalaxyValue] = ()) -> ShiftReport:
    """Probe the map v -> v+1 on the evens galaxy, identity elsewhere."""
    core = EVENS

    def shift(v: GalaxyValue) -> GalaxyValue:
        return v.successor() if v.core == core else v

    pool = list(values)
    if not pool:
        pool = [GalaxyValue(EMPTY, k) for k in range(4)]
        pool += [GalaxyValue(EVENS, k) for k in (-2, -1, 0, 1, 2)]
        pool += [GalaxyValue(ODDS, k) for k in (-1, 0, 1)]
        pool += [GalaxyValue(UPSet.periodic(4, (0,)), k) for k in (-1, 0, 1)]
        pool += [GalaxyValue(NATURALS, k) for k in (-2, -1, 0)]
    checked = 0
    preserved = True
    for v in pool:
        for w in pool:
            rel = v.compare(w)
            if rel is Comparison.INCOMPARABLE:
                continue
            checked += 1
            if shift(v).compare(shift(w)) is not rel:
                preserved = False
    x = GalaxyValue(EVENS, 0)
    return ShiftReport(
        galaxy_core=core,
        pairs_checked=checked,
        order_preserved=preserved,
        witness_value=x,
        complement_of_image=value_complement(shift(x)),
        image_of_complement=shift(value_complement(x)),
    )


def upper_bound_predecessor(v: GalaxyValue, w: GalaxyValue,
                            ub: GalaxyValue) -> GalaxyValue:
    """For incomparable v, w and an upper bound ub, the predecessor of ub is
    still an upper bound: no upper bound is minimal, so {v, w} has no join."""
    if v.compare(w) is not Comparison.INCOMPARABLE:
        raise UPSetError("values must be incomparable")
    if not (v.leq(ub) and w.leq(ub)):
        raise UPSetError("not an upper bound")
    pred = ub.predecessor()
    if not (v.leq(pred) and w.leq(pred)):
        raise UPSetError("predecessor stopped bounding; join would exist")
    return pred


def random_upset(rng, max_period: int = 12, head_span: int = 10) -> UPSet:
    """A random ultimately periodic set; used by sampling tests and demos."""
    p = rng.randrange(1, max_period + 1)
    residues = [r for r in range(p) if rng.random() < 0.4]
    head = [n for n in range(head_span) if rng.random() < 0.3]
    return UPSet(p, residues, head_span, head)
