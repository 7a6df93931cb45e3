"""Continued-fraction arithmetic on linearly ordered scales.

On a linearly ordered divided finite scale, repeated subtraction expands any
formal quotient eta/zeta into a continued fraction, exactly as the Euclidean
algorithm does for rationals.  Expanding every class against the top class
yields the unique normalized measure on the scale, which in turn supports a
partial multiplication (pull the rational product back through the measure)
and an exact conditional-probability product rule via restriction to a
relative algebra.

Finite scales have no nonzero infinitesimals (an infinitesimal needs an
infinite pairwise-disjoint witness family), so no Archimedean check appears
anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Sequence

from .algebra import Algebra, Element
from .divide import NotDividedError
from .scaling import Scale, Scaling, ScalingError, Undefined

ZERO = Fraction(0)
ONE = Fraction(1)


class NotLinearError(ScalingError):
    pass


class ZeroDenominatorError(ScalingError):
    pass


class ConditionOnZeroError(ScalingError):
    pass


NO_PRODUCT = Undefined("product value outside the scale")


def continued_fraction(s: Scale, eta: int, zeta: int) -> list[int]:
    """Entries [n1, n2, ...] of the formal expansion of eta/zeta, computed
    by the repeated-subtraction loop: n_i is the largest number of times the
    current denominator can be subtracted from the current numerator, then
    the two switch roles until the remainder is zero.

    The loop needs every subtraction below a larger class to exist; where
    the scale lacks one, the remainder stalls on both sides and
    NotDividedError is raised rather than looping forever.
    """
    if not s.is_linear():
        raise NotLinearError("expansion needs a linearly ordered scale")
    if zeta == s.zero:
        raise ZeroDenominatorError("expansion against the zero class")
    alpha, beta = zeta, eta
    entries: list[int] = []
    while True:
        n = 0
        while True:
            step = s.sub(beta, alpha)
            if isinstance(step, Undefined):
                break
            beta = step
            n += 1
        entries.append(n)
        if beta == s.zero:
            return entries
        if n == 0 and len(entries) >= 2:
            raise NotDividedError(
                "subtraction stalls; the scale is not divided enough "
                f"to expand (entries so far {entries})"
            )
        alpha, beta = beta, alpha


def cf_value(entries: Sequence[int]) -> Fraction:
    """Exact rational value of a finite continued fraction."""
    if not entries:
        raise ScalingError("empty expansion")
    value = Fraction(entries[-1])
    for e in reversed(entries[:-1]):
        value = e + 1 / value
    return value


@dataclass
class CanonicalMeasure:
    """The unique normalized measure on a linearly ordered divided scale,
    indexed by class id."""

    scale: Scale
    values: tuple[Fraction, ...]

    def value(self, cls: int) -> Fraction:
        return self.values[cls]

    def of_element(self, s: Scaling, x: Element) -> Fraction:
        return self.values[s.rho(x)]

    def preimage(self, q: Fraction) -> int | None:
        for c, v in enumerate(self.values):
            if v == q:
                return c
        return None


def canonical_measure(s: Scale) -> CanonicalMeasure:
    """Expand every class against the top class and evaluate exactly.
    Verifies strict monotonicity and additivity on every defined sum, so a
    successfully returned measure is correct by construction."""
    values = tuple(cf_value(continued_fraction(s, c, s.one)) for c in range(s.k))
    for i in range(s.k):
        for j in range(s.k):
            if s.scaling.lt_class(i, j) and not values[i] < values[j]:
                raise NotDividedError(
                    f"expansion values are not strictly increasing "
                    f"({values[i]} !< {values[j]})"
                )
            total = s.add(i, j)
            if not isinstance(total, Undefined) and (
                values[i] + values[j] != values[total]
            ):
                raise NotDividedError(
                    f"expansion values are not additive on class sum "
                    f"{i}+{j}={total}"
                )
    return CanonicalMeasure(s, values)


def _canon(s: Scale) -> CanonicalMeasure:
    if not hasattr(s, "_canonical_measure"):
        s._canonical_measure = canonical_measure(s)
    return s._canonical_measure


def scale_multiply(s: Scale, zeta: int, eta: int) -> int | Undefined:
    """Product through the canonical measure: the class whose measure is
    mu(zeta) * mu(eta) when that rational lies in the measure's image."""
    mu = _canon(s)
    found = mu.preimage(mu.value(zeta) * mu.value(eta))
    if found is None:
        return NO_PRODUCT
    return found


def restrict_scaling(s: Scaling, z: Element) -> Scaling:
    """The scaling induced on the relative algebra of elements below z,
    with z's atoms relabelled as its own atom set."""
    alg = s.algebra
    idx = [i for i in range(alg.n) if z.mask >> i & 1]
    sub = Algebra([alg.atom_labels[i] for i in idx])
    class_map: dict[int, int] = {}
    class_of: list[int] = []
    for m in range(sub.size):
        om = 0
        mm = m
        while mm:
            bit = mm & -mm
            om |= 1 << idx[bit.bit_length() - 1]
            mm ^= bit
        oc = s.class_of[om]
        if oc not in class_map:
            class_map[oc] = len(class_map)
        class_of.append(class_map[oc])
    rows = [0] * len(class_map)
    for oc, i in class_map.items():
        for od, j in class_map.items():
            if s.lt_class(oc, od):
                rows[i] |= 1 << j
    return Scaling(sub, class_of, rows)


def conditional_probability(s: Scaling, x: Element, z: Element) -> Fraction:
    """Measure of x within the scale restricted to [0, z], normalized so z
    itself has measure 1."""
    if s.rho(z) == s.zero_class:
        raise ConditionOnZeroError("conditioning on a zero-class element")
    restr = restrict_scaling(s, z)
    meet = x & z
    inside = restr.algebra.element(meet.labels())
    return _canon(restr.scale()).value(restr.rho(inside))


@dataclass
class ProductRuleReport:
    ok: bool
    joint: Fraction
    conditional: Fraction
    given: Fraction
    quotient_entries: list[int]
    conditional_entries: list[int]
    witness: str | None = None

    def __bool__(self):
        return self.ok


def verify_product_rule(s: Scaling, x: Element, z: Element) -> ProductRuleReport:
    """Check mu(x and z) = P(x|z) * mu(z) exactly, and that the formal
    expansion of the quotient mu(x and z)/mu(z) on the full scale has the
    same entries as the expansion of the conditional against 1 on the
    restricted scale."""
    full = s.scale()
    mu = _canon(full)
    meet = x & z
    joint = mu.value(s.rho(meet))
    given = mu.value(s.rho(z))
    cond = conditional_probability(s, x, z)

    quotient_entries = continued_fraction(full, s.rho(meet), s.rho(z))
    restr = restrict_scaling(s, z)
    inside = restr.algebra.element(meet.labels())
    conditional_entries = continued_fraction(
        restr.scale(), restr.rho(inside), restr.one_class
    )

    witness = None
    if joint != cond * given:
        witness = f"{joint} != {cond} * {given}"
    elif quotient_entries != conditional_entries:
        witness = (
            f"expansion mismatch: {quotient_entries} vs {conditional_entries}"
        )
    return ProductRuleReport(
        witness is None,
        joint,
        cond,
        given,
        quotient_entries,
        conditional_entries,
        witness,
    )


# -- uniform refinements --------------------------------------------------


@lru_cache(maxsize=None)
def uniform_scale(n: int) -> Scale:
    """The cardinality scale on n unit atoms: class of a set is its size.
    Linear and divided; the canonical measure sends size m to m/n."""
    alg = Algebra([f"u{i + 1}" for i in range(n)])
    class_of = [bin(m).count("1") for m in range(alg.size)]
    rows = [0] * (n + 1)
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            rows[i] |= 1 << j
    return Scale(Scaling(alg, class_of, rows))


@dataclass
class Refinement:
    """A rational measure re-expressed over unit fragments: atom t of the
    original algebra stands for counts[t] atoms of a uniform scale, so every
    original element lands in the uniform class given by its count sum."""

    algebra: Algebra
    counts: tuple[int, ...]
    denominator: int

    def scale(self) -> Scale:
        return uniform_scale(self.denominator)

    def class_of(self, x: Element) -> int:
        return sum(
            self.counts[i] for i in range(self.algebra.n) if x.mask >> i & 1
        )

    def value(self, x: Element) -> Fraction:
        """Measure of x recovered through the uniform scale's expansion,
        not by direct rational division."""
        return _canon(self.scale()).value(self.class_of(x))


def refine_measure(algebra: Algebra, masses: Sequence[Fraction]) -> Refinement:
    if len(masses) != algebra.n:
        raise ScalingError("one mass per atom required")
    masses = [Fraction(m) for m in masses]
    if any(m <= 0 for m in masses):
        raise ScalingError("masses must be strictly positive")
    if sum(masses) != 1:
        raise ScalingError("masses must total 1")
    denom = lcm(*(m.denominator for m in masses))
    counts = tuple(int(m * denom) for m in masses)
    return Refinement(algebra, counts, denom)
