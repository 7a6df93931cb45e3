"""Qualitative belief orderings and the axioms that force them to be scalings.

A belief system assigns a total preorder ("no more probable than") to the
events of a finite Boolean algebra, together with conditional preorders
indexed by the possible (non-null) conditioning events.  ``check_axioms``
evaluates the comparative-probability axioms: strict monotonicity under
implication, complement reversal, the sure-thing principle (with its strict
clause), totality, and coherence of conditioning.  The counterexample search
enumerates every such system on a small algebra and confirms that the axioms
force the unconditional order to be a basic scaling; disabling an axiom via
``skip_axioms`` turns the search into a mutation test that should find
violations instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .algebra import Algebra, Element
from .scaling import Scaling, VerificationReport, verify_axioms

MONOTONICITY = "monotonicity"
COMPLEMENT_REVERSAL = "complement-reversal"
SURE_THING = "sure-thing"
TOTALITY = "totality"
CONDITIONING = "conditioning"

ALL_AXIOMS = (MONOTONICITY, COMPLEMENT_REVERSAL, SURE_THING, TOTALITY, CONDITIONING)


class BeliefError(ValueError):
    pass


def _dense(ranks: Sequence[int]) -> tuple[int, ...]:
    order = {v: i for i, v in enumerate(sorted(set(ranks)))}
    return tuple(order[v] for v in ranks)


class BeliefSystem:
    """A family of total preorders over an algebra's events.

    ``conditionals`` maps a conditioning mask ``z`` to a rank tuple indexed by
    element mask; lower rank means less probable given ``z``.  The
    unconditional order is the entry for the full mask and must be present.
    Ranks are densified on construction, so only their order matters.
    """

    def __init__(self, algebra: Algebra, conditionals: Mapping[int, Sequence[int]]):
        self.algebra = algebra
        full = algebra.size - 1
        if full not in conditionals:
            raise BeliefError("the unconditional order (conditioning on the top element) is required")
        table = {}
        for z, ranks in conditionals.items():
            if not 0 <= z <= full:
                raise BeliefError(f"conditioning mask {z} outside the algebra")
            if len(ranks) != algebra.size:
                raise BeliefError(f"rank table for condition {z} must cover every element")
            table[z] = _dense(ranks)
        self.conditionals = table
        self.unconditional = table[full]

    @classmethod
    def from_ranking(cls, algebra: Algebra, ranks: Sequence[int]) -> "BeliefSystem":
        """Canonical family: condition by restriction, ranking x through x & z.

        A conditional order is provided for every z ranked strictly above the
        bottom element (plus the top element itself, unconditionally).
        """
        if len(ranks) != algebra.size:
            raise BeliefError("rank table must cover every element")
        full = algebra.size - 1
        base = _dense(ranks)
        conditionals = {full: base}
        for z in range(1, full):
            if base[z] > base[0]:
                conditionals[z] = _dense([base[x & z] for x in range(algebra.size)])
        return cls(algebra, conditionals)

    @classmethod
    def from_measure(cls, algebra: Algebra, masses: Sequence[Fraction]) -> "BeliefSystem":
        """Rank events by a strictly positive measure; condition by ratio."""
        if len(masses) != algebra.n:
            raise BeliefError("one mass per atom required")
        if any(m <= 0 for m in masses):
            raise BeliefError("atom masses must be positive")
        value = [sum((m for i, m in enumerate(masses) if x >> i & 1), Fraction(0)) for x in range(algebra.size)]
        full = algebra.size - 1
        conditionals = {}
        for z in range(1, full + 1):
            ratios = [value[x & z] / value[z] for x in range(algebra.size)]
            conditionals[z] = _dense([sorted(set(ratios)).index(r) for r in ratios])
        return cls(algebra, conditionals)

    def has_condition(self, z: Element) -> bool:
        return z.mask in self.conditionals

    def unconditional_rank(self, x: Element) -> int:
        return self.unconditional[x.mask]

    def rank_given(self, x: Element, z: Element) -> int:
        try:
            row = self.conditionals[z.mask]
        except KeyError:
            raise BeliefError(f"no conditional order for {z}") from None
        return row[x.mask]

    def __repr__(self):
        return f"BeliefSystem(atoms={self.algebra.n}, conditions={len(self.conditionals)})"


@dataclass(frozen=True)
class BeliefViolation:
    axiom: str
    witness: tuple
    detail: str

    def describe(self) -> str:
        return f"{self.axiom}: {self.detail}"


@dataclass
class BeliefReport:
    ok: bool
    violations: list[BeliefViolation] = field(default_factory=list)
    checked: tuple[str, ...] = ()

    def __bool__(self):
        return self.ok

    def by_axiom(self, axiom: str) -> list[BeliefViolation]:
        return [v for v in self.violations if v.axiom == axiom]

    def summary(self) -> str:
        if self.ok:
            return f"belief axioms hold ({', '.join(self.checked)})"
        first = self.violations[0]
        return f"{len(self.violations)} violation(s); first: {first.describe()}"


def check_axioms(bs: BeliefSystem, skip_axioms: Iterable[str] = ()) -> BeliefReport:
    """Evaluate the comparative-probability axioms, reporting every violation.

    ``skip_axioms`` names axioms to leave unchecked (mutation testing).  The
    sure-thing principle is quantified over every conditioning event whose
    complement is also conditionable, and includes the strict clause: a strict
    hypothesis on either side forces a strict conclusion.
    """
    skip = frozenset(skip_axioms)
    unknown = skip - frozenset(ALL_AXIOMS)
    if unknown:
        raise BeliefError(f"unknown axiom name(s): {sorted(unknown)}")
    alg = bs.algebra
    size = alg.size
    full = size - 1
    r1 = bs.unconditional
    violations: list[BeliefViolation] = []

    def name(mask: int) -> str:
        return repr(alg.from_mask(mask))

    if MONOTONICITY not in skip:
        for y in range(size):
            x = (y - 1) & y
            while True:
                if x != y and not r1[x] < r1[y]:
                    violations.append(
                        BeliefViolation(
                            MONOTONICITY,
                            (x, y),
                            f"{name(x)} implies {name(y)} strictly but P({name(x)}) >= P({name(y)})",
                        )
                    )
                if x == 0:
                    break
                x = (x - 1) & y

    if COMPLEMENT_REVERSAL not in skip:
        for x in range(size):
            for y in range(size):
                if r1[x] < r1[y] and not r1[full ^ x] > r1[full ^ y]:
                    violations.append(
                        BeliefViolation(
                            COMPLEMENT_REVERSAL,
                            (x, y),
                            f"P({name(x)}) < P({name(y)}) but the complements do not reverse",
                        )
                    )

    if SURE_THING not in skip:
        for z, row_z in bs.conditionals.items():
            if z == full or z <= full ^ z:
                # each {z, not z} pair once; skip the unconditional entry
                continue
            row_nz = bs.conditionals.get(full ^ z)
            if row_nz is None:
                continue
            for x in range(size):
                for y in range(size):
                    if row_z[x] <= row_z[y] and row_nz[x] <= row_nz[y]:
                        strict = row_z[x] < row_z[y] or row_nz[x] < row_nz[y]
                        if r1[x] > r1[y] or (strict and r1[x] == r1[y]):
                            op = "<" if strict else "<="
                            violations.append(
                                BeliefViolation(
                                    SURE_THING,
                                    (x, y, z),
                                    f"given {name(z)} and its complement, {name(x)} is no more"
                                    f" probable than {name(y)}, yet not P({name(x)}) {op} P({name(y)})",
                                )
                            )

    if TOTALITY not in skip:
        # rank tables are integer-valued, so any two events compare; nothing
        # can fail here, but the axiom is recorded as checked
        pass

    if CONDITIONING not in skip:
        for z, row in bs.conditionals.items():
            for x in range(size):
                for y in range(x + 1, size):
                    if (x & z) == (y & z) and row[x] != row[y]:
                        violations.append(
                            BeliefViolation(
                                CONDITIONING,
                                (x, y, z),
                                f"{name(x)} and {name(y)} agree on {name(z)} but rank differently given it",
                            )
                        )

    checked = tuple(a for a in ALL_AXIOMS if a not in skip)
    return BeliefReport(not violations, violations, checked)


def verify_meet_consistency(bs: BeliefSystem) -> list[tuple[int, int, int]]:
    """Witnesses where ranking x against y given z disagrees with ranking the
    meets x & z against y & z unconditionally.  Empty for the canonical family.
    """
    bad = []
    r1 = bs.unconditional
    for z, row in bs.conditionals.items():
        for x in range(bs.algebra.size):
            for y in range(bs.algebra.size):
                if (row[x] <= row[y]) != (r1[x & z] <= r1[y & z]):
                    bad.append((x, y, z))
    return bad


def induced_scaling(bs: BeliefSystem) -> Scaling:
    """The unconditional order as a candidate scaling: rank fibers, rank order."""
    ranks = bs.unconditional
    k = max(ranks) + 1
    mask_all = (1 << k) - 1
    rows = [mask_all & ~((1 << (i + 1)) - 1) for i in range(k)]
    return Scaling(bs.algebra, ranks, rows)


@dataclass
class DerivationCounterexample:
    """An axiom-passing belief system whose unconditional order fails to be a
    basic scaling, with the failing verification report."""

    system: BeliefSystem
    ranks: tuple[int, ...]
    scaling_report: VerificationReport

    def describe(self) -> str:
        return f"ranks {self.ranks}: {self.scaling_report.summary()}"


def _rank_assignments(size: int, monotone: bool):
    """Every total preorder on the masks 0..size-1, as dense rank tuples.

    Generated by peeling rank levels from the bottom.  With ``monotone`` set,
    each level is drawn from elements whose proper nonempty subsets are all
    already ranked, which yields exactly the strictly-implication-monotone
    preorders (sound to use whenever the monotonicity axiom is in force).
    """
    strict_sub = [0] * size
    for m in range(size):
        t = (m - 1) & m
        while t != m:
            strict_sub[m] |= 1 << t
            if t == 0:
                break
            t = (t - 1) & m
    ranks = [0] * size

    def rec(remaining: int, level: int):
        if remaining == 0:
            yield tuple(ranks)
            return
        cand = remaining
        if monotone:
            cand = 0
            r = remaining
            while r:
                low = r & -r
                m = low.bit_length() - 1
                if not strict_sub[m] & remaining:
                    cand |= low
                r ^= low
        block = cand
        while block:
            b = block
            while b:
                low = b & -b
                ranks[low.bit_length() - 1] = level
                b ^= low
            yield from rec(remaining & ~block, level + 1)
            block = (block - 1) & cand

    yield from rec((1 << size) - 1, 0)


def derivation_counterexample_search(
    n: int, skip_axioms: Iterable[str] = ()
) -> DerivationCounterexample | None:
    """Search every belief system on n atoms for one that passes the axioms
    yet whose unconditional order is not a basic scaling.

    Systems come from the canonical family: an arbitrary total preorder on the
    events, conditioned by restriction.  Returns the first counterexample, or
    None after exhausting the space (the expected outcome when no axiom is
    skipped).  With an axiom skipped the search doubles as a mutation test.
    """
    if not 1 <= n <= 3:
        raise BeliefError("exhaustive search supports 1 to 3 atoms")
    skip = frozenset(skip_axioms)
    algebra = Algebra(tuple("abc"[:n]))
    monotone = MONOTONICITY not in skip
    for ranks in _rank_assignments(algebra.size, monotone):
        bs = BeliefSystem.from_ranking(algebra, ranks)
        if not check_axioms(bs, skip):
            continue
        report = verify_axioms(induced_scaling(bs))
        if not report.ok:
            return DerivationCounterexample(bs, tuple(ranks), report)
    return None
