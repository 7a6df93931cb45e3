"""Finite powerset Boolean algebras with elements stored as bit masks.

An :class:`Algebra` is the powerset of a finite labelled atom set.  Elements
are immutable wrappers around an integer mask, so the lattice operations are
single machine-word operations.  Algebras are capped at 16 atoms: everything
downstream walks all ``2**n`` elements (often all ``4**n`` pairs), so larger
ground sets would be a mistake rather than a use case.
"""

from __future__ import annotations

from typing import Iterable, Iterator

MAX_ATOMS = 16


class AlgebraError(ValueError):
    pass


class DuplicateLabelError(AlgebraError):
    pass


class SizeError(AlgebraError):
    pass


class MixedAlgebraError(AlgebraError):
    """Raised when an operation mixes elements of distinct algebras."""


class OutsideIntervalError(AlgebraError):
    """Raised when a relative complement is requested for x outside [a, b]."""


class Algebra:
    """Powerset of a finite set of named atoms."""

    def __init__(self, atoms: Iterable[str]):
        labels = tuple(atoms)
        if not 1 <= len(labels) <= MAX_ATOMS:
            raise SizeError(f"need between 1 and {MAX_ATOMS} atoms, got {len(labels)}")
        if len(set(labels)) != len(labels):
            raise DuplicateLabelError(f"duplicate atom labels in {labels!r}")
        self.atom_labels = labels
        self.n = len(labels)
        self._index = {lab: i for i, lab in enumerate(labels)}
        self.size = 1 << self.n
        self._full = self.size - 1

    def __repr__(self):
        return f"Algebra({list(self.atom_labels)!r})"

    def __eq__(self, other):
        return isinstance(other, Algebra) and self.atom_labels == other.atom_labels

    def __hash__(self):
        return hash(self.atom_labels)

    # -- construction -----------------------------------------------------

    def element(self, labels: Iterable[str]) -> "Element":
        mask = 0
        for lab in labels:
            try:
                mask |= 1 << self._index[lab]
            except KeyError:
                raise AlgebraError(f"unknown atom {lab!r}") from None
        return Element(self, mask)

    def from_mask(self, mask: int) -> "Element":
        if not 0 <= mask <= self._full:
            raise AlgebraError(f"mask {mask} out of range")
        return Element(self, mask)

    @property
    def bottom(self) -> "Element":
        return Element(self, 0)

    @property
    def top(self) -> "Element":
        return Element(self, self._full)

    def atoms(self) -> list["Element"]:
        return [Element(self, 1 << i) for i in range(self.n)]

    def atom(self, label: str) -> "Element":
        return Element(self, 1 << self._index[label])

    def elements(self) -> Iterator["Element"]:
        for mask in range(self.size):
            yield Element(self, mask)

    def __len__(self):
        return self.size

    def __iter__(self):
        return self.elements()


class Element:
    """A subset of the algebra's atoms, identified by its bit mask."""

    __slots__ = ("algebra", "mask")

    def __init__(self, algebra: Algebra, mask: int):
        self.algebra = algebra
        self.mask = mask

    # -- basic protocol ---------------------------------------------------

    def _check(self, other: "Element") -> None:
        if self.algebra != other.algebra:
            raise MixedAlgebraError("elements belong to different algebras")

    def __eq__(self, other):
        return (
            isinstance(other, Element)
            and self.algebra == other.algebra
            and self.mask == other.mask
        )

    def __hash__(self):
        return hash((self.algebra.atom_labels, self.mask))

    def labels(self) -> tuple[str, ...]:
        return tuple(
            lab for i, lab in enumerate(self.algebra.atom_labels) if self.mask >> i & 1
        )

    def __repr__(self):
        return "{" + ",".join(self.labels()) + "}"

    # -- lattice operations ----------------------------------------------

    def __and__(self, other: "Element") -> "Element":
        self._check(other)
        return Element(self.algebra, self.mask & other.mask)

    def __or__(self, other: "Element") -> "Element":
        self._check(other)
        return Element(self.algebra, self.mask | other.mask)

    def __invert__(self) -> "Element":
        return Element(self.algebra, self.mask ^ self.algebra._full)

    def __sub__(self, other: "Element") -> "Element":
        self._check(other)
        return Element(self.algebra, self.mask & ~other.mask)

    def __le__(self, other: "Element") -> bool:
        self._check(other)
        return self.mask & other.mask == self.mask

    def __lt__(self, other: "Element") -> bool:
        return self <= other and self.mask != other.mask

    def __ge__(self, other: "Element") -> bool:
        return other <= self

    def __gt__(self, other: "Element") -> bool:
        return other < self

    def is_disjoint(self, other: "Element") -> bool:
        self._check(other)
        return self.mask & other.mask == 0

    def cardinality(self) -> int:
        return bin(self.mask).count("1")


def relative_complement(x: Element, a: Element, b: Element) -> Element:
    """The complement of x inside the interval [a, b].

    For x in [a, b] this is ``a | (b & ~x)``: the unique y in [a, b] with
    x & y == a and x | y == b.
    """
    if not (a <= x and x <= b):
        raise OutsideIntervalError(f"{x!r} is not inside [{a!r}, {b!r}]")
    return a | (b & ~x)


class TwoValuedHom:
    """A homomorphism onto {0, 1}; on a finite powerset these are exactly
    the evaluations ``x -> 1 iff atom <= x``."""

    def __init__(self, atom: Element):
        if atom.cardinality() != 1:
            raise AlgebraError("two-valued homomorphisms are indexed by atoms")
        self.atom = atom
        self.kind = "principal"

    def __call__(self, x: Element) -> int:
        self.atom._check(x)
        return 1 if self.atom.mask & x.mask else 0

    def __repr__(self):
        return f"TwoValuedHom(atom={self.atom!r})"


def two_valued_homomorphisms(algebra: Algebra) -> list[TwoValuedHom]:
    """All homomorphisms from the algebra onto the two-element algebra."""
    return [TwoValuedHom(a) for a in algebra.atoms()]
