"""Scalings of finite Boolean algebras and the partial arithmetic of their scales.

A *scaling* maps every element of a powerset algebra onto a partially ordered
image, strictly monotonely, so that taking relative complements inside any
interval [a, b] reverses the induced order (and preserves ties).  The image,
together with the partial operations it inherits, is the *scale*.

The two axioms, for all a <= b and x, y in [a, b]:

  (a) x < y in the algebra implies rho(x) < rho(y);
  (b) rho(x) < rho(y) implies rho(~x_[a,b]) > rho(~y_[a,b]), and
      rho(x) = rho(y) implies rho(~x_[a,b]) = rho(~y_[a,b]).

``verify_axioms`` checks both exhaustively (cost 6**n; practical to n ~ 8).

Scale arithmetic is witness-based and partial:

  add(z, e)      = rho(x | y)  for disjoint x, y with rho(x)=z, rho(y)=e
  dual_add(z, e) = rho(x & y)  for covering x, y (x | y = 1)
  sub(z, e)      = dual_add(z, comp(e))
  relative_complement(e, lo, hi) = rho(a | (b & ~x)) for a chain
                   a <= x <= b realizing (lo, e, hi)

Undefined entries carry one of two tags, mirroring the X / ? distinction in
the printed tables: ``boxtimes`` when the necessary order condition already
fails, ``question`` when the condition holds but no witnesses exist.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

from .algebra import Algebra, Element, OutsideIntervalError

GREEK = "αβγδεζηθικλμνξοπρστυφχψω"


class ScalingError(ValueError):
    pass


class CycleInOrderError(ScalingError):
    pass


class AxiomViolationError(ScalingError):
    def __init__(self, message: str, violations: list["Violation"]):
        super().__init__(message)
        self.violations = violations
        self.witness = violations[0].witness() if violations else None


class AxiomAViolationError(AxiomViolationError):
    pass


class AxiomBViolationError(AxiomViolationError):
    pass


@dataclass(frozen=True)
class Violation:
    kind: str  # 'strict-increase' | 'reversal-strict' | 'reversal-equal'
    x: Element
    y: Element
    a: Element | None = None
    b: Element | None = None

    def witness(self):
        if self.a is None:
            return (self.x, self.y)
        return (self.x, self.y, self.a, self.b)

    def describe(self) -> str:
        if self.kind == "strict-increase":
            return f"x={self.x!r} < y={self.y!r} but rho(x) < rho(y) fails"
        clause = "ties" if self.kind == "reversal-equal" else "order"
        return (
            f"complement reversal breaks {clause} for x={self.x!r}, y={self.y!r} "
            f"inside [{self.a!r}, {self.b!r}]"
        )


@dataclass
class VerificationReport:
    ok: bool
    violations: list[Violation] = field(default_factory=list)
    intervals_checked: int = 0

    def summary(self) -> str:
        if self.ok:
            return f"PASS ({self.intervals_checked} intervals checked)"
        lines = [f"FAIL ({len(self.violations)} violations)"]
        lines += ["  " + v.describe() for v in self.violations[:20]]
        if len(self.violations) > 20:
            lines.append(f"  ... and {len(self.violations) - 20} more")
        return "\n".join(lines)


class Scaling:
    """A verified-or-verifiable scaling: a fiber partition of the algebra plus
    a strict partial order on the fibers.

    ``class_of[mask]`` is the class index of the element with that mask;
    ``lt`` holds one bit row per class (bit j of lt[i] set iff class i < j).
    """

    def __init__(
        self,
        algebra: Algebra,
        class_of: Sequence[int],
        lt: Sequence[int],
        class_names: tuple[str, ...] | None = None,
    ):
        if len(class_of) != algebra.size:
            raise ScalingError("class assignment must cover every element")
        self.algebra = algebra
        self.class_of = tuple(class_of)
        self.k = max(class_of) + 1
        if set(class_of) != set(range(self.k)):
            raise ScalingError("class indices must be dense 0..k-1")
        self.lt = tuple(lt)
        if len(self.lt) != self.k:
            raise ScalingError("order row count must equal class count")
        self.class_names = class_names
        self._fibers: list[list[int]] | None = None
        self._scale: "Scale" | None = None

    # -- basic queries ----------------------------------------------------

    def rho(self, x: Element) -> int:
        return self.class_of[x.mask]

    def fibers(self) -> list[list[int]]:
        if self._fibers is None:
            fibers: list[list[int]] = [[] for _ in range(self.k)]
            for mask, c in enumerate(self.class_of):
                fibers[c].append(mask)
            self._fibers = fibers
        return self._fibers

    def fiber_elements(self, c: int) -> list[Element]:
        return [self.algebra.from_mask(m) for m in self.fibers()[c]]

    def lt_class(self, i: int, j: int) -> bool:
        return bool(self.lt[i] >> j & 1)

    def leq_class(self, i: int, j: int) -> bool:
        return i == j or self.lt_class(i, j)

    def comparable(self, i: int, j: int) -> bool:
        return i == j or self.lt_class(i, j) or self.lt_class(j, i)

    @property
    def zero_class(self) -> int:
        return self.class_of[0]

    @property
    def one_class(self) -> int:
        return self.class_of[-1]

    def is_one_to_one(self) -> bool:
        return self.k == self.algebra.size

    def is_linear(self) -> bool:
        return all(
            self.comparable(i, j) for i in range(self.k) for j in range(i + 1, self.k)
        )

    def scale(self) -> "Scale":
        if self._scale is None:
            self._scale = Scale(self)
        return self._scale

    def __repr__(self):
        return f"<Scaling on {self.algebra!r} with {self.k} classes>"


def transitive_closure(rows: list[int], k: int) -> list[int]:
    rows = list(rows)
    for j in range(k):
        bit = 1 << j
        row_j = rows[j]
        for i in range(k):
            if rows[i] & bit:
                rows[i] |= row_j
    return rows


def verify_axioms(scaling: Scaling) -> VerificationReport:
    """Exhaustively check both scaling axioms over every interval [a, b]."""
    alg = scaling.algebra
    cls = scaling.class_of
    lt = scaling.lt
    full = alg.size - 1
    violations: list[Violation] = []

    def el(mask: int) -> Element:
        return alg.from_mask(mask)

    # axiom (a): strictly increasing on the Boolean order
    for y in range(alg.size):
        cy = cls[y]
        t = (y - 1) & y
        while True:
            if t != y and not (lt[cls[t]] >> cy & 1):
                violations.append(Violation("strict-increase", el(t), el(y)))
            if t == 0:
                break
            t = (t - 1) & y
        # submask loop above covers t = y (skipped) and t = 0

    # axiom (b): complement reversal within every interval
    intervals = 0
    for a in range(alg.size):
        rest = full ^ a
        s = rest
        while True:
            intervals += 1
            # interval [a, a|s]; members are a|t for t a submask of s
            ts: list[int] = []
            t = s
            while True:
                ts.append(t)
                if t == 0:
                    break
                t = (t - 1) & s
            icls = [cls[a | t] for t in ts]
            ccls = [cls[a | (s ^ t)] for t in ts]
            m = len(ts)
            for i in range(m):
                ci = icls[i]
                for j in range(m):
                    cj = icls[j]
                    if lt[ci] >> cj & 1:
                        if not (lt[ccls[j]] >> ccls[i] & 1):
                            violations.append(
                                Violation(
                                    "reversal-strict",
                                    el(a | ts[i]),
                                    el(a | ts[j]),
                                    el(a),
                                    el(a | s),
                                )
                            )
                    elif ci == cj and i < j:
                        if ccls[i] != ccls[j]:
                            violations.append(
                                Violation(
                                    "reversal-equal",
                                    el(a | ts[i]),
                                    el(a | ts[j]),
                                    el(a),
                                    el(a | s),
                                )
                            )
            if s == 0:
                break
            s = (s - 1) & rest

    return VerificationReport(not violations, violations, intervals)


def build_scaling(
    algebra: Algebra,
    classes: Mapping[Element, Hashable],
    order: Iterable[tuple[Hashable, Hashable]],
    verify: bool = True,
) -> Scaling:
    """Assemble and verify a scaling from a class assignment and generating
    order pairs (transitive closure is taken; reflexive pairs are cycles).

    Raises AxiomAViolationError / AxiomBViolationError with concrete witnesses
    when verification fails, CycleInOrderError when the closure is not strict.
    """
    keys: list[Hashable] = []
    key_index: dict[Hashable, int] = {}
    class_of = [0] * algebra.size
    seen = 0
    for mask in range(algebra.size):
        x = algebra.from_mask(mask)
        if x not in classes:
            raise ScalingError(f"no class assigned to {x!r}")
        key = classes[x]
        if key not in key_index:
            key_index[key] = len(keys)
            keys.append(key)
        class_of[mask] = key_index[key]
        seen += 1
    k = len(keys)

    rows = [0] * k
    for lo, hi in order:
        if lo not in key_index or hi not in key_index:
            raise ScalingError(f"order pair ({lo!r}, {hi!r}) names unknown class")
        rows[key_index[lo]] |= 1 << key_index[hi]
    rows = transitive_closure(rows, k)
    for i in range(k):
        if rows[i] >> i & 1:
            raise CycleInOrderError(f"class {keys[i]!r} is below itself after closure")

    names = tuple(str(key) for key in keys) if all(
        isinstance(key, str) for key in keys
    ) else None
    scaling = Scaling(algebra, class_of, rows, names)
    if verify:
        report = verify_axioms(scaling)
        if not report.ok:
            strict = [v for v in report.violations if v.kind == "strict-increase"]
            if strict:
                raise AxiomAViolationError(
                    f"not strictly increasing: {strict[0].describe()}", strict
                )
            raise AxiomBViolationError(
                f"complement reversal fails: {report.violations[0].describe()}",
                report.violations,
            )
    return scaling


def scaling_from_measures(
    algebra: Algebra, measures: Sequence[Mapping[str, Fraction | int]]
) -> Scaling:
    """The scaling induced by a finite family of strictly positive measures:
    x is below y when every measure weakly agrees and at least one is strict;
    x and y share a class when every measure ties them.

    The induced relation is automatically transitive (it is the comparison
    under the convex hull of the family), but the result is re-verified.
    """
    if not measures:
        raise ScalingError("need at least one measure")
    weights: list[list[Fraction]] = []
    for m in measures:
        row = []
        for lab in algebra.atom_labels:
            if lab not in m:
                raise ScalingError(f"measure missing atom {lab!r}")
            v = Fraction(m[lab])
            if v <= 0:
                raise ScalingError(f"atom {lab!r} has nonpositive mass {v}")
            row.append(v)
        weights.append(row)

    values: list[tuple[Fraction, ...]] = []
    for mask in range(algebra.size):
        values.append(
            tuple(
                sum((row[i] for i in range(algebra.n) if mask >> i & 1), Fraction(0))
                for row in weights
            )
        )

    distinct: list[tuple[Fraction, ...]] = []
    index: dict[tuple[Fraction, ...], int] = {}
    class_of = []
    for v in values:
        if v not in index:
            index[v] = len(distinct)
            distinct.append(v)
        class_of.append(index[v])
    k = len(distinct)
    rows = [0] * k
    for i in range(k):
        for j in range(k):
            if i != j:
                vi, vj = distinct[i], distinct[j]
                if all(a <= b for a, b in zip(vi, vj)) and vi != vj:
                    rows[i] |= 1 << j
    scaling = Scaling(algebra, class_of, rows)
    report = verify_axioms(scaling)
    if not report.ok:  # cannot happen for positive measures
        raise AxiomBViolationError("measure comparison broke the axioms", report.violations)
    return scaling


# -- the scale: image plus partial arithmetic -----------------------------


class Undefined:
    """Marker for an undefined partial-operation result.

    ``boxtimes`` means the necessary order condition fails (the X cells of a
    printed table); ``question`` means the condition holds but the domain
    offers no witnesses (the ? cells).
    """

    __slots__ = ("reason",)

    def __init__(self, reason: str):
        self.reason = reason

    def __eq__(self, other):
        return isinstance(other, Undefined) and other.reason == self.reason

    def __hash__(self):
        return hash(("Undefined", self.reason))

    def __repr__(self):
        return f"Undefined({self.reason})"


BOXTIMES = Undefined("boxtimes")
QUESTION = Undefined("question")

# Above this many witness pairs per scale we stop exhaustively revalidating
# sum consistency and accept the first witness per cell.
_VALIDATE_PAIR_BUDGET = 1 << 18


class ScaleConsistencyError(ScalingError):
    """Witnesses for one cell disagreed; the input was not a valid scaling."""


class Scale:
    """The image of a scaling: classes, order, complement, and the partial
    operations +, dual +, and -, all precomputed as k x k tables."""

    def __init__(self, scaling: Scaling):
        self.scaling = scaling
        self.k = scaling.k
        self.lt = scaling.lt
        self.zero = scaling.zero_class
        self.one = scaling.one_class
        fibers = scaling.fibers()
        cls = scaling.class_of
        full = scaling.algebra.size - 1

        comp = [-1] * self.k
        for mask, c in enumerate(cls):
            cc = cls[full ^ mask]
            if comp[c] == -1:
                comp[c] = cc
            elif comp[c] != cc:
                raise ScaleConsistencyError(
                    "complement is not constant on a class; not a scaling"
                )
        self.comp = tuple(comp)

        pair_work = sum(len(f) for f in fibers) ** 2
        validate = pair_work <= _VALIDATE_PAIR_BUDGET

        add: list[list[int | Undefined]] = [[QUESTION] * self.k for _ in range(self.k)]
        dual: list[list[int | Undefined]] = [[QUESTION] * self.k for _ in range(self.k)]
        for i in range(self.k):
            fi = fibers[i]
            for j in range(self.k):
                fj = fibers[j]
                a_val: int | None = None
                d_val: int | None = None
                for x in fi:
                    for y in fj:
                        if x & y == 0:
                            v = cls[x | y]
                            if a_val is None:
                                a_val = v
                                if not validate and d_val is not None:
                                    break
                            elif validate and a_val != v:
                                raise ScaleConsistencyError(
                                    f"sum of classes {i},{j} has conflicting witnesses"
                                )
                        if x | y == full:
                            v = cls[x & y]
                            if d_val is None:
                                d_val = v
                                if not validate and a_val is not None:
                                    break
                            elif validate and d_val != v:
                                raise ScaleConsistencyError(
                                    f"dual sum of classes {i},{j} has conflicting witnesses"
                                )
                    else:
                        continue
                    break
                if a_val is not None:
                    add[i][j] = a_val
                elif not self.leq(i, self.comp[j]):
                    add[i][j] = BOXTIMES
                if d_val is not None:
                    dual[i][j] = d_val
                elif not self.leq(self.comp[j], i):
                    dual[i][j] = BOXTIMES
        self._add = add
        self._dual = dual
        self.names = scaling.class_names or self._auto_names()
        self.display = self._display_order()

    # -- order helpers ----------------------------------------------------

    def lt_class(self, i: int, j: int) -> bool:
        return bool(self.lt[i] >> j & 1)

    def leq(self, i: int, j: int) -> bool:
        return i == j or self.lt_class(i, j)

    def _display_order(self) -> tuple[int, ...]:
        # topological linearization, ties broken by smallest fiber member
        fibers = self.scaling.fibers()
        firsts = [min(f) for f in fibers]
        remaining = set(range(self.k))
        out: list[int] = []
        while remaining:
            ready = [
                i
                for i in remaining
                if not any(self.lt_class(j, i) for j in remaining if j != i)
            ]
            ready.sort(key=lambda i: firsts[i])
            out.append(ready[0])
            remaining.remove(ready[0])
        return tuple(out)

    def _auto_names(self) -> tuple[str, ...]:
        order = self._display_order()
        names = [""] * self.k
        greek = iter(GREEK)
        for c in order:
            if c == self.zero:
                names[c] = "0"
            elif c == self.one:
                names[c] = "1"
            else:
                try:
                    names[c] = next(greek)
                except StopIteration:  # k > 26; fall back to indexed names
                    names[c] = f"c{c}"
        return tuple(names)

    # -- partial operations -----------------------------------------------

    def add(self, i: int, j: int) -> int | Undefined:
        return self._add[i][j]

    def dual_add(self, i: int, j: int) -> int | Undefined:
        return self._dual[i][j]

    def sub(self, i: int, j: int) -> int | Undefined:
        return self._dual[i][self.comp[j]]

    def complement(self, i: int) -> int:
        return self.comp[i]

    def relative_complement(self, eta: int, lo: int, hi: int) -> int | Undefined:
        """The additive complement of eta relative to [lo, hi], defined
        through witnesses: a chain a <= x <= b realizing (lo, eta, hi)."""
        if not (self.leq(lo, eta) and self.leq(eta, hi)):
            raise OutsideIntervalError(
                f"class {eta} is not inside [{lo}, {hi}] in the scale order"
            )
        fibers = self.scaling.fibers()
        cls = self.scaling.class_of
        value: int | None = None
        for a in fibers[lo]:
            for b in fibers[hi]:
                if a & b != a:
                    continue
                inside = b & ~a
                for x in fibers[eta]:
                    if a & x == a and x & b == x:
                        v = cls[a | (inside & ~x)]
                        if value is None:
                            value = v
                        elif value != v:
                            raise ScaleConsistencyError(
                                "relative complement witnesses disagree"
                            )
        if value is None:
            return QUESTION
        return value

    def is_divided_scale(self) -> bool:
        """No subtraction pathology: z - e exists whenever e <= z."""
        return all(
            not isinstance(self.sub(z, e), Undefined)
            for z in range(self.k)
            for e in range(self.k)
            if self.leq(e, z)
        )

    def is_linear(self) -> bool:
        return self.scaling.is_linear()

    def name_of(self, i: int) -> str:
        return self.names[i]

    def class_named(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise ScalingError(f"no class named {name!r}") from None

    # -- rendering --------------------------------------------------------

    def render_table(self, which: str = "add", unicode_symbols: bool = False) -> str:
        """Fixed-width text rendering of the + or dual-+ table, margins in
        display (topological) order."""
        if which == "add":
            table, sym = self._add, "+"
        elif which in ("dual", "dualadd", "dual_add"):
            table, sym = self._dual, ("⊕" if unicode_symbols else "(+)")
        else:
            raise ScalingError(f"unknown table {which!r}")
        undef_box = "⊠" if unicode_symbols else "X"

        def cell(entry: int | Undefined) -> str:
            if isinstance(entry, Undefined):
                return undef_box if entry.reason == "boxtimes" else "?"
            return self.names[entry]

        order = self.display
        width = max(
            [len(sym)]
            + [len(self.names[c]) for c in order]
            + [len(undef_box), 1]
        )

        def pad(s: str) -> str:
            return s.ljust(width)

        header = pad(sym) + " | " + " ".join(pad(self.names[c]) for c in order)
        sep = "-" * (width + 1) + "+" + "-" * (len(header) - width - 2)
        lines = [header, sep]
        for r in order:
            row = [pad(self.names[r]) + " |"]
            row += [pad(cell(table[r][c])) for c in order]
            lines.append(" ".join(row))
        return "\n".join(lines)


@dataclass
class MapViolation:
    kind: str  # 'strict-increase' | 'reversal-strict' | 'reversal-equal'
    detail: tuple

    def describe(self) -> str:
        return f"{self.kind}: {self.detail}"


@dataclass
class MapReport:
    ok: bool
    violations: list[MapViolation]

    def summary(self) -> str:
        if self.ok:
            return "PASS: scale map"
        return "FAIL: " + "; ".join(v.describe() for v in self.violations[:10])


def verify_scale_map(f: Mapping[int, int], source: Scale, target: Scale) -> MapReport:
    """Check that f is a scaling of scales: strictly increasing, and
    preserving the reversal behaviour of relative complements (computed in
    the source, compared through f in the target)."""
    violations: list[MapViolation] = []
    k = source.k
    for i in range(k):
        if i not in f:
            return MapReport(False, [MapViolation("missing", (i,))])
    for i in range(k):
        for j in range(k):
            if source.lt_class(i, j) and not target.lt_class(f[i], f[j]):
                violations.append(MapViolation("strict-increase", (i, j)))

    for lo in range(k):
        for hi in range(k):
            if not source.leq(lo, hi):
                continue
            inside = [c for c in range(k) if source.leq(lo, c) and source.leq(c, hi)]
            comps = {c: source.relative_complement(c, lo, hi) for c in inside}
            for x in inside:
                cx = comps[x]
                if isinstance(cx, Undefined):
                    continue
                for y in inside:
                    cy = comps[y]
                    if isinstance(cy, Undefined):
                        continue
                    if f[x] == f[y]:
                        if f[cx] != f[cy]:
                            violations.append(
                                MapViolation("reversal-equal", (x, y, lo, hi))
                            )
                    elif target.lt_class(f[x], f[y]):
                        if not target.lt_class(f[cy], f[cx]):
                            violations.append(
                                MapViolation("reversal-strict", (x, y, lo, hi))
                            )
    return MapReport(not violations, violations)
