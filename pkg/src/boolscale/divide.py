"""Dividedness, agreeing measures, and the splitting construction.

A scaling is *divided* when every strict comparison rho(x) < rho(y) is
realized inside y: some y1 < y has rho(y1) = rho(x).  Finite scalings are
divided exactly when they are *measurable* (some strictly positive finitely
additive measure induces the order and the ties), and a non-divided but
measurable scaling can be repaired by splitting atoms: enumerate the
vertices of the closed agreeing-measure polytope, split each atom t into
one fragment per vertex class with multiplicity d_c * M[c][t], and map
elements to tuples counting fragments per class.  ``construct_division``
implements that; ``kps_example`` builds the classical five-atom scaling
that has no agreeing measure at all.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Callable, Sequence

from .algebra import Algebra, Element, SizeError
from .lp import LPResult, solve_lp
from .scaling import Scaling, ScalingError, transitive_closure, verify_axioms

ZERO = Fraction(0)
ONE = Fraction(1)


class NotDividedError(ScalingError):
    pass


class OrderMismatchError(ScalingError):
    pass


class EmptyPolytopeError(ScalingError):
    pass


class ClosureCollapseError(ScalingError):
    pass


class EmbeddingNotFaithfulError(ScalingError):
    pass


# -- dividedness ----------------------------------------------------------


@dataclass
class DividedCheck:
    ok: bool
    counterexample: tuple[Element, Element] | None = None

    def __bool__(self):
        return self.ok


def is_divided(s: Scaling) -> DividedCheck:
    """Check dividedness; on failure return the first witness pair (x, y)
    in mask order (x is the smallest member of the unrealized class)."""
    alg = s.algebra
    cls = s.class_of
    fibers = s.fibers()
    below: list[int] = [0] * s.k  # bit c set iff class c is strictly below i
    for j in range(s.k):
        row = s.lt[j]
        c = 0
        while row:
            if row & 1:
                below[c] |= 1 << j
            c += 1
            row >>= 1
    for y in range(alg.size):
        seen = 0
        t = (y - 1) & y
        while True:
            seen |= 1 << cls[t]
            if t == 0:
                break
            t = (t - 1) & y
        missing = below[cls[y]] & ~seen
        if missing:
            c = (missing & -missing).bit_length() - 1
            return DividedCheck(
                False, (alg.from_mask(fibers[c][0]), alg.from_mask(y))
            )
    return DividedCheck(True)


# -- tuple representation of divided scalings -----------------------------


@dataclass
class TupleRep:
    groups: tuple[tuple[str, ...], ...]
    rep_of_class: tuple[tuple[int, ...], ...]

    def rep(self, s: Scaling, x: Element) -> tuple[int, ...]:
        return self.rep_of_class[s.rho(x)]


def kleene_tuple_representation(s: Scaling) -> TupleRep:
    """Represent a divided scaling by atom-group counting: atoms sharing a
    singleton class form a group; rho-comparison coincides with
    componentwise comparison of per-group counts."""
    check = is_divided(s)
    if not check:
        raise NotDividedError(f"not divided; witness {check.counterexample}")
    alg = s.algebra
    cls = s.class_of
    group_of_atom: list[int] = []
    group_class: list[int] = []
    for i in range(alg.n):
        c = cls[1 << i]
        if c not in group_class:
            group_class.append(c)
        group_of_atom.append(group_class.index(c))
    q = len(group_class)

    reps: list[tuple[int, ...] | None] = [None] * s.k
    for mask in range(alg.size):
        counts = [0] * q
        m = mask
        while m:
            bit = m & -m
            counts[group_of_atom[bit.bit_length() - 1]] += 1
            m ^= bit
        t = tuple(counts)
        c = cls[mask]
        if reps[c] is None:
            reps[c] = t
        elif reps[c] != t:
            raise OrderMismatchError(
                f"class {c} contains elements with different group counts"
            )
    rep_of_class = tuple(reps)  # type: ignore[arg-type]

    for i in range(s.k):
        for j in range(s.k):
            if i == j:
                continue
            ri, rj = rep_of_class[i], rep_of_class[j]
            purely_leq = all(a <= b for a, b in zip(ri, rj)) and ri != rj
            if purely_leq != s.lt_class(i, j):
                raise OrderMismatchError(
                    f"classes {i},{j}: tuple comparison {ri} vs {rj} "
                    f"disagrees with the scale order"
                )

    groups = tuple(
        tuple(
            alg.atom_labels[i]
            for i in range(alg.n)
            if group_of_atom[i] == g
        )
        for g in range(q)
    )
    return TupleRep(groups, rep_of_class)


# -- constraint systems ---------------------------------------------------


@dataclass(frozen=True)
class InequalityRow:
    lhs_mask: int
    rhs_mask: int
    lo_class: int
    hi_class: int
    label: str


@dataclass(frozen=True)
class EqualityRow:
    a_mask: int
    b_mask: int
    cls: int
    label: str


@dataclass
class ConstraintSystem:
    """Linear description of the strictly agreeing measures of a scaling:
    one strict inequality per related class pair (via the smallest fiber
    members), one equality per same-class element pair, positivity per atom,
    and normalization to total mass 1."""

    algebra: Algebra
    inequalities: list[InequalityRow]
    equalities: list[EqualityRow]

    def ineq_vector(self, row: InequalityRow) -> list[Fraction]:
        """Coefficients of (rhs - lhs) . m, which must be > 0."""
        v = [ZERO] * self.algebra.n
        for i in range(self.algebra.n):
            bit = 1 << i
            if row.rhs_mask & bit:
                v[i] += 1
            if row.lhs_mask & bit:
                v[i] -= 1
        return v

    def eq_vector(self, row: EqualityRow) -> list[Fraction]:
        v = [ZERO] * self.algebra.n
        for i in range(self.algebra.n):
            bit = 1 << i
            if row.a_mask & bit:
                v[i] += 1
            if row.b_mask & bit:
                v[i] -= 1
        return v


def _set_label(alg: Algebra, mask: int) -> str:
    return "{" + ",".join(alg.from_mask(mask).labels()) + "}"


def build_constraints(s: Scaling) -> ConstraintSystem:
    alg = s.algebra
    fibers = s.fibers()
    reps = [min(f) for f in fibers]
    ineqs: list[InequalityRow] = []
    for i in range(s.k):
        row = s.lt[i]
        j = 0
        while row:
            if row & 1:
                ineqs.append(
                    InequalityRow(
                        reps[i],
                        reps[j],
                        i,
                        j,
                        f"{_set_label(alg, reps[i])}<{_set_label(alg, reps[j])}",
                    )
                )
            j += 1
            row >>= 1
    eqs: list[EqualityRow] = []
    for c, f in enumerate(fibers):
        for a_idx in range(len(f)):
            for b_idx in range(a_idx + 1, len(f)):
                eqs.append(
                    EqualityRow(
                        f[a_idx],
                        f[b_idx],
                        c,
                        f"{_set_label(alg, f[a_idx])}={_set_label(alg, f[b_idx])}",
                    )
                )
    return ConstraintSystem(alg, ineqs, eqs)


# -- agreeing measures ----------------------------------------------------


class Measure:
    """A strictly positive rational measure given by atom masses."""

    def __init__(self, algebra: Algebra, masses: Sequence[Fraction]):
        if len(masses) != algebra.n:
            raise ScalingError("one mass per atom required")
        self.algebra = algebra
        self.masses = tuple(Fraction(m) for m in masses)
        if any(m <= 0 for m in self.masses):
            raise ScalingError("masses must be strictly positive")

    def __call__(self, x: Element) -> Fraction:
        return sum(
            (self.masses[i] for i in range(self.algebra.n) if x.mask >> i & 1),
            ZERO,
        )

    def as_dict(self) -> dict[str, Fraction]:
        return dict(zip(self.algebra.atom_labels, self.masses))

    def total(self) -> Fraction:
        return sum(self.masses, ZERO)

    def __repr__(self):
        inner = ", ".join(
            f"{lab}={m}" for lab, m in zip(self.algebra.atom_labels, self.masses)
        )
        return f"Measure({inner})"

    def agrees_with(self, s: Scaling) -> bool:
        """Strictly increasing across related classes, constant on fibers."""
        values = [self(self.algebra.from_mask(m)) for m in range(self.algebra.size)]
        byclass: list[Fraction | None] = [None] * s.k
        for mask, v in enumerate(values):
            c = s.class_of[mask]
            if byclass[c] is None:
                byclass[c] = v
            elif byclass[c] != v:
                return False
        for i in range(s.k):
            for j in range(s.k):
                if s.lt_class(i, j) and not byclass[i] < byclass[j]:
                    return False
        return True


@dataclass
class InfeasibilityCertificate:
    """Nonnegative multipliers on the strict rows (plus signed multipliers
    on equality rows) whose combination cancels every atom coefficient while
    keeping nonnegative constant mass: summing the strict inequalities with
    these weights yields the contradiction 0 < 0."""

    strict: list[tuple[str, Fraction]]
    equalities: list[tuple[str, Fraction]]

    def multiplier(self, label: str) -> Fraction:
        for lab, v in self.strict + self.equalities:
            if lab == label:
                return v
        return ZERO

    def describe(self) -> str:
        parts = [f"{v} * [{lab}]" for lab, v in self.strict if v != 0]
        parts += [f"{v} * [{lab}]" for lab, v in self.equalities if v != 0]
        return " + ".join(parts) + "  =>  0 < 0"


def _certificate_rows(
    cs: ConstraintSystem,
) -> tuple[list[tuple[str, list[Fraction]]], list[tuple[str, list[Fraction], Fraction]]]:
    n = cs.algebra.n
    strict = [(row.label, cs.ineq_vector(row)) for row in cs.inequalities]
    for i in range(n):
        v = [ZERO] * n
        v[i] = ONE
        strict.append((f"0<{{{cs.algebra.atom_labels[i]}}}", v))
    eqs = [(row.label, cs.eq_vector(row), ZERO) for row in cs.equalities]
    eqs.append(("total=1", [ONE] * n, ONE))
    return strict, eqs


def _find_certificate(cs: ConstraintSystem) -> InfeasibilityCertificate:
    """Find y >= 0 (strict rows), z (equality rows) with
    sum y_i v_i + sum z_j e_j = 0 and sum z_j c_j >= 0, sum y_i = 1,
    minimizing the equality mass to prefer clean inequality-only combinations."""
    strict, eqs = _certificate_rows(cs)
    n = cs.algebra.n
    ns, ne = len(strict), len(eqs)
    # variables: y (ns) | zp (ne) | zn (ne)
    nv = ns + 2 * ne
    a_eq: list[list[Fraction]] = []
    b_eq: list[Fraction] = []
    for coord in range(n):
        row = [ZERO] * nv
        for i, (_, v) in enumerate(strict):
            row[i] = v[coord]
        for j, (_, e, _) in enumerate(eqs):
            row[ns + j] = e[coord]
            row[ns + ne + j] = -e[coord]
        a_eq.append(row)
        b_eq.append(ZERO)
    row = [ZERO] * nv
    for i in range(ns):
        row[i] = ONE
    a_eq.append(row)
    b_eq.append(ONE)
    # -(sum z_j c_j) <= 0
    row = [ZERO] * nv
    for j, (_, _, cj) in enumerate(eqs):
        row[ns + j] = -cj
        row[ns + ne + j] = cj
    a_ub = [row]
    b_ub = [ZERO]
    cost = [ZERO] * nv
    for j in range(ns, nv):
        cost[j] = ONE
    res = solve_lp(cost, a_ub, b_ub, a_eq, b_eq)
    if res.status != "optimal":
        raise ScalingError("infeasible system without certificate; solver bug")
    y = res.x[:ns]
    z = [res.x[ns + j] - res.x[ns + ne + j] for j in range(ne)]
    positives = [v for v in y if v > 0] + [abs(v) for v in z if v != 0]
    scale = min(positives)
    cert = InfeasibilityCertificate(
        [(lab, v / scale) for (lab, _), v in zip(strict, y)],
        [(lab, z[j] / scale) for j, (lab, _, _) in enumerate(eqs)],
    )
    _validate_certificate(cs, cert)
    return cert


def _validate_certificate(cs: ConstraintSystem, cert: InfeasibilityCertificate) -> None:
    strict, eqs = _certificate_rows(cs)
    n = cs.algebra.n
    combo = [ZERO] * n
    mass = ZERO
    used = False
    for (lab, v), (_, w) in zip(strict, cert.strict):
        if w < 0:
            raise ScalingError("certificate has negative strict multiplier")
        if w > 0:
            used = True
        for i in range(n):
            combo[i] += w * v[i]
    for (lab, e, cj), (_, w) in zip(eqs, cert.equalities):
        for i in range(n):
            combo[i] += w * e[i]
        mass += w * cj
    if any(v != 0 for v in combo) or mass < 0 or not used:
        raise ScalingError("certificate does not combine to a contradiction")


def _cover_inequalities(cs: ConstraintSystem) -> list[InequalityRow]:
    """Rows not implied by composing two other rows.  A composed row's
    vector is the sum of its pieces (shared representatives cancel), so
    strict feasibility and infeasibility are unchanged by the reduction."""
    pair_set = {(r.lo_class, r.hi_class) for r in cs.inequalities}
    return [
        r
        for r in cs.inequalities
        if not any(
            (r.lo_class, mid) in pair_set and (mid, r.hi_class) in pair_set
            for mid in {p[1] for p in pair_set if p[0] == r.lo_class}
        )
    ]


def find_agreeing_measure(s: Scaling) -> Measure | InfeasibilityCertificate:
    """Maximize the least slack epsilon subject to the agreeing-measure
    constraints (strict rows opened by epsilon, masses >= epsilon, total 1).
    A positive optimum yields a measure; otherwise the dual combination is
    returned as an infeasibility certificate."""
    cs = build_constraints(s)
    n = s.algebra.n
    # variables: m (n) | epos | eneg
    nv = n + 2
    a_ub: list[list[Fraction]] = []
    b_ub: list[Fraction] = []
    for row in _cover_inequalities(cs):
        v = cs.ineq_vector(row)
        a_ub.append([-x for x in v] + [ONE, -ONE])
        b_ub.append(ZERO)
    for i in range(n):
        line = [ZERO] * nv
        line[i] = -ONE
        line[n] = ONE
        line[n + 1] = -ONE
        a_ub.append(line)
        b_ub.append(ZERO)
    line = [ZERO] * nv
    line[n] = ONE
    line[n + 1] = -ONE
    a_ub.append(line)
    b_ub.append(ONE)
    a_eq: list[list[Fraction]] = []
    b_eq: list[Fraction] = []
    for row in cs.equalities:
        a_eq.append(cs.eq_vector(row) + [ZERO, ZERO])
        b_eq.append(ZERO)
    a_eq.append([ONE] * n + [ZERO, ZERO])
    b_eq.append(ONE)
    cost = [ZERO] * nv
    cost[n] = ONE
    cost[n + 1] = -ONE
    res: LPResult = solve_lp(cost, a_ub, b_ub, a_eq, b_eq, maximize=True)
    if res.status == "optimal" and res.objective > 0:
        measure = Measure(s.algebra, res.x[:n])
        if not measure.agrees_with(s):  # pragma: no cover - solver guarantee
            raise ScalingError("solver returned a non-agreeing measure")
        return measure
    return _find_certificate(cs)


# -- vertex enumeration ---------------------------------------------------


@dataclass
class PolytopeVertices:
    """Exact vertex matrix of the closed agreeing-measure relaxation, rows
    sorted lexicographically descending, with least common denominators."""

    matrix: tuple[tuple[Fraction, ...], ...]
    denominators: tuple[int, ...]


def _row_reduce(aug: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], int]:
    """Reduced row echelon form, pivoting only in the first ncols columns.
    Rows below the returned rank have zero coefficients there."""
    work = [list(r) for r in aug]
    rank = 0
    for col in range(ncols):
        idx = next((i for i in range(rank, len(work)) if work[i][col] != 0), None)
        if idx is None:
            continue
        work[rank], work[idx] = work[idx], work[rank]
        piv = [v / work[rank][col] for v in work[rank]]
        work[rank] = piv
        for i in range(len(work)):
            if i != rank and work[i][col] != 0:
                work[i] = [v - work[i][col] * p for v, p in zip(work[i], piv)]
        rank += 1
    return work, rank


def _solve_square(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """Unique solution of the stacked system, or None when singular,
    underdetermined, or inconsistent."""
    n = len(rows[0])
    red, rank = _row_reduce([r + [b] for r, b in zip(rows, rhs)], n)
    if rank < n or any(r[-1] != 0 for r in red[rank:]):
        return None
    return [red[i][-1] for i in range(n)]


def enumerate_polytope_vertices(cs: ConstraintSystem) -> PolytopeVertices:
    """Brute-force vertex enumeration of the closed relaxation: every
    equality is tight; choose the remaining tight rows among the closed
    inequalities, solve, and keep feasible unique solutions.

    Rows implied by transitivity through a shared representative are pruned
    first, which keeps the combination count small.
    """
    n = cs.algebra.n
    cover_rows = _cover_inequalities(cs)
    candidates: list[list[Fraction]] = []
    seen_vecs: set[tuple[Fraction, ...]] = set()
    for r in cover_rows:
        v = cs.ineq_vector(r)
        key = tuple(v)
        if key not in seen_vecs:
            seen_vecs.add(key)
            candidates.append(v)
    for i in range(n):
        v = [ZERO] * n
        v[i] = ONE
        key = tuple(v)
        if key not in seen_vecs:
            seen_vecs.add(key)
            candidates.append(v)

    eq_rows = [cs.eq_vector(r) for r in cs.equalities] + [[ONE] * n]
    eq_rhs = [ZERO] * len(cs.equalities) + [ONE]

    # rank of the equality system determines how many tight rows to add
    red, rank = _row_reduce([r + [b] for r, b in zip(eq_rows, eq_rhs)], n)
    if any(r[-1] != 0 for r in red[rank:]):
        raise EmptyPolytopeError("equality system is inconsistent")
    need = n - rank

    all_ineq_vectors = [cs.ineq_vector(r) for r in cs.inequalities]

    def feasible(x: list[Fraction]) -> bool:
        if any(v < 0 for v in x):
            return False
        for vec in all_ineq_vectors:
            if sum(a * b for a, b in zip(vec, x)) < 0:
                return False
        for row, rhs in zip(eq_rows, eq_rhs):
            if sum(a * b for a, b in zip(row, x)) != rhs:
                return False
        return True

    vertices: set[tuple[Fraction, ...]] = set()
    if need <= 0:
        x = _solve_square(eq_rows, eq_rhs)
        if x is not None and feasible(x):
            vertices.add(tuple(x))
    else:
        from itertools import combinations

        for chosen in combinations(range(len(candidates)), need):
            rows = eq_rows + [candidates[i] for i in chosen]
            rhs = eq_rhs + [ZERO] * need
            x = _solve_square(rows, rhs)
            if x is not None and feasible(x):
                vertices.add(tuple(x))
    if not vertices:
        raise EmptyPolytopeError("closed relaxation has no feasible point")
    matrix = tuple(sorted(vertices, reverse=True))
    dens = tuple(lcm(*(v.denominator for v in row)) if row else 1 for row in matrix)
    return PolytopeVertices(matrix, dens)


# -- the division ---------------------------------------------------------


@dataclass
class Indivisible:
    certificate: InfeasibilityCertificate


class Division:
    """A divided scaling on a fragment algebra, together with the embedding
    of the original algebra.

    Each original atom t is split into fragments tagged by vertex class c
    with multiplicity sigma(t)[c]; an element's class is the tuple counting
    its fragments per class, ordered componentwise.
    """

    def __init__(self, original: Scaling, vertices: PolytopeVertices):
        self.original = original
        self.vertices = vertices
        alg = original.algebra
        m = len(vertices.matrix)
        sigma: dict[str, tuple[int, ...]] = {}
        for t, lab in enumerate(alg.atom_labels):
            counts = []
            for c in range(m):
                v = vertices.matrix[c][t] * vertices.denominators[c]
                if v.denominator != 1:
                    raise ScalingError("vertex denominators were not cleared")
                counts.append(int(v))
            sigma[lab] = tuple(counts)
        self.sigma = sigma
        self.class_sizes = tuple(
            sum(sigma[lab][c] for lab in alg.atom_labels) for c in range(m)
        )
        if self.class_sizes != vertices.denominators:
            raise ScalingError("class sizes disagree with vertex denominators")

        labels: list[str] = []
        frag_class: list[int] = []
        frag_owner: list[int] = []
        for t, lab in enumerate(alg.atom_labels):
            for c in range(m):
                for i in range(sigma[lab][c]):
                    labels.append(f"{lab}.{c + 1}.{i + 1}")
                    frag_class.append(c)
                    frag_owner.append(t)
        if len(labels) > 16:
            raise SizeError(
                f"division would need {len(labels)} fragment atoms (cap 16)"
            )
        self.algebra1 = Algebra(labels)
        self._frag_class = frag_class
        self._frag_owner = frag_owner

        size1 = self.algebra1.size
        tuples: list[tuple[int, ...]] = [()] * size1
        tuples[0] = (0,) * m
        for mask in range(1, size1):
            bit = mask & -mask
            prev = tuples[mask ^ bit]
            c = frag_class[bit.bit_length() - 1]
            tuples[mask] = prev[:c] + (prev[c] + 1,) + prev[c + 1:]
        index: dict[tuple[int, ...], int] = {}
        class_of = []
        class_tuples: list[tuple[int, ...]] = []
        for tup in tuples:
            if tup not in index:
                index[tup] = len(class_tuples)
                class_tuples.append(tup)
            class_of.append(index[tup])
        k = len(class_tuples)
        rows = [0] * k
        for i in range(k):
            ti = class_tuples[i]
            for j in range(k):
                tj = class_tuples[j]
                if ti != tj and all(a <= b for a, b in zip(ti, tj)):
                    rows[i] |= 1 << j
        self.scaling1 = Scaling(self.algebra1, class_of, rows)
        self.class_tuples = tuple(class_tuples)

        emb: list[int] = [0] * alg.n
        for f, t in enumerate(frag_owner):
            emb[t] |= 1 << f
        self._atom_images = emb

    def embed(self, x: Element) -> Element:
        mask = 0
        for t in range(self.original.algebra.n):
            if x.mask >> t & 1:
                mask |= self._atom_images[t]
        return self.algebra1.from_mask(mask)

    def tuple_of(self, x: Element) -> tuple[int, ...]:
        return self.class_tuples[self.scaling1.rho(x)]

    # -- validation -------------------------------------------------------

    def validate(self) -> None:
        """Dividedness of the fragment scaling, faithfulness of the
        embedding, and constructive existence of sums/differences wherever
        the order permits them."""
        check = is_divided(self.scaling1)
        if not check:
            raise NotDividedError(
                f"division is not divided; witness {check.counterexample}"
            )

        s = self.original
        image_class: list[int] = [-1] * s.k
        for mask in range(s.algebra.size):
            c = s.class_of[mask]
            ic = self.scaling1.rho(self.embed(s.algebra.from_mask(mask)))
            if image_class[c] == -1:
                image_class[c] = ic
            elif image_class[c] != ic:
                raise EmbeddingNotFaithfulError(
                    f"class {c} maps to several fragment classes"
                )
        for i in range(s.k):
            for j in range(s.k):
                if i == j:
                    continue
                if image_class[i] == image_class[j]:
                    raise EmbeddingNotFaithfulError(
                        f"distinct classes {i},{j} merge in the division"
                    )
                orig = s.lt_class(i, j)
                im = self.scaling1.lt_class(image_class[i], image_class[j])
                if orig != im:
                    raise EmbeddingNotFaithfulError(
                        f"order of classes {i},{j} not preserved and reflected"
                    )

        # existence half of the divided-scale arithmetic, by construction:
        # sums below the complement, differences below the minuend, and
        # complements within every nested interval all have witnesses
        d = self.class_sizes
        tuples = self.class_tuples
        for ti in tuples:
            for tj in tuples:
                if all(a + b <= dd for a, b, dd in zip(ti, tj, d)):
                    x, y = self._disjoint_witnesses(ti, tj)
                    if self.tuple_of(x) != ti or self.tuple_of(y) != tj or (
                        x.mask & y.mask
                    ):
                        raise ScalingError("constructed sum witness is wrong")
                if all(a >= b for a, b in zip(ti, tj)):
                    x, y = self._nested_witnesses(tj, ti)
                    if self.tuple_of(x) != tj or self.tuple_of(y) != ti or not (
                        x <= y
                    ):
                        raise ScalingError("constructed difference witness is wrong")
        chains = [
            (ti, tj)
            for ti in tuples
            for tj in tuples
            if all(a <= b for a, b in zip(ti, tj))
        ]
        for tlo, tmid in chains:
            for thi in tuples:
                if all(a <= b for a, b in zip(tmid, thi)):
                    a, x = self._nested_witnesses(tlo, tmid)
                    _, b = self._nested_witnesses(tlo, thi)
                    comp = a.mask | (b.mask & ~x.mask)
                    want = tuple(
                        lo + hi - mid for lo, mid, hi in zip(tlo, tmid, thi)
                    )
                    got = self.class_tuples[self.scaling1.class_of[comp]]
                    if got != want:
                        raise ScalingError(
                            "interval complement witness has the wrong class"
                        )

    def _frags_by_class(self) -> list[list[int]]:
        if not hasattr(self, "_byclass"):
            byc: list[list[int]] = [[] for _ in self.class_sizes]
            for f, c in enumerate(self._frag_class):
                byc[c].append(f)
            self._byclass = byc
        return self._byclass

    def _disjoint_witnesses(self, ti, tj) -> tuple[Element, Element]:
        byc = self._frags_by_class()
        x = y = 0
        for c in range(len(self.class_sizes)):
            frags = byc[c]
            for f in frags[: ti[c]]:
                x |= 1 << f
            for f in frags[ti[c]: ti[c] + tj[c]]:
                y |= 1 << f
        return self.algebra1.from_mask(x), self.algebra1.from_mask(y)

    def _nested_witnesses(self, tlow, thigh) -> tuple[Element, Element]:
        byc = self._frags_by_class()
        x = y = 0
        for c in range(len(self.class_sizes)):
            frags = byc[c]
            for f in frags[: tlow[c]]:
                x |= 1 << f
            for f in frags[: thigh[c]]:
                y |= 1 << f
        return self.algebra1.from_mask(x), self.algebra1.from_mask(y)


def construct_division(s: Scaling) -> Division | Indivisible:
    """Split atoms along the vertices of the agreeing-measure polytope, or
    report indivisibility with the measure-infeasibility certificate."""
    found = find_agreeing_measure(s)
    if isinstance(found, InfeasibilityCertificate):
        return Indivisible(found)
    cs = build_constraints(s)
    vertices = enumerate_polytope_vertices(cs)
    division = Division(s, vertices)
    division.validate()
    return division


# -- the classical five-atom indivisible example --------------------------

KPS_GENERATORS = (
    (("a", "d"), ("b", "c")),
    (("b", "e"), ("c", "d")),
    (("c",), ("b", "d")),
    (("b", "c", "d"), ("a", "e")),
)


def kps_example() -> Scaling:
    """The one-to-one scaling on P({a,b,c,d,e}) generated by the four
    classical inequalities, closed under transitivity, disjoint joins, and
    interval complementation.  It has no agreeing measure, so it is
    indivisible, yet it satisfies both scaling axioms."""
    alg = Algebra(["a", "b", "c", "d", "e"])
    size, full = alg.size, alg.size - 1
    rows = [0] * size  # successors
    cols = [0] * size  # predecessors
    queue: list[tuple[int, int]] = []

    def add(x: int, y: int) -> None:
        if x == y:
            raise ClosureCollapseError("closure forces a class below itself")
        if not rows[x] >> y & 1:
            rows[x] |= 1 << y
            cols[y] |= 1 << x
            queue.append((x, y))

    for x in range(size):
        for y in range(size):
            if x != y and x & y == x:
                add(x, y)
    for lo, hi in KPS_GENERATORS:
        add(alg.element(lo).mask, alg.element(hi).mask)

    while queue:
        x, y = queue.pop()
        succ = rows[y]
        while succ:
            bit = succ & -succ
            add(x, bit.bit_length() - 1)
            succ ^= bit
        pred = cols[x]
        while pred:
            bit = pred & -pred
            add(bit.bit_length() - 1, y)
            pred ^= bit
        free = full & ~(x | y)
        z = free
        while True:
            if z:
                add(x | z, y | z)
            if z == 0:
                break
            z = (z - 1) & free
        meet, join = x & y, x | y
        a = meet
        while True:
            up = full & ~join
            bs = up
            while True:
                b = join | bs
                inside = b & ~a
                add(a | (inside & ~y), a | (inside & ~x))
                if bs == 0:
                    break
                bs = (bs - 1) & up
            if a == 0:
                break
            a = (a - 1) & meet

    s = Scaling(alg, list(range(size)), transitive_closure(rows, size))
    report = verify_axioms(s)
    if not report.ok:
        raise ScalingError("closure failed the scaling axioms: " + report.summary())
    return s
