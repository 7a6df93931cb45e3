"""Exhaustive census of scalings on small powerset algebras.

Scalings are counted up to isomorphism, where an isomorphism may permute
the atoms and relabel the image classes (the order structure is all that
matters).  Enumeration runs in two stages: first the fiber partition of
the 2^n elements (0 and 1 alone in their fibers, fibers are antichains,
complements of tied elements tied), then a three-way search over the
undecided class pairs (below, above, incomparable) with incremental
transitivity and complement-reversal propagation.  Survivors of the full
axiom verification are reduced to a canonical form by minimizing the
encoding over all atom permutations.

The four-atom case is only enumerated for linearly ordered one-to-one
scalings: those are mirror-symmetric linear extensions of the subset
order (the complement of the i-th element sits i-th from the end), found
by a prefix search over the first half.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations

from .algebra import Algebra
from .scaling import Scaling, ScalingError, verify_axioms


class UnsupportedSizeError(ScalingError):
    pass


_LETTERS = "abcdefgh"


def _perm_mask_tables(n: int) -> list[list[int]]:
    tables = []
    for perm in permutations(range(n)):
        pm = [0] * (1 << n)
        for mask in range(1 << n):
            out = 0
            for i in range(n):
                if mask >> i & 1:
                    out |= 1 << perm[i]
            pm[mask] = out
        tables.append(pm)
    return tables


def _encode(class_of: list[int], rows: list[int]) -> tuple:
    """Renumber classes by first appearance in mask order and flatten."""
    remap: dict[int, int] = {}
    cls = []
    for c in class_of:
        if c not in remap:
            remap[c] = len(remap)
        cls.append(remap[c])
    pairs = sorted(
        (remap[i], remap[j])
        for i in range(len(rows))
        for j in range(len(rows))
        if rows[i] >> j & 1
    )
    return tuple(cls), tuple(pairs)


def canonical_key(s: Scaling) -> tuple:
    """Isomorphism-invariant encoding: the least (classes, order) encoding
    over all atom permutations."""
    n = s.algebra.n
    best = None
    for pm in _perm_mask_tables(n):
        cls = [0] * s.algebra.size
        for mask in range(s.algebra.size):
            cls[pm[mask]] = s.class_of[mask]
        enc = _encode(cls, list(s.lt))
        if best is None or enc < best:
            best = enc
    return best


def scaling_from_key(n: int, key: tuple) -> Scaling:
    cls, pairs = key
    rows = [0] * (max(cls) + 1)
    for i, j in pairs:
        rows[i] |= 1 << j
    return Scaling(Algebra(list(_LETTERS[:n])), list(cls), rows)


@dataclass
class CensusResult:
    n: int
    one_to_one_total: int = 0
    one_to_one_linear: int = 0
    many_to_one_total: int = 0
    many_to_one_linear: int = 0
    representatives: list[Scaling] = field(default_factory=list)

    @property
    def total(self) -> int:
        return self.one_to_one_total + self.many_to_one_total


def _antichain_partitions(n: int):
    """Complement-stable partitions of the middle masks into Boolean
    antichains, as full class_of lists (0 first, 1 last)."""
    size = 1 << n
    full = size - 1
    middle = list(range(1, full))
    assign: dict[int, int] = {}

    def stable() -> bool:
        return all(
            assign[full ^ x] == assign[full ^ y]
            for x in middle
            for y in middle
            if assign[x] == assign[y]
        )

    def rec(idx: int, used: int):
        if idx == len(middle):
            if stable():
                class_of = [0] * size
                for m, c in assign.items():
                    class_of[m] = c + 1
                class_of[full] = used + 1
                yield class_of
            return
        m = middle[idx]
        for c in range(used + 1):
            ok = all(
                not (x & m == x or x & m == m)
                for x, cx in assign.items()
                if cx == c
            )
            if ok:
                assign[m] = c
                yield from rec(idx + 1, max(used, c + 1))
                del assign[m]

    yield from rec(0, 0)


def _complete_orders(k: int, comp: list[int], base_pairs: list[tuple[int, int]]):
    """All strict orders on k classes extending the forced pairs: decide
    every remaining pair three ways, propagating transitivity and
    complement reversal, and yield the closed relations."""

    def propagate(rows: list[int], forb: set, adds: list[tuple[int, int]]) -> bool:
        queue = list(adds)
        while queue:
            i, j = queue.pop()
            if i == j:
                return False
            if rows[i] >> j & 1:
                continue
            if ((i, j) if i < j else (j, i)) in forb:
                return False
            rows[i] |= 1 << j
            queue.append((comp[j], comp[i]))
            succ = rows[j]
            t = 0
            while succ:
                if succ & 1:
                    queue.append((i, t))
                t += 1
                succ >>= 1
            for w in range(k):
                if rows[w] >> i & 1:
                    queue.append((w, j))
        return True

    start = [0] * k
    if not propagate(start, set(), base_pairs):
        return

    def rec(rows: list[int], forb: set):
        for i in range(k):
            for j in range(i + 1, k):
                if rows[i] >> j & 1 or rows[j] >> i & 1 or (i, j) in forb:
                    continue
                r1 = list(rows)
                if propagate(r1, forb, [(i, j)]):
                    yield from rec(r1, forb)
                r2 = list(rows)
                if propagate(r2, forb, [(j, i)]):
                    yield from rec(r2, forb)
                forb2 = set(forb)
                forb2.add((i, j))
                ci, cj = comp[i], comp[j]
                forb2.add((ci, cj) if ci < cj else (cj, ci))
                yield from rec(rows, forb2)
                return
        yield list(rows)

    yield from rec(start, set())


def _census_small(n: int) -> list[tuple]:
    algebra = Algebra(list(_LETTERS[:n]))
    size = algebra.size
    full = size - 1
    seen: dict[tuple, bool] = {}
    for class_of in _antichain_partitions(n):
        k = max(class_of) + 1
        comp = [0] * k
        for m in range(size):
            comp[class_of[m]] = class_of[full ^ m]
        base = [
            (class_of[x], class_of[y])
            for x in range(size)
            for y in range(size)
            if x != y and x & y == x and class_of[x] != class_of[y]
        ]
        for rows in _complete_orders(k, comp, base):
            s = Scaling(algebra, list(class_of), rows)
            key = canonical_key(s)
            if key not in seen:
                seen[key] = verify_axioms(s).ok
    return [key for key, ok in sorted(seen.items()) if ok]


def _mirror_linear_extensions(n: int):
    """Linear extensions of the subset order on 2^n elements in which the
    complement of the i-th element is i-th from the end.  The first half
    determines the rest."""
    size = 1 << n
    full = size - 1
    half = size // 2
    subs = [[m ^ (1 << i) for i in range(n) if m >> i & 1] for m in range(size)]
    seq = [0]
    placed = [False] * size
    placed[0] = True

    def rec():
        if len(seq) == half:
            yield seq + [full ^ m for m in reversed(seq)]
            return
        for m in range(1, size):
            if placed[m] or placed[full ^ m]:
                continue
            if all(placed[s] for s in subs[m]):
                placed[m] = True
                seq.append(m)
                yield from rec()
                seq.pop()
                placed[m] = False

    yield from rec()


def _seq_scaling(algebra: Algebra, seq: list[int] | tuple[int, ...]) -> Scaling:
    size = algebra.size
    pos = [0] * size
    for p, m in enumerate(seq):
        pos[m] = p
    remap: dict[int, int] = {}
    cls = [0] * size
    for m in range(size):
        if pos[m] not in remap:
            remap[pos[m]] = len(remap)
        cls[m] = remap[pos[m]]
    rows = [0] * size
    for m1 in range(size):
        for m2 in range(size):
            if pos[m1] < pos[m2]:
                rows[cls[m1]] |= 1 << cls[m2]
    return Scaling(algebra, cls, rows)


def _census_linear_one_to_one(n: int) -> list[tuple]:
    algebra = Algebra(list(_LETTERS[:n]))
    tables = _perm_mask_tables(n)
    seen: dict[tuple, bool] = {}
    for seq in _mirror_linear_extensions(n):
        best = min(tuple(pm[m] for m in seq) for pm in tables)
        if best not in seen:
            seen[best] = verify_axioms(_seq_scaling(algebra, best)).ok
    keys = {
        canonical_key(_seq_scaling(algebra, best))
        for best, ok in seen.items()
        if ok
    }
    return sorted(keys)


def enumerate_scalings(
    n: int, one_to_one: bool | None = None, linear_only: bool = False
) -> CensusResult:
    """Census of scalings on the powerset of n atoms up to isomorphism.
    n must be 2 or 3 for the general census; n=4 supports only the
    linearly ordered one-to-one slice."""
    if n in (2, 3):
        keys = _census_small(n)
    elif n == 4:
        if not (one_to_one and linear_only):
            raise UnsupportedSizeError(
                "the four-atom census covers only one-to-one linear scalings"
            )
        keys = _census_linear_one_to_one(4)
    else:
        raise UnsupportedSizeError(f"no census for n={n}")

    result = CensusResult(n)
    for key in keys:
        s = scaling_from_key(n, key)
        o2o = s.is_one_to_one()
        linear = s.is_linear()
        if one_to_one is not None and o2o != one_to_one:
            continue
        if linear_only and not linear:
            continue
        if o2o:
            result.one_to_one_total += 1
            if linear:
                result.one_to_one_linear += 1
        else:
            result.many_to_one_total += 1
            if linear:
                result.many_to_one_linear += 1
        result.representatives.append(s)
    return result
