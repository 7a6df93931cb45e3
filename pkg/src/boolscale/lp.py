"""Exact rational linear programming via two-phase simplex with Bland's rule.

Small dense tableaux over ``fractions.Fraction``; no tolerances anywhere.
Bland's anti-cycling pivot (lowest eligible index enters, ties on the ratio
test broken by lowest basis index) guarantees termination.  Problem sizes in
this package are tiny (tens of rows), so clarity wins over speed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass
class LPResult:
    status: str  # 'optimal' | 'infeasible' | 'unbounded'
    x: list[Fraction] | None = None
    objective: Fraction | None = None


class _Tableau:
    """rows: m constraint rows (coefficients + rhs), last row is the
    objective in reduced-cost form.  All rhs entries kept nonnegative."""

    def __init__(self, rows: list[list[Fraction]], basis: list[int]):
        self.rows = rows
        self.basis = basis
        self.m = len(basis)
        self.width = len(rows[0])

    def pivot(self, r: int, c: int) -> None:
        rows = self.rows
        piv = rows[r][c]
        rows[r] = [v / piv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        self.basis[r] = c

    def bland_minimize(self) -> str:
        """Run simplex steps until the (minimization) objective row has no
        negative reduced cost.  Returns 'optimal' or 'unbounded'."""
        rows = self.rows
        obj = len(rows) - 1
        ncols = self.width - 1
        while True:
            enter = -1
            for c in range(ncols):
                if rows[obj][c] < 0:
                    enter = c
                    break
            if enter < 0:
                return "optimal"
            leave = -1
            best: Fraction | None = None
            for r in range(self.m):
                a = rows[r][enter]
                if a > 0:
                    ratio = rows[r][-1] / a
                    if best is None or ratio < best or (
                        ratio == best and self.basis[r] < self.basis[leave]
                    ):
                        best = ratio
                        leave = r
            if leave < 0:
                return "unbounded"
            self.pivot(leave, enter)


def solve_lp(
    c: Sequence[Fraction],
    a_ub: Sequence[Sequence[Fraction]],
    b_ub: Sequence[Fraction],
    a_eq: Sequence[Sequence[Fraction]],
    b_eq: Sequence[Fraction],
    maximize: bool = False,
) -> LPResult:
    """Optimize c.x subject to a_ub.x <= b_ub, a_eq.x == b_eq, x >= 0."""
    n = len(c)
    c = [Fraction(v) for v in c]
    if maximize:
        c = [-v for v in c]

    rows: list[list[Fraction]] = []
    kinds: list[str] = []
    for coeffs, rhs in zip(a_ub, b_ub):
        rows.append([Fraction(v) for v in coeffs] + [Fraction(rhs)])
        kinds.append("ub")
    for coeffs, rhs in zip(a_eq, b_eq):
        rows.append([Fraction(v) for v in coeffs] + [Fraction(rhs)])
        kinds.append("eq")
    m = len(rows)

    # columns: n structural | slack (ub rows) | artificial | rhs.
    # ub rows with nonnegative rhs start basic at their slack, so only
    # equality rows and negative-rhs rows need an artificial.
    nslack = sum(1 for kind in kinds if kind == "ub")
    need_art = [kind == "eq" or row[-1] < 0 for row, kind in zip(rows, kinds)]
    width = n + nslack + sum(need_art) + 1
    tab_rows: list[list[Fraction]] = []
    basis: list[int] = []
    si = ai = 0
    for row, kind, wants in zip(rows, kinds, need_art):
        coeffs, rhs = row[:-1], row[-1]
        line = [ZERO] * width
        for j, v in enumerate(coeffs):
            line[j] = v
        slot = -1
        if kind == "ub":
            line[n + si] = ONE
            slot = n + si
            si += 1
        if rhs < 0:
            line = [-v for v in line]
            rhs = -rhs
        line[-1] = rhs
        if wants:
            slot = n + nslack + ai
            line[slot] = ONE
            ai += 1
        tab_rows.append(line)
        basis.append(slot)

    # phase 1: minimize the sum of artificials
    phase1 = [ZERO] * width
    for line, wants in zip(tab_rows, need_art):
        if wants:
            for j in range(width):
                phase1[j] -= line[j]
    for j in range(n + nslack, width - 1):
        phase1[j] = ZERO  # reduced cost of basic artificials
    tab = _Tableau(tab_rows + [phase1], basis)
    status = tab.bland_minimize()
    if status != "optimal" or tab.rows[-1][-1] != 0:
        return LPResult("infeasible")

    # drive any lingering artificial out of the basis (degenerate rows);
    # rows where that is impossible are redundant and get dropped
    drop: list[int] = []
    for r in range(tab.m):
        if tab.basis[r] >= n + nslack:
            for cidx in range(n + nslack):
                if tab.rows[r][cidx] != 0:
                    tab.pivot(r, cidx)
                    break
            else:
                drop.append(r)

    # phase 2: forbid artificial columns, install the real objective
    keep = n + nslack
    rows2 = [
        line[:keep] + [line[-1]]
        for r, line in enumerate(tab.rows[:-1])
        if r not in drop
    ]
    basis2 = [b for r, b in enumerate(tab.basis) if r not in drop]
    obj = [ZERO] * (keep + 1)
    for j in range(n):
        obj[j] = c[j]
    tab2 = _Tableau(rows2 + [obj], basis2)
    for r in range(tab2.m):
        b = tab2.basis[r]
        if b < keep and tab2.rows[-1][b] != 0:
            f = tab2.rows[-1][b]
            tab2.rows[-1] = [a - f * bb for a, bb in zip(tab2.rows[-1], tab2.rows[r])]
    status = tab2.bland_minimize()
    if status == "unbounded":
        return LPResult("unbounded")

    x = [ZERO] * n
    for r in range(tab2.m):
        if tab2.basis[r] < n:
            x[tab2.basis[r]] = tab2.rows[r][-1]
    value = sum(ci * xi for ci, xi in zip(c, x))
    if maximize:
        value = -value
    return LPResult("optimal", x, value)
