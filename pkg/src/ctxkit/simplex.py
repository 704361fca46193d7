"""Exact phase-1 simplex for ``A x = b, x >= 0`` with Farkas certificates.

Everything is done in :class:`fractions.Fraction`; there is no tolerance
anywhere.  Redundant equality rows are removed by exact elimination
before the simplex runs, and pivots follow Bland's rule so degenerate
problems terminate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass
class FeasibilityResult:
    """Outcome of a feasibility solve.

    ``x`` is a nonnegative solution when feasible.  Otherwise ``y`` holds
    one multiplier per original row with ``y @ A <= 0`` column-wise and
    ``y @ b > 0``, which proves no nonnegative ``x`` exists.
    """

    feasible: bool
    x: list[Fraction] | None = None
    y: list[Fraction] | None = None
    kept_rows: list[int] | None = None
    pivots: int = 0


def independent_rows(
    A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]
) -> tuple[list[int], list[Fraction] | None]:
    """Pick a maximal independent subset of rows of ``A``.

    Returns ``(kept, y)`` where ``y`` is ``None`` unless some dependent row
    contradicts the others, in which case ``y`` combines the original rows
    into ``0 = positive``.
    """
    n = len(A[0]) if A else 0
    basis: list[tuple[int, list[Fraction], Fraction, dict[int, Fraction]]] = []
    kept: list[int] = []
    for i, (row, bi) in enumerate(zip(A, b)):
        r = [Fraction(v) for v in row]
        rb = Fraction(bi)
        combo = {i: ONE}
        for piv, brow, bb, bcombo in basis:
            f = r[piv]
            if not f:
                continue
            for j in range(n):
                if brow[j]:
                    r[j] -= f * brow[j]
            rb -= f * bb
            for k, v in bcombo.items():
                combo[k] = combo.get(k, ZERO) - f * v
        piv = next((j for j in range(n) if r[j]), None)
        if piv is None:
            if rb:
                sign = 1 if rb > 0 else -1
                y = [ZERO] * len(A)
                for k, v in combo.items():
                    y[k] = sign * v
                return kept, y
            continue
        scale = r[piv]
        r = [v / scale for v in r]
        rb /= scale
        combo = {k: v / scale for k, v in combo.items()}
        basis.append((piv, r, rb, combo))
        kept.append(i)
    return kept, None


def find_feasible(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> FeasibilityResult:
    """Decide whether ``A x = b`` has a solution with ``x >= 0``."""
    m = len(A)
    n = len(A[0]) if m else 0
    if m == 0:
        return FeasibilityResult(True, x=[ZERO] * n, kept_rows=[])
    kept, y_dep = independent_rows(A, b)
    if y_dep is not None:
        return FeasibilityResult(False, y=y_dep, kept_rows=kept)

    rows = len(kept)
    signs = [1 if b[i] >= 0 else -1 for i in kept]
    width = n + rows
    # Tableau rows: [A_i | I | b_i] with b_i >= 0; artificials are columns n..n+rows-1.
    tab: list[list[Fraction]] = []
    for r, i in enumerate(kept):
        s = signs[r]
        row = [Fraction(s * A[i][j]) for j in range(n)]
        row.extend(ONE if k == r else ZERO for k in range(rows))
        row.append(Fraction(s * b[i]))
        tab.append(row)
    basis = [n + r for r in range(rows)]
    # Reduced costs for minimising the sum of artificials; last entry is -objective.
    cost = [ZERO] * (width + 1)
    for row in tab:
        for j in range(n):
            cost[j] -= row[j]
        cost[width] -= row[width]

    pivots = 0
    while True:
        enter = next((j for j in range(width) if cost[j] < 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for r in range(rows):
            a = tab[r][enter]
            if a > 0:
                ratio = tab[r][width] / a
                if best is None or ratio < best or (ratio == best and basis[r] < basis[leave]):
                    best, leave = ratio, r
        if leave is None:
            # Unbounded direction cannot occur: the objective is bounded below by 0.
            raise AssertionError("phase-1 objective unbounded")
        _pivot(tab, cost, leave, enter)
        basis[leave] = enter
        pivots += 1

    if cost[width] != 0:
        # cost[width] = -objective < 0.  Artificial reduced costs give the duals.
        y = [ZERO] * m
        for r, i in enumerate(kept):
            y[i] = signs[r] * (ONE - cost[n + r])
        return FeasibilityResult(False, y=y, kept_rows=kept, pivots=pivots)

    x = [ZERO] * n
    for r, j in enumerate(basis):
        if j < n:
            x[j] = tab[r][width]
    return FeasibilityResult(True, x=x, kept_rows=kept, pivots=pivots)


def _pivot(tab: list[list[Fraction]], cost: list[Fraction], r: int, c: int) -> None:
    prow = tab[r]
    p = prow[c]
    if p != 1:
        tab[r] = prow = [v / p for v in prow]
    nz = [j for j, v in enumerate(prow) if v]
    for k, row in enumerate(tab):
        if k == r:
            continue
        f = row[c]
        if f:
            for j in nz:
                row[j] -= f * prow[j]
    f = cost[c]
    if f:
        for j in nz:
            cost[j] -= f * prow[j]


def certificate_holds(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction], y: Sequence[Fraction]) -> bool:
    """Check a Farkas vector: ``y @ A <= 0`` and ``y @ b > 0``."""
    n = len(A[0]) if A else 0
    for j in range(n):
        if sum(y[i] * A[i][j] for i in range(len(A)) if y[i] and A[i][j]) > 0:
            return False
    return sum(yi * bi for yi, bi in zip(y, b)) > 0
