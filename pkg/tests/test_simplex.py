from __future__ import annotations

import random
from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import linprog

from ctxkit.simplex import certificate_holds, find_feasible, independent_rows


def scipy_feasible(A, b) -> bool:
    res = linprog(
        np.zeros(len(A[0])),
        A_eq=np.array(A, dtype=float),
        b_eq=np.array(b, dtype=float),
        bounds=(0, None),
        method="highs",
    )
    return res.status == 0


def check(A, b):
    A = [[Fraction(v) for v in row] for row in A]
    b = [Fraction(v) for v in b]
    res = find_feasible(A, b)
    if res.feasible:
        assert all(x >= 0 for x in res.x)
        for row, bi in zip(A, b):
            assert sum(a * x for a, x in zip(row, res.x)) == bi
    else:
        assert certificate_holds(A, b, res.y)
    return res


@pytest.mark.parametrize("seed", range(300))
def test_agrees_with_highs_on_random_systems(seed):
    rng = random.Random(seed)
    m, n = rng.randint(1, 5), rng.randint(1, 7)
    A = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(m)]
    if rng.random() < 0.5:
        x = [rng.randint(0, 3) for _ in range(n)]
        b = [sum(a * xi for a, xi in zip(row, x)) for row in A]
    else:
        b = [rng.randint(-5, 5) for _ in range(m)]
    if rng.random() < 0.3 and m > 1:
        # duplicate a row to exercise the redundancy pass
        A.append(list(A[0]))
        b.append(b[0] + rng.choice([0, 0, 1]))
    res = check(A, b)
    assert res.feasible == scipy_feasible(A, b)


def test_inconsistent_duplicate_rows_certified():
    res = check([[1, 1], [1, 1]], [1, 2])
    assert not res.feasible


def test_sign_infeasible():
    res = check([[1, 1]], [-1])
    assert not res.feasible


def test_degenerate_problem_terminates():
    # Many ties in the ratio test; Bland's rule must not cycle.
    A = [[1, 1, 1, 1, 0], [1, -1, 0, 0, 1], [0, 1, -1, 0, 0], [0, 0, 1, -1, 0]]
    res = check(A, [1, 0, 0, 0])
    assert res.feasible


def test_independent_rows_reports_contradiction():
    A = [[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]]
    kept, y = independent_rows(A, [Fraction(1), Fraction(3)])
    assert kept == [0]
    assert y is not None
    assert all(sum(y[i] * A[i][j] for i in range(2)) == 0 for j in range(2))
    assert y[0] * 1 + y[1] * 3 > 0


def test_certificate_holds_rejects_bad_multipliers():
    A = [[Fraction(1), Fraction(1)]]
    b = [Fraction(1)]
    assert not certificate_holds(A, b, [Fraction(1)])
    assert not certificate_holds(A, b, [Fraction(-1)])
