"""Independent oracles and random generators shared by the test modules.

The oracles deliberately avoid ctxkit's LP code: brute-force enumeration,
scipy's HiGHS solver in floating point, and a numpy GF(2) elimination.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import numpy as np
from scipy.optimize import linprog

from ctxkit.bundle import LocalSpace, SampleBundle
from ctxkit.model import DeterministicAssignment, deterministic_model, make_model, mix
from ctxkit.scenario import Scenario, make_path


# -- oracles -----------------------------------------------------------------


def support_compatible_assignments(m) -> list[dict]:
    """Global assignments whose every context restriction has positive probability.

    A noncontextual model is a mixture of such assignments only, so an
    empty list proves contextuality.
    """
    s = m.scenario
    out = []
    for combo in itertools.product(*(s.outcomes(x) for x in s.ids)):
        a = dict(zip(s.ids, combo))
        if all(m.probability(ctx, tuple(a[x] for x in ctx)) > 0 for ctx in s.cover):
            out.append(a)
    return out


def float_noncontextual(m) -> bool:
    """HiGHS feasibility of the marginal problem over a global joint table."""
    s = m.scenario
    globals_ = list(itertools.product(*(s.outcomes(x) for x in s.ids)))
    rows, rhs = [], []
    for ctx in s.cover:
        pos = [s.ids.index(x) for x in ctx]
        for t in s.joint_outcomes(ctx):
            rows.append([1.0 if tuple(g[i] for i in pos) == t else 0.0 for g in globals_])
            rhs.append(float(m.probability(ctx, t)))
    res = linprog(np.zeros(len(globals_)), A_eq=np.array(rows), b_eq=np.array(rhs), bounds=(0, None), method="highs")
    return res.status == 0


def float_extends(m, sup: Scenario) -> bool:
    """HiGHS feasibility of: one table per super-context, pairwise consistent,
    reproducing every table of ``m`` from every super-context containing it."""
    cols = [(D, u) for D in sup.cover for u in sup.joint_outcomes(D)]
    rows, rhs = [], []

    def marginal_row(D, keep, t, sign=1.0):
        pos = [D.index(x) for x in keep]
        return [sign if DD == D and tuple(u[i] for i in pos) == t else 0.0 for DD, u in cols]

    for D in sup.cover:
        rows.append([1.0 if DD == D else 0.0 for DD, _ in cols])
        rhs.append(1.0)
    for D1, D2 in itertools.combinations(sup.cover, 2):
        ov = [x for x in D1 if x in D2]
        if ov:
            for t in sup.joint_outcomes(ov):
                rows.append([a + b for a, b in zip(marginal_row(D1, ov, t), marginal_row(D2, ov, t, -1.0))])
                rhs.append(0.0)
    for C in m.scenario.cover:
        for D in sup.cover:
            if set(C) <= set(D):
                for t in m.scenario.joint_outcomes(C):
                    rows.append(marginal_row(D, C, t))
                    rhs.append(float(m.probability(C, t)))
    res = linprog(np.zeros(len(cols)), A_eq=np.array(rows), b_eq=np.array(rhs), bounds=(0, None), method="highs")
    return res.status == 0


def gf2_rank_numpy(M) -> int:
    R = np.array(M, dtype=np.uint8) % 2
    if R.size == 0:
        return 0
    rank = 0
    rows, cols = R.shape
    for c in range(cols):
        hit = next((r for r in range(rank, rows) if R[r, c]), None)
        if hit is None:
            continue
        R[[rank, hit]] = R[[hit, rank]]
        for r in range(rows):
            if r != rank and R[r, c]:
                R[r] ^= R[rank]
        rank += 1
    return rank


def betti_oracle(s: Scenario) -> tuple[int, int]:
    """Dense boundary matrices of the down-closed complex, ranks by numpy elimination."""
    V = list(s.ids)
    E = sorted({e for c in s.cover for e in itertools.combinations(c, 2)})
    T = sorted({t for c in s.cover for t in itertools.combinations(c, 3)})
    d1 = [[1 if v in e else 0 for e in E] for v in V]
    d2 = [[1 if set(e) <= set(t) else 0 for t in T] for e in E]
    r1 = gf2_rank_numpy(d1) if E else 0
    r2 = gf2_rank_numpy(d2) if T else 0
    return len(V) - r1, len(E) - r1 - r2


# -- generators ----------------------------------------------------------------


def random_weights(rng: random.Random, k: int) -> list[Fraction]:
    raw = [rng.randint(1, 9) for _ in range(k)]
    total = sum(raw)
    return [Fraction(r, total) for r in raw]


def random_hv_model(s: Scenario, rng: random.Random, max_vertices: int = 5):
    """Random rational mixture of deterministic models."""
    globals_ = list(itertools.product(*(s.outcomes(x) for x in s.ids)))
    picks = rng.sample(globals_, rng.randint(1, min(max_vertices, len(globals_))))
    ws = random_weights(rng, len(picks))
    parts = [(w, deterministic_model(s, DeterministicAssignment(dict(zip(s.ids, g))))) for w, g in zip(ws, picks)]
    return mix(parts)


def random_path_model(n: int, rng: random.Random):
    """No-disturbance model on a binary path built from p(x0) and chained p(x_i+1 | x_i)."""
    s = make_path(n)
    p0 = random_weights(rng, 2)
    marg = {"0": p0[0], "1": p0[1]}
    tables = {}
    for i in range(n - 1):
        cond = {x: random_weights(rng, 2) for x in "01"}
        table = {(x, y): marg[x] * cond[x][int(y)] for x in "01" for y in "01"}
        tables[(f"M_{i}", f"M_{i + 1}")] = table
        marg = {y: sum(table[(x, y)] for x in "01") for y in "01"}
    return make_model(s, tables)


def random_dichotomic_bundle(s: Scenario, rng: random.Random) -> SampleBundle:
    spaces = {}
    for x in s.ids:
        outs = s.outcomes(x)
        assert len(outs) == 2
        values = (f"{x}_p", f"{x}_q")
        ref = dict(zip(values, outs if rng.random() < 0.5 else outs[::-1]))
        spaces[x] = LocalSpace(values, ref)
    labelings = {}
    for ctx in s.cover:
        for x in ctx:
            values = spaces[x].values
            outs = s.outcomes(x)
            labelings[(ctx, x)] = dict(zip(values, outs if rng.random() < 0.5 else outs[::-1]))
    return SampleBundle(s, spaces, labelings)


# -- pinned fixture hashes -------------------------------------------------------

# sha256 of ``ctxkit gen <args>`` output, frozen when the formats were settled.
FIXTURE_HASHES = {
    ("hollow-triangle",): "54f29dbd00e7e44dfd59e03bdf9c0bc8fa34e7a4dda7cea6647d465f3a253253",
    ("sparable-model",): "04f82bd722f5401f77b7f2d48eff371d2d8144507acc929486577b725805c68b",
    ("n-cycle",): "a311d07c471139b494a6530738dff83d3e0d71cc3bc6045abca7f478ec840c3e",
    ("n-cycle", "--width", "3"): "0956aad5d7e0014ff4979f573f3fa8cc55ab6dca9e3a6a84fe720c8a514bd59e",
    ("n-cycle", "--width", "4"): "be7ca4f46b47d5294e78e1b6440d024657cc4ae1c5bb158b779daa51dddb9a84",
    ("moebius", "--flips", "0"): "9b4c94c4417be9ae8cd2ca1d1c0780aab1886e0283bf83eae88886078ec77c6f",
    ("classical",): "20f787fb1340e75eab11aec4edb6a61a42df02a7f6312ec2fc7b28e60047c0a6",
    ("path",): "b6a6e31916d1c0f63bc8cc7261872fff202937f891ae2fa0bf636cf227d4635c",
}
