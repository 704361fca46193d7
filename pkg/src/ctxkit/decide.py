"""Noncontextuality and extendability decided by exact LP feasibility.

A model is noncontextual exactly when its tables are a convex combination
of deterministic models, so the primal LP has one weight per global
assignment and one equality per (context, outcome tuple).  Infeasibility
is reported as a linear inequality satisfied by every deterministic
assignment and violated by the model.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Literal, Mapping, Sequence

from .errors import InputError, TooLargeError
from .model import (
    DeterministicAssignment,
    DisturbanceViolation,
    Distribution,
    EmpiricalModel,
    check_no_disturbance,
    deterministic_model,
    marginalize,
    mix,
)
from .scenario import Context, Scenario
from .simplex import certificate_holds, find_feasible

DEFAULT_LIMIT = 10**6

Status = Literal["noncontextual", "contextual", "disturbing", "too-large"]
Row = tuple[Context, tuple[str, ...]]


def enumerate_assignments(s: Scenario, limit: int = DEFAULT_LIMIT) -> Iterator[DeterministicAssignment]:
    """All global assignments, lexicographic by measurement id then outcome order.

    The size check happens eagerly, before the first item is produced.
    """
    total = s.num_assignments()
    if total > limit:
        raise TooLargeError(total, limit)
    ids = s.ids

    def gen() -> Iterator[DeterministicAssignment]:
        for combo in itertools.product(*(s.outcomes(mid) for mid in ids)):
            yield DeterministicAssignment(dict(zip(ids, combo)))

    return gen()


@dataclass(frozen=True)
class HiddenVariableModel:
    assignments: tuple[DeterministicAssignment, ...]
    weights: tuple[Fraction, ...]

    def realise(self, s: Scenario) -> EmpiricalModel:
        return mix([(w, deterministic_model(s, a)) for a, w in zip(self.assignments, self.weights)])


@dataclass(frozen=True)
class InfeasibilityWitness:
    """``sum coefficients[C, t] * p_C(t) <= bound`` for every noncontextual model."""

    coefficients: Mapping[Row, Fraction]
    bound: Fraction

    def evaluate(self, m: EmpiricalModel) -> Fraction:
        return sum(
            (c * m.probability(ctx, t) for (ctx, t), c in self.coefficients.items()),
            Fraction(0),
        )

    def evaluate_assignment(self, a: DeterministicAssignment) -> Fraction:
        return sum((c for (ctx, t), c in self.coefficients.items() if a.restrict(ctx) == t), Fraction(0))


@dataclass(frozen=True)
class Verdict:
    status: Status
    certificate: HiddenVariableModel | InfeasibilityWitness | None = None
    violations: tuple[DisturbanceViolation, ...] = ()


def _rows(s: Scenario) -> list[Row]:
    return [(ctx, t) for ctx in s.cover for t in s.joint_outcomes(ctx)]


def _vertex_matrix(
    s: Scenario, assignments: Sequence[DeterministicAssignment]
) -> tuple[list[Row], list[list[Fraction]]]:
    rows = _rows(s)
    index = {r: i for i, r in enumerate(rows)}
    A = [[Fraction(0)] * len(assignments) for _ in rows]
    for j, a in enumerate(assignments):
        for ctx in s.cover:
            A[index[(ctx, a.restrict(ctx))]][j] = Fraction(1)
    return rows, A


def is_noncontextual(m: EmpiricalModel, limit: int = DEFAULT_LIMIT) -> Verdict:
    violations = check_no_disturbance(m)
    if violations:
        return Verdict("disturbing", violations=tuple(violations))
    s = m.scenario
    assignments = list(enumerate_assignments(s, limit))
    rows, A = _vertex_matrix(s, assignments)
    b = [m.probability(ctx, t) for ctx, t in rows]
    res = find_feasible(A, b)
    if res.feasible:
        picked = [(a, w) for a, w in zip(assignments, res.x) if w]
        return Verdict(
            "noncontextual",
            HiddenVariableModel(tuple(a for a, _ in picked), tuple(w for _, w in picked)),
        )
    return Verdict("contextual", _normalised_witness(rows, A, b, res.y))


def _normalised_witness(
    rows: list[Row], A: list[list[Fraction]], b: list[Fraction], y: list[Fraction]
) -> InfeasibilityWitness:
    # Tighten the bound to the best deterministic value, then scale the
    # violation margin to exactly 1.
    n = len(A[0])
    bound = max(sum(y[i] * A[i][j] for i in range(len(rows)) if y[i]) for j in range(n))
    margin = sum(yi * bi for yi, bi in zip(y, b)) - bound
    coeffs = {rows[i]: y[i] / margin for i in range(len(rows)) if y[i]}
    return InfeasibilityWitness(coeffs, bound / margin)


def verify_certificate(m: EmpiricalModel, v: Verdict, limit: int = DEFAULT_LIMIT) -> bool:
    """Re-check a certificate against ``m`` in exact arithmetic, without any LP."""
    cert = v.certificate
    s = m.scenario
    if isinstance(cert, HiddenVariableModel):
        if v.status != "noncontextual":
            return False
        if len(cert.assignments) != len(cert.weights) or not cert.weights:
            return False
        if any(w < 0 for w in cert.weights) or sum(cert.weights) != 1:
            return False
        try:
            return cert.realise(s).tables == m.tables
        except InputError:
            return False
    if isinstance(cert, InfeasibilityWitness):
        if v.status != "contextual":
            return False
        for a in enumerate_assignments(s, limit):
            if cert.evaluate_assignment(a) > cert.bound:
                return False
        return cert.evaluate(m) > cert.bound
    return False


# -- extension to a larger scenario ----------------------------------------

ExtStatus = Literal["feasible", "infeasible", "disturbing"]


@dataclass(frozen=True)
class ExtensionWitness:
    """Farkas multipliers for the extension system plus the inequality they induce.

    ``multipliers`` is keyed by constraint label: ``("norm", D)``,
    ``("nd", D1, D2, s)`` or ``("agree", C, t)``.  The induced inequality
    ``sum coefficients[C, t] * p_C(t) <= bound`` holds for the restriction of
    every no-disturbance model on the larger scenario and fails for the input.
    """

    multipliers: Mapping[tuple, Fraction]
    coefficients: Mapping[Row, Fraction]
    bound: Fraction

    def evaluate(self, m: EmpiricalModel) -> Fraction:
        return sum(
            (c * m.probability(ctx, t) for (ctx, t), c in self.coefficients.items()),
            Fraction(0),
        )


@dataclass(frozen=True)
class ExtensionResult:
    status: ExtStatus
    extension: EmpiricalModel | None = None
    witness: ExtensionWitness | None = None
    violations: tuple[DisturbanceViolation, ...] = ()

    @property
    def feasible(self) -> bool:
        return self.status == "feasible"


@dataclass
class _ExtensionSystem:
    columns: list[tuple[Context, tuple[str, ...]]]
    labels: list[tuple]
    A: list[list[Fraction]]
    b: list[Fraction] = field(default_factory=list)


def _extension_system(m: EmpiricalModel, sup: Scenario, witness: Mapping[Context, Context]) -> _ExtensionSystem:
    columns = [(D, u) for D in sup.cover for u in sup.joint_outcomes(D)]
    col = {c: j for j, c in enumerate(columns)}
    n = len(columns)
    labels: list[tuple] = []
    A: list[list[Fraction]] = []
    b: list[Fraction] = []

    def add(label: tuple, entries: dict[int, int], rhs: Fraction) -> None:
        row = [Fraction(0)] * n
        for j, v in entries.items():
            row[j] = Fraction(v)
        labels.append(label)
        A.append(row)
        b.append(rhs)

    for D in sup.cover:
        add(("norm", D), {col[(D, u)]: 1 for u in sup.joint_outcomes(D)}, Fraction(1))
    for D1, D2 in itertools.combinations(sup.cover, 2):
        overlap = tuple(x for x in D1 if x in D2)
        if not overlap:
            continue
        p1 = [D1.index(x) for x in overlap]
        p2 = [D2.index(x) for x in overlap]
        for s in sup.joint_outcomes(overlap):
            entries: dict[int, int] = {}
            for u in sup.joint_outcomes(D1):
                if tuple(u[i] for i in p1) == s:
                    entries[col[(D1, u)]] = 1
            for u in sup.joint_outcomes(D2):
                if tuple(u[i] for i in p2) == s:
                    entries[col[(D2, u)]] = -1
            add(("nd", D1, D2, s), entries, Fraction(0))
    for C in m.scenario.cover:
        D = witness[C]
        pos = [D.index(x) for x in C]
        for t in m.scenario.joint_outcomes(C):
            entries = {col[(D, u)]: 1 for u in sup.joint_outcomes(D) if tuple(u[i] for i in pos) == t}
            add(("agree", C, t), entries, m.probability(C, t))
    return _ExtensionSystem(columns, labels, A, b)


def _order_or_raise(sub: Scenario, sup: Scenario):
    from .subscenario import is_subscenario

    order = is_subscenario(sub, sup)
    if not order:
        raise InputError(f"not a subscenario: {order.reason}")
    return order


def check_extends(m: EmpiricalModel, sup: Scenario, limit: int = DEFAULT_LIMIT) -> ExtensionResult:
    """Search for a model on ``sup`` whose marginals reproduce every table of ``m``."""
    order = _order_or_raise(m.scenario, sup)
    for D in sup.cover:
        size = _product_size(sup, D)
        if size > limit:
            raise TooLargeError(size, limit, f"joint outcomes of {','.join(D)}")
    violations = check_no_disturbance(m)
    if violations:
        return ExtensionResult("disturbing", violations=tuple(violations))
    system = _extension_system(m, sup, order.witness)
    res = find_feasible(system.A, system.b)
    if res.feasible:
        tables = {}
        for D in sup.cover:
            ms = tuple(sup.measurement(x) for x in D)
            weights = {u: w for (DD, u), w in zip(system.columns, res.x) if DD == D and w}
            tables[D] = Distribution(ms, weights)
        return ExtensionResult("feasible", extension=EmpiricalModel(sup, tables))
    y = res.y
    scale = sum(yi * bi for yi, bi in zip(y, system.b))
    multipliers = {lab: yi / scale for lab, yi in zip(system.labels, y) if yi}
    coeffs = {(lab[1], lab[2]): v for lab, v in multipliers.items() if lab[0] == "agree"}
    bound = -sum((v for lab, v in multipliers.items() if lab[0] == "norm"), Fraction(0))
    return ExtensionResult("infeasible", witness=ExtensionWitness(multipliers, coeffs, bound))


def _product_size(s: Scenario, ctx: Context) -> int:
    n = 1
    for x in ctx:
        n *= len(s.outcomes(x))
    return n


def verify_extension(m: EmpiricalModel, sup: Scenario, result: ExtensionResult) -> bool:
    """Independent exact re-check of an extension or of its Farkas witness."""
    order = _order_or_raise(m.scenario, sup)
    if result.status == "feasible":
        ext = result.extension
        if ext is None or ext.scenario != sup or check_no_disturbance(ext):
            return False
        for C in m.scenario.cover:
            D = order.witness[C]
            if marginalize(ext.tables[D], C) != m.tables[C]:
                return False
        return True
    if result.status == "infeasible" and result.witness is not None:
        system = _extension_system(m, sup, order.witness)
        y = [result.witness.multipliers.get(lab, Fraction(0)) for lab in system.labels]
        if not certificate_holds(system.A, system.b, y):
            return False
        return result.witness.evaluate(m) > result.witness.bound
    return False
