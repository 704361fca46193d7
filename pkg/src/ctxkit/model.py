"""Exact probability tables per context and the marginal condition."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import InputError
from .scenario import Context, Measurement, Scenario, context_key

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``"p/q"`` or an integer string; floats are rejected."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool):
        raise InputError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str) or not _RATIONAL.match(text.strip()):
        raise InputError(f"not an exact rational: {text!r}")
    try:
        return Fraction(text.strip())
    except ZeroDivisionError:
        raise InputError(f"zero denominator: {text!r}") from None


def format_rational(q: Fraction) -> str:
    return str(q)


@dataclass(frozen=True)
class Distribution:
    """A probability table over the joint outcomes of ``measurements``.

    Storage is dense: every tuple of the outcome product has an entry,
    and tuples missing from the input are read as weight 0.
    """

    measurements: tuple[Measurement, ...]
    weights: Mapping[tuple[str, ...], Fraction]

    def __post_init__(self) -> None:
        ms = tuple(self.measurements)
        support = list(itertools.product(*(m.outcomes for m in ms)))
        known = set(support)
        dense = dict.fromkeys(support, Fraction(0))
        for t, w in self.weights.items():
            t = tuple(t)
            if t not in known:
                raise InputError(f"tuple {t} is not a joint outcome of {[m.id for m in ms]}")
            w = parse_rational(w)
            if w < 0:
                raise InputError(f"negative weight {w} at {t}")
            dense[t] = w
        total = sum(dense.values())
        if total != 1:
            raise InputError(f"weights over {[m.id for m in ms]} sum to {total}, not 1")
        object.__setattr__(self, "measurements", ms)
        object.__setattr__(self, "weights", dense)

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(m.id for m in self.measurements)

    def __getitem__(self, t: tuple[str, ...]) -> Fraction:
        return self.weights[tuple(t)]

    def support(self) -> list[tuple[str, ...]]:
        return [t for t, w in self.weights.items() if w]

    @classmethod
    def point_mass(cls, measurements: Sequence[Measurement], t: Sequence[str]) -> Distribution:
        return cls(tuple(measurements), {tuple(t): Fraction(1)})


def marginalize(d: Distribution, keep: Sequence[str]) -> Distribution:
    """Sum out every measurement of ``d`` not in ``keep``.

    The result lists the kept measurements in the order of ``d``.
    """
    keep_set = set(keep)
    if not keep_set:
        raise InputError("marginalize needs a nonempty set of measurements to keep")
    foreign = keep_set - set(d.ids)
    if foreign:
        raise InputError(f"cannot keep {sorted(foreign)}: not in {list(d.ids)}")
    pos = [i for i, mid in enumerate(d.ids) if mid in keep_set]
    out: dict[tuple[str, ...], Fraction] = {}
    for t, w in d.weights.items():
        r = tuple(t[i] for i in pos)
        out[r] = out.get(r, Fraction(0)) + w
    return Distribution(tuple(d.measurements[i] for i in pos), out)


@dataclass(frozen=True)
class EmpiricalModel:
    scenario: Scenario
    tables: Mapping[Context, Distribution]

    def __post_init__(self) -> None:
        tables = {}
        for ctx in self.scenario.cover:
            if ctx not in self.tables:
                raise InputError(f"missing table for context {context_key(ctx)}")
            d = self.tables[ctx]
            if d.ids != ctx:
                raise InputError(f"table for {context_key(ctx)} is over {list(d.ids)}")
            tables[ctx] = d
        extra = set(self.tables) - set(self.scenario.cover)
        if extra:
            raise InputError(f"tables for contexts outside the cover: {sorted(map(context_key, extra))}")
        object.__setattr__(self, "tables", tables)

    def __getitem__(self, ctx: Sequence[str]) -> Distribution:
        return self.tables[tuple(ctx)]

    def probability(self, ctx: Sequence[str], t: Sequence[str]) -> Fraction:
        return self.tables[tuple(ctx)][tuple(t)]


def make_model(s: Scenario, tables: Mapping[Sequence[str], Mapping[Sequence[str], object]]) -> EmpiricalModel:
    """Build a model from sparse per-context tables keyed in canonical member order."""
    built = {}
    for ctx, table in tables.items():
        ctx = tuple(ctx)
        if ctx not in s.cover:
            raise InputError(f"{context_key(ctx)} is not a context of the scenario")
        ms = tuple(s.measurement(mid) for mid in ctx)
        built[ctx] = Distribution(ms, {tuple(t): parse_rational(w) for t, w in table.items()})
    return EmpiricalModel(s, built)


@dataclass(frozen=True)
class DisturbanceViolation:
    first: Context
    second: Context
    overlap: tuple[str, ...]
    first_marginal: Distribution
    second_marginal: Distribution

    def differing_measurements(self) -> list[str]:
        """Overlap members whose single-measurement marginals already differ."""
        out = []
        for mid in self.overlap:
            if marginalize(self.first_marginal, [mid]) != marginalize(self.second_marginal, [mid]):
                out.append(mid)
        return out


def check_no_disturbance(m: EmpiricalModel) -> list[DisturbanceViolation]:
    violations = []
    for c1, c2 in itertools.combinations(m.scenario.cover, 2):
        overlap = tuple(mid for mid in c1 if mid in c2)
        if not overlap:
            continue
        p1 = marginalize(m.tables[c1], overlap)
        p2 = marginalize(m.tables[c2], overlap)
        if p1 != p2:
            violations.append(DisturbanceViolation(c1, c2, overlap, p1, p2))
    return violations


@dataclass(frozen=True)
class DeterministicAssignment:
    values: Mapping[str, str]

    def __getitem__(self, mid: str) -> str:
        return self.values[mid]

    def restrict(self, ctx: Sequence[str]) -> tuple[str, ...]:
        return tuple(self.values[mid] for mid in ctx)

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.values.items())))


def deterministic_model(s: Scenario, a: DeterministicAssignment) -> EmpiricalModel:
    missing = [mid for mid in s.ids if mid not in a.values]
    if missing:
        raise InputError(f"assignment misses measurements {missing}")
    for mid in s.ids:
        if a[mid] not in s.outcomes(mid):
            raise InputError(f"{a[mid]!r} is not an outcome of {mid!r}")
    tables = {
        ctx: Distribution.point_mass(tuple(s.measurement(mid) for mid in ctx), a.restrict(ctx))
        for ctx in s.cover
    }
    return EmpiricalModel(s, tables)


def mix(models: Sequence[tuple[Fraction, EmpiricalModel]]) -> EmpiricalModel:
    """Context-wise convex combination of models on one scenario."""
    if not models:
        raise InputError("mix needs at least one model")
    s = models[0][1].scenario
    total = Fraction(0)
    for w, m in models:
        if m.scenario != s:
            raise InputError("mix: models live on different scenarios")
        if w < 0:
            raise InputError(f"mix: negative weight {w}")
        total += w
    if total != 1:
        raise InputError(f"mix: weights sum to {total}, not 1")
    tables = {}
    for ctx in s.cover:
        acc: dict[tuple[str, ...], Fraction] = {}
        for w, m in models:
            for t, p in m.tables[ctx].weights.items():
                acc[t] = acc.get(t, Fraction(0)) + w * p
        tables[ctx] = Distribution(m.tables[ctx].measurements, acc)
    return EmpiricalModel(s, tables)


def relabel_outcomes(m: EmpiricalModel, mid: str, mapping: Mapping[str, str]) -> EmpiricalModel:
    """Permute the outcome labels of one measurement consistently in every table."""
    old = m.scenario.outcomes(mid)
    if set(mapping) != set(old) or set(mapping.values()) != set(old):
        raise InputError(f"relabeling of {mid!r} must permute {list(old)}")
    tables = {}
    for ctx, d in m.tables.items():
        if mid not in ctx:
            tables[ctx] = d
            continue
        i = ctx.index(mid)
        moved = {t[:i] + (mapping[t[i]],) + t[i + 1:]: w for t, w in d.weights.items()}
        tables[ctx] = Distribution(d.measurements, moved)
    return EmpiricalModel(m.scenario, tables)
