"""Measurements, contexts, compatibility covers and the scenario complex."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import InputError

# Reserved because they delimit keys in every JSON format.
_RESERVED = (",", "|")

Context = tuple[str, ...]


def _check_label(label: str, what: str) -> None:
    if not isinstance(label, str) or not label:
        raise InputError(f"{what} must be a nonempty string, got {label!r}")
    for ch in _RESERVED:
        if ch in label:
            raise InputError(f"{what} {label!r} contains reserved character {ch!r}")


@dataclass(frozen=True)
class Measurement:
    id: str
    outcomes: tuple[str, ...]

    def __post_init__(self) -> None:
        _check_label(self.id, "measurement id")
        outcomes = tuple(self.outcomes)
        if not outcomes:
            raise InputError(f"measurement {self.id!r} has no outcomes")
        for o in outcomes:
            _check_label(o, f"outcome of {self.id!r}")
        if len(set(outcomes)) != len(outcomes):
            raise InputError(f"measurement {self.id!r} has repeated outcome labels")
        object.__setattr__(self, "outcomes", outcomes)


def context_key(context: Sequence[str]) -> str:
    return ",".join(context)


@dataclass(frozen=True)
class Scenario:
    """A finite measurement set together with a cover of contexts.

    Measurements are kept sorted by id and each context is stored as a
    sorted tuple of ids; the cover itself is sorted and deduplicated.
    Any cover is accepted here; maximality is checked by
    :func:`validate_scenario` in strict mode.
    """

    measurements: tuple[Measurement, ...]
    cover: tuple[Context, ...]
    _by_id: dict[str, Measurement] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        ms = tuple(sorted(self.measurements, key=lambda m: m.id))
        by_id: dict[str, Measurement] = {}
        for m in ms:
            if m.id in by_id:
                raise InputError(f"duplicate measurement id {m.id!r}")
            by_id[m.id] = m
        cover = set()
        for ctx in self.cover:
            members = tuple(ctx)
            if not members:
                raise InputError("empty context")
            if len(set(members)) != len(members):
                raise InputError(f"context {list(members)} repeats a measurement")
            for mid in members:
                if mid not in by_id:
                    raise InputError(f"context {list(members)} names unknown measurement {mid!r}")
            cover.add(tuple(sorted(members)))
        object.__setattr__(self, "measurements", ms)
        object.__setattr__(self, "cover", tuple(sorted(cover)))
        object.__setattr__(self, "_by_id", by_id)

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(m.id for m in self.measurements)

    def measurement(self, mid: str) -> Measurement:
        try:
            return self._by_id[mid]
        except KeyError:
            raise InputError(f"unknown measurement {mid!r}") from None

    def outcomes(self, mid: str) -> tuple[str, ...]:
        return self.measurement(mid).outcomes

    def joint_outcomes(self, context: Sequence[str]) -> list[tuple[str, ...]]:
        """Cartesian product of the members' outcome sets, in canonical order."""
        return list(itertools.product(*(self.outcomes(mid) for mid in context)))

    def contexts_containing(self, mid: str) -> list[Context]:
        return [c for c in self.cover if mid in c]

    def num_assignments(self) -> int:
        n = 1
        for m in self.measurements:
            n *= len(m.outcomes)
        return n


def make_scenario(measurements: dict[str, Sequence[str]], contexts: Iterable[Iterable[str]]) -> Scenario:
    """Convenience constructor from ``{id: outcomes}`` and member lists."""
    ms = tuple(Measurement(mid, tuple(outs)) for mid, outs in measurements.items())
    return Scenario(ms, tuple(tuple(c) for c in contexts))


def validate_scenario(s: Scenario, strict: bool = False) -> list[str]:
    """Return structural violations; an empty list means the scenario is valid."""
    violations = []
    covered = {mid for ctx in s.cover for mid in ctx}
    for mid in s.ids:
        if mid not in covered:
            violations.append(f"uncovered: {mid}")
    if strict:
        for small, big in itertools.permutations(s.cover, 2):
            if set(small) < set(big):
                violations.append(f"non-maximal: {context_key(small)} ⊆ {context_key(big)}")
    return violations


def _binary_ids(n: int) -> list[str]:
    return [f"M_{i}" for i in range(n)]


def make_n_cycle(n: int, outcomes: Sequence[str] = ("0", "1")) -> Scenario:
    """Measurements M_0..M_{n-1} with contexts {M_i, M_{i+1 mod n}}."""
    if n < 3:
        raise InputError(f"an n-cycle needs n >= 3, got {n}")
    return make_neighborhood_cover(n, 2, outcomes)


def make_neighborhood_cover(n: int, width: int, outcomes: Sequence[str] = ("0", "1")) -> Scenario:
    """Cyclic windows {M_i, ..., M_{i+width-1}} (indices mod n).

    ``width=2`` is the n-cycle; ``width=n`` collapses to the classical scenario.
    """
    if n < 1 or not 1 <= width <= n:
        raise InputError(f"need 1 <= width <= n, got n={n}, width={width}")
    if not outcomes:
        raise InputError("outcome list must be nonempty")
    ids = _binary_ids(n)
    ms = tuple(Measurement(mid, tuple(outcomes)) for mid in ids)
    cover = tuple(tuple(ids[(i + k) % n] for k in range(width)) for i in range(n))
    return Scenario(ms, cover)


def make_path(n: int, outcomes: Sequence[str] = ("0", "1")) -> Scenario:
    """Measurements M_0..M_{n-1} with contexts {M_i, M_{i+1}} for i < n-1."""
    if n < 2:
        raise InputError(f"a path needs n >= 2, got {n}")
    ids = _binary_ids(n)
    ms = tuple(Measurement(mid, tuple(outcomes)) for mid in ids)
    return Scenario(ms, tuple((ids[i], ids[i + 1]) for i in range(n - 1)))


def make_classical(s: Scenario) -> Scenario:
    """Same measurements, a single context containing all of them."""
    return Scenario(s.measurements, (s.ids,))


@dataclass(frozen=True)
class ScenarioComplex:
    """Down-closure of the cover truncated at dimension 2."""

    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]
    triangles: tuple[tuple[str, str, str], ...]


def scenario_complex(s: Scenario) -> ScenarioComplex:
    edges = set()
    triangles = set()
    for ctx in s.cover:
        edges.update(itertools.combinations(ctx, 2))
        triangles.update(itertools.combinations(ctx, 3))
    return ScenarioComplex(s.ids, tuple(sorted(edges)), tuple(sorted(triangles)))


def gf2_rank(rows: Iterable[int]) -> int:
    """Rank over GF(2) of row vectors packed into integers."""
    basis: dict[int, int] = {}
    for row in rows:
        while row:
            top = row.bit_length() - 1
            if top not in basis:
                basis[top] = row
                break
            row ^= basis[top]
    return len(basis)


def betti_numbers(s: Scenario) -> tuple[int, int]:
    """(b0, b1) of the scenario complex over GF(2)."""
    cx = scenario_complex(s)
    vindex = {v: i for i, v in enumerate(cx.vertices)}
    eindex = {e: i for i, e in enumerate(cx.edges)}
    d1 = [(1 << vindex[a]) | (1 << vindex[b]) for a, b in cx.edges]
    d2 = [
        (1 << eindex[(a, b)]) | (1 << eindex[(a, c)]) | (1 << eindex[(b, c)])
        for a, b, c in cx.triangles
    ]
    r1 = gf2_rank(d1)
    r2 = gf2_rank(d2)
    return len(cx.vertices) - r1, len(cx.edges) - r1 - r2


def is_acyclic(s: Scenario) -> bool:
    return betti_numbers(s)[1] == 0
