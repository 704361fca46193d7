"""Sample fibre bundles over finite scenarios.

A bundle gives every measurement a finite local value set with a
reference labeling, and every (context, member) incidence its own
labeling bijection from local values to outcome labels.  A twist is an
incidence whose labeling differs from the reference.  Transition maps
between contexts are derived from the labelings and never stored.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .decide import DEFAULT_LIMIT
from .errors import InputError, TooLargeError, UnsupportedError
from .model import DeterministicAssignment, Distribution, EmpiricalModel
from .scenario import Context, Measurement, Scenario, context_key, make_n_cycle, make_scenario
from .simplex import find_feasible

Incidence = tuple[Context, str]


def _is_bijection(mapping: Mapping[str, str], domain: Sequence[str], codomain: Sequence[str]) -> bool:
    return (
        set(mapping) == set(domain)
        and len(mapping) == len(domain)
        and sorted(mapping.values()) == sorted(codomain)
    )


@dataclass(frozen=True)
class LocalSpace:
    values: tuple[str, ...]
    reference: Mapping[str, str]


@dataclass(frozen=True)
class SampleBundle:
    scenario: Scenario
    local_spaces: Mapping[str, LocalSpace]
    labelings: Mapping[Incidence, Mapping[str, str]]

    def __post_init__(self) -> None:
        s = self.scenario
        if set(self.local_spaces) != set(s.ids):
            raise InputError("local spaces must be given for exactly the scenario's measurements")
        spaces = {}
        for mid in s.ids:
            sp = self.local_spaces[mid]
            values = tuple(sp.values)
            Measurement(mid, values)  # same label rules as outcomes
            if not _is_bijection(sp.reference, values, s.outcomes(mid)):
                raise InputError(f"reference labeling of {mid!r} is not a bijection onto its outcomes")
            spaces[mid] = LocalSpace(values, dict(sp.reference))
        labelings = {}
        for ctx in s.cover:
            for mid in ctx:
                key = (ctx, mid)
                if key not in self.labelings:
                    raise InputError(f"missing labeling for {incidence_key(key)}")
                lab = self.labelings[key]
                if not _is_bijection(lab, spaces[mid].values, s.outcomes(mid)):
                    raise InputError(f"labeling {incidence_key(key)} is not a bijection onto the outcomes")
                labelings[key] = dict(lab)
        extra = set(self.labelings) - set(labelings)
        if extra:
            raise InputError(f"labelings for unknown incidences: {sorted(map(incidence_key, extra))}")
        object.__setattr__(self, "local_spaces", spaces)
        object.__setattr__(self, "labelings", labelings)

    def incidences(self) -> list[Incidence]:
        return [(ctx, mid) for ctx in self.scenario.cover for mid in ctx]

    def local_measurements(self) -> tuple[Measurement, ...]:
        """The local value sets dressed as measurements, for base distributions."""
        return tuple(Measurement(mid, self.local_spaces[mid].values) for mid in self.scenario.ids)

    def is_twisted(self, ctx: Context, mid: str) -> bool:
        return self.labelings[(ctx, mid)] != self.local_spaces[mid].reference


def incidence_key(inc: Incidence) -> str:
    return f"{context_key(inc[0])}|{inc[1]}"


def product_bundle(s: Scenario) -> SampleBundle:
    """Local values equal to outcome labels and every labeling the identity."""
    spaces = {mid: LocalSpace(s.outcomes(mid), {o: o for o in s.outcomes(mid)}) for mid in s.ids}
    labelings = {(ctx, mid): dict(spaces[mid].reference) for ctx in s.cover for mid in ctx}
    return SampleBundle(s, spaces, labelings)


def _swap(values: Sequence[str]) -> dict[str, str]:
    a, b = values
    return {a: b, b: a}


def _with_twists(s: Scenario, twisted: set[Incidence]) -> SampleBundle:
    base = product_bundle(s)
    labelings = dict(base.labelings)
    for ctx, mid in twisted:
        values = base.local_spaces[mid].values
        ref = base.local_spaces[mid].reference
        labelings[(ctx, mid)] = {v: ref[w] for v, w in _swap(values).items()}
    return SampleBundle(s, base.local_spaces, labelings)


def hollow_triangle_scenario() -> Scenario:
    return make_scenario(
        {"a": ("up", "down"), "b": ("0", "1"), "c": ("g", "r")},
        [("a", "b"), ("b", "c"), ("c", "a")],
    )


def hollow_triangle_bundle() -> SampleBundle:
    """Three binary measurements on a triangle; in the contexts ab, bc, ca
    (read in that order) the first member keeps its natural labeling and the
    second is inverted."""
    s = hollow_triangle_scenario()
    return _with_twists(s, {(("a", "b"), "b"), (("b", "c"), "c"), (("a", "c"), "a")})


def moebius_bundle(n: int, flipped: Sequence[int] = (), outcomes: Sequence[str] = ("0", "1")) -> SampleBundle:
    """Binary n-cycle where each flipped M_i is swapped in the context {M_i, M_i+1}."""
    if len(outcomes) != 2:
        raise InputError("a Möbius bundle needs binary measurements")
    s = make_n_cycle(n, outcomes)
    twisted = set()
    for i in flipped:
        if not 0 <= i < n:
            raise InputError(f"flip index {i} out of range for n={n}")
        ctx = tuple(sorted((f"M_{i}", f"M_{(i + 1) % n}")))
        twisted.add((ctx, f"M_{i}"))
    return _with_twists(s, twisted)


# -- gauge and holonomy ------------------------------------------------------


@dataclass(frozen=True)
class Gauge:
    """Relabelings of local values.

    ``permutations[M]`` is applied to M's local values in every context
    at once.  ``context_flips`` lists contexts whose local coordinates are
    all swapped together (a change of local trivialisation over that
    context); it is defined for dichotomic bundles only.
    """

    permutations: Mapping[str, Mapping[str, str]] = field(default_factory=dict)
    context_flips: frozenset[Context] = frozenset()

    def is_identity(self) -> bool:
        return not self.context_flips and all(all(k == v for k, v in p.items()) for p in self.permutations.values())


def apply_gauge(b: SampleBundle, g: Gauge) -> SampleBundle:
    """Pre-compose each labeling with the context flip, then the measurement permutation."""
    for mid, perm in g.permutations.items():
        if mid not in b.local_spaces:
            raise InputError(f"gauge names unknown measurement {mid!r}")
        values = b.local_spaces[mid].values
        if not _is_bijection(perm, values, values):
            raise InputError(f"gauge on {mid!r} is not a permutation of its local values")
    for ctx in g.context_flips:
        if ctx not in b.scenario.cover:
            raise InputError(f"gauge flips unknown context {context_key(ctx)}")
        if any(len(b.local_spaces[mid].values) != 2 for mid in ctx):
            raise UnsupportedError("context flips are only defined for dichotomic measurements")
    labelings = {}
    for (ctx, mid), lab in b.labelings.items():
        values = b.local_spaces[mid].values
        perm = g.permutations.get(mid, {v: v for v in values})
        flip = _swap(values) if ctx in g.context_flips else {v: v for v in values}
        labelings[(ctx, mid)] = {v: lab[perm[flip[v]]] for v in values}
    return SampleBundle(b.scenario, b.local_spaces, labelings)


@dataclass(frozen=True)
class CycleParity:
    edges: tuple[tuple[Context, Context, str], ...]
    parity: int


@dataclass(frozen=True)
class TwistReport:
    twisted_incidences: tuple[Incidence, ...]
    cycles: tuple[CycleParity, ...]

    @property
    def trivial_holonomy(self) -> bool:
        return all(c.parity == 0 for c in self.cycles)


@dataclass
class _OverlapTree:
    edges: list[tuple[int, int, str]]
    parent: dict[int, tuple[int, str] | None]
    order: list[int]
    non_tree: list[tuple[int, int, str]]


def _overlap_tree(s: Scenario) -> _OverlapTree:
    """Deterministic BFS spanning forest of the context-overlap multigraph."""
    cover = s.cover
    edges = []
    for i, j in itertools.combinations(range(len(cover)), 2):
        for mid in cover[i]:
            if mid in cover[j]:
                edges.append((i, j, mid))
    incident: dict[int, list[tuple[int, int, str]]] = {i: [] for i in range(len(cover))}
    for e in edges:
        incident[e[0]].append(e)
        incident[e[1]].append(e)
    parent: dict[int, tuple[int, str] | None] = {}
    order = []
    tree = set()
    for root in range(len(cover)):
        if root in parent:
            continue
        parent[root] = None
        queue = deque([root])
        while queue:
            u = queue.popleft()
            order.append(u)
            for e in incident[u]:
                v = e[1] if e[0] == u else e[0]
                if v not in parent:
                    parent[v] = (u, e[2])
                    tree.add(e)
                    queue.append(v)
    return _OverlapTree(edges, parent, order, [e for e in edges if e not in tree])


def _require_dichotomic(b: SampleBundle) -> None:
    bad = [mid for mid, sp in b.local_spaces.items() if len(sp.values) != 2]
    if bad:
        raise UnsupportedError(f"holonomy parity needs dichotomic measurements; not binary: {sorted(bad)}")


def _tree_path(tree: _OverlapTree, u: int, v: int) -> list[tuple[int, int, str]]:
    def up(x: int) -> list[int]:
        chain = [x]
        while tree.parent[chain[-1]] is not None:
            chain.append(tree.parent[chain[-1]][0])
        return chain

    au, av = up(u), up(v)
    common = set(au) & set(av)
    lca = next(x for x in au if x in common)
    path = []
    for start in (u, v):
        x = start
        while x != lca:
            p, mid = tree.parent[x]
            path.append((min(p, x), max(p, x), mid))
            x = p
    return path


def twist_report(b: SampleBundle) -> TwistReport:
    _require_dichotomic(b)
    cover = b.scenario.cover
    twisted = tuple(inc for inc in b.incidences() if b.is_twisted(*inc))
    bit = {inc: int(b.is_twisted(*inc)) for inc in b.incidences()}
    tree = _overlap_tree(b.scenario)
    cycles = []
    for i, j, mid in tree.non_tree:
        edges = [(i, j, mid)] + _tree_path(tree, i, j)
        parity = 0
        for x, y, m in edges:
            parity ^= bit[(cover[x], m)] ^ bit[(cover[y], m)]
        cycles.append(CycleParity(tuple((cover[x], cover[y], m) for x, y, m in edges), parity))
    return TwistReport(twisted, tuple(cycles))


def is_trivializable(b: SampleBundle) -> tuple[bool, Gauge | None]:
    """Even parity on every basis cycle; if so, a gauge taking every labeling to the reference."""
    _require_dichotomic(b)
    cover = b.scenario.cover
    bit = {inc: int(b.is_twisted(*inc)) for inc in b.incidences()}
    tree = _overlap_tree(b.scenario)
    flip = {}
    for u in tree.order:
        link = tree.parent[u]
        if link is None:
            flip[u] = 0
        else:
            p, mid = link
            flip[u] = flip[p] ^ bit[(cover[p], mid)] ^ bit[(cover[u], mid)]
    for i, j, mid in tree.non_tree:
        if bit[(cover[i], mid)] ^ flip[i] != bit[(cover[j], mid)] ^ flip[j]:
            return False, None
    perms = {}
    for mid in b.scenario.ids:
        k = next(k for k, ctx in enumerate(cover) if mid in ctx)
        if bit[(cover[k], mid)] ^ flip[k]:
            perms[mid] = _swap(b.local_spaces[mid].values)
    flips = frozenset(cover[k] for k, f in flip.items() if f)
    return True, Gauge(perms, flips)


# -- sections and pushforward --------------------------------------------------


@dataclass(frozen=True)
class Section:
    local_values: Mapping[str, str]
    assignment: DeterministicAssignment


def _check_size(b: SampleBundle, limit: int) -> int:
    total = 1
    for sp in b.local_spaces.values():
        total *= len(sp.values)
    if total > limit:
        raise TooLargeError(total, limit, "local value tuples")
    return total


def enumerate_sections(b: SampleBundle, limit: int = DEFAULT_LIMIT) -> list[Section]:
    """Global local-value choices whose labels agree in every context of each measurement."""
    _check_size(b, limit)
    s = b.scenario
    agreeing = []
    for mid in s.ids:
        labs = [b.labelings[(ctx, mid)] for ctx in s.contexts_containing(mid)]
        vals = [v for v in b.local_spaces[mid].values if len({lab[v] for lab in labs}) == 1]
        agreeing.append(vals)
    out = []
    for combo in itertools.product(*agreeing):
        local = dict(zip(s.ids, combo))
        labels = {}
        for mid, v in local.items():
            ctx = s.contexts_containing(mid)
            labels[mid] = b.labelings[(ctx[0], mid)][v] if ctx else b.local_spaces[mid].reference[v]
        out.append(Section(local, DeterministicAssignment(labels)))
    return out


def _labels_in(b: SampleBundle, ctx: Context, omega: Mapping[str, str]) -> tuple[str, ...]:
    return tuple(b.labelings[(ctx, mid)][omega[mid]] for mid in ctx)


def pushforward(b: SampleBundle, base: Distribution) -> EmpiricalModel:
    """Transport a distribution over global local-value tuples through each context's labelings."""
    s = b.scenario
    if base.measurements != b.local_measurements():
        raise InputError(f"base distribution must range over local values of {list(s.ids)} in that order")
    tables = {}
    for ctx in s.cover:
        acc: dict[tuple[str, ...], Fraction] = {}
        for omega, w in base.weights.items():
            if not w:
                continue
            t = _labels_in(b, ctx, dict(zip(s.ids, omega)))
            acc[t] = acc.get(t, Fraction(0)) + w
        tables[ctx] = Distribution(tuple(s.measurement(mid) for mid in ctx), acc)
    return EmpiricalModel(s, tables)


def base_distribution(b: SampleBundle, weights: Mapping[Sequence[str], object]) -> Distribution:
    return Distribution(b.local_measurements(), {tuple(k): v for k, v in weights.items()})


@dataclass(frozen=True)
class BaseSearchResult:
    feasible: bool
    base: Distribution | None = None
    multipliers: tuple[Fraction, ...] | None = None


def nondisturbing_base_polytope(b: SampleBundle, limit: int = DEFAULT_LIMIT) -> BaseSearchResult:
    """Find a base distribution whose pushforward satisfies the marginal condition."""
    _check_size(b, limit)
    s = b.scenario
    omegas = list(itertools.product(*(b.local_spaces[mid].values for mid in s.ids)))
    labelled = {ctx: [_labels_in(b, ctx, dict(zip(s.ids, om))) for om in omegas] for ctx in s.cover}
    n = len(omegas)
    A = [[Fraction(1)] * n]
    rhs = [Fraction(1)]
    for c1, c2 in itertools.combinations(s.cover, 2):
        overlap = tuple(x for x in c1 if x in c2)
        if not overlap:
            continue
        p1 = [c1.index(x) for x in overlap]
        p2 = [c2.index(x) for x in overlap]
        for t in s.joint_outcomes(overlap):
            row = []
            for j in range(n):
                v = int(tuple(labelled[c1][j][i] for i in p1) == t)
                v -= int(tuple(labelled[c2][j][i] for i in p2) == t)
                row.append(Fraction(v))
            A.append(row)
            rhs.append(Fraction(0))
    res = find_feasible(A, rhs)
    if not res.feasible:
        return BaseSearchResult(False, multipliers=tuple(res.y))
    weights = {om: w for om, w in zip(omegas, res.x) if w}
    return BaseSearchResult(True, base=Distribution(b.local_measurements(), weights))
