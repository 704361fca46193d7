"""The subscenario order, induced and context-restricted subscenarios, chains."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import InputError
from .scenario import Context, Scenario, context_key, validate_scenario


@dataclass(frozen=True)
class ScenarioOrder:
    """Evidence that ``sub`` precedes ``sup``: a containing super-context per sub-context."""

    sub: Scenario
    sup: Scenario
    witness: Mapping[Context, Context]

    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class Refusal:
    reason: str

    def __bool__(self) -> bool:
        return False


def is_subscenario(sub: Scenario, sup: Scenario) -> ScenarioOrder | Refusal:
    """Check ``sub ⪯ sup``; the witness is the first containing context in canonical order."""
    for m in sub.measurements:
        if m.id not in sup.ids:
            return Refusal(f"measurement {m.id} is not in the larger scenario")
        if sup.outcomes(m.id) != m.outcomes:
            return Refusal(f"measurement {m.id} has different outcomes in the larger scenario")
    witness = {}
    for ctx in sub.cover:
        found = next((D for D in sup.cover if set(ctx) <= set(D)), None)
        if found is None:
            return Refusal(f"context {context_key(ctx)} lies in no context of the larger scenario")
        witness[ctx] = found
    return ScenarioOrder(sub, sup, witness)


def _antichain(contexts: Iterable[Context]) -> tuple[list[Context], list[Context]]:
    unique = sorted(set(contexts))
    kept, pruned = [], []
    for c in unique:
        if any(set(c) < set(d) for d in unique):
            pruned.append(c)
        else:
            kept.append(c)
    return kept, pruned


def induced_restrictions(sup: Scenario, keep: Iterable[str]) -> tuple[list[Context], list[Context]]:
    """Restrictions of every context to ``keep``: ``(antichain cover, pruned contexts)``."""
    keep_set = set(keep)
    if not keep_set:
        raise InputError("induced subscenario needs a nonempty measurement set")
    unknown = keep_set - set(sup.ids)
    if unknown:
        raise InputError(f"unknown measurements {sorted(unknown)}")
    restricted = [tuple(x for x in D if x in keep_set) for D in sup.cover]
    return _antichain(c for c in restricted if c)


def induced_subscenario(sup: Scenario, keep: Iterable[str]) -> Scenario:
    keep = set(keep)
    cover, _ = induced_restrictions(sup, keep)
    ms = tuple(m for m in sup.measurements if m.id in keep)
    return Scenario(ms, tuple(cover))


def restrict_contexts(s: Scenario, cover: Iterable[Sequence[str]]) -> Scenario:
    """Same measurements as ``s`` with a new cover, which must still cover them."""
    out = Scenario(s.measurements, tuple(tuple(c) for c in cover))
    violations = validate_scenario(out)
    if violations:
        raise InputError("restricted cover is invalid: " + "; ".join(violations))
    return out


@dataclass(frozen=True)
class SequenceReport:
    statuses: tuple[str, ...]
    results: tuple  # ExtensionResult per chain element
    failure_step: int | None


def check_sequence(model, chain: Sequence[Scenario], limit: int | None = None) -> SequenceReport:
    """Run an extension check against every scenario of a strictly increasing chain.

    ``failure_step`` is the index of the first scenario the model does not
    extend to, or ``None`` when it extends to all of them.
    """
    from .decide import DEFAULT_LIMIT, check_extends

    if not chain:
        raise InputError("empty chain")
    if not is_subscenario(model.scenario, chain[0]):
        raise InputError("the model's scenario is not a subscenario of the first chain element")
    for k in range(len(chain) - 1):
        if chain[k] == chain[k + 1]:
            raise InputError(f"chain is not strictly increasing at step {k}")
        order = is_subscenario(chain[k], chain[k + 1])
        if not order:
            raise InputError(f"chain breaks at step {k}: {order.reason}")
    limit = DEFAULT_LIMIT if limit is None else limit
    results = tuple(check_extends(model, s, limit) for s in chain)
    statuses = tuple(r.status for r in results)
    failure = next((k for k, r in enumerate(results) if not r.feasible), None)
    return SequenceReport(statuses, results, failure)
