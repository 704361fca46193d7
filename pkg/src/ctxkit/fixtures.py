"""Built-in scenarios, models and bundles used by the CLI ``gen`` verb and tests."""

from __future__ import annotations

from typing import Sequence

from .bundle import hollow_triangle_bundle, hollow_triangle_scenario, moebius_bundle
from .errors import InputError
from .model import EmpiricalModel, make_model
from .scenario import make_classical, make_n_cycle, make_neighborhood_cover, make_path

HALF = "1/2"


def sparable_model() -> EmpiricalModel:
    """Perfect anticorrelation along every edge of the hollow triangle."""
    s = hollow_triangle_scenario()
    return make_model(
        s,
        {
            ("a", "b"): {("up", "1"): HALF, ("down", "0"): HALF},
            ("b", "c"): {("0", "r"): HALF, ("1", "g"): HALF},
            ("a", "c"): {("down", "g"): HALF, ("up", "r"): HALF},
        },
    )


def odd_cycle_model(n: int = 5) -> EmpiricalModel:
    """Binary n-cycle: edges {M_i, M_i+1} perfectly correlated except {M_0, M_n-1}."""
    s = make_n_cycle(n)
    anti = ("M_0", f"M_{n - 1}")
    tables = {
        ctx: {("0", "1"): HALF, ("1", "0"): HALF} if ctx == anti else {("0", "0"): HALF, ("1", "1"): HALF}
        for ctx in s.cover
    }
    return make_model(s, tables)


FIXTURES = ("hollow-triangle", "sparable-model", "n-cycle", "moebius", "classical", "path")


def gen_fixture(name: str, n: int = 5, outcomes: Sequence[str] = ("0", "1"), flips: Sequence[int] = (), width: int = 2):
    """Return the object for a named fixture (scenario, model or bundle)."""
    if name == "hollow-triangle":
        return hollow_triangle_bundle()
    if name == "sparable-model":
        return sparable_model()
    if name == "n-cycle":
        if width == 2:
            return make_n_cycle(n, outcomes)
        return make_neighborhood_cover(n, width, outcomes)
    if name == "moebius":
        return moebius_bundle(n, flips, outcomes)
    if name == "classical":
        return make_classical(make_neighborhood_cover(n, 1, outcomes))
    if name == "path":
        return make_path(n, outcomes)
    raise InputError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURES)}")
