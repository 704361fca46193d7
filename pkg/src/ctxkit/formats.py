"""Canonical JSON documents for scenarios, models, bundles and verdicts.

Rationals are always strings (``"p/q"`` or an integer), keys are sorted
and tables list only their nonzero entries.  Parsing accepts sparse
tables and context member lists in any order.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Mapping

from .bundle import Gauge, LocalSpace, SampleBundle, Section, TwistReport, incidence_key
from .decide import (
    ExtensionResult,
    ExtensionWitness,
    HiddenVariableModel,
    InfeasibilityWitness,
    Verdict,
)
from .errors import InputError
from .model import (
    DeterministicAssignment,
    DisturbanceViolation,
    Distribution,
    EmpiricalModel,
    format_rational,
    make_model,
    parse_rational,
)
from .scenario import Measurement, Scenario, context_key
from .subscenario import SequenceReport


def dumps(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def load_json(path: str | Path) -> Any:
    path = Path(path)
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise InputError(f"no such file: {path}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON ({e})") from None


def _require(doc: Mapping, key: str, where: str) -> Any:
    if not isinstance(doc, Mapping):
        raise InputError(f"{where}: expected a JSON object")
    if key not in doc:
        raise InputError(f"{where}: missing key {key!r}")
    return doc[key]


def _split(key: str) -> tuple[str, ...]:
    return tuple(key.split(","))


# -- scenario ------------------------------------------------------------------


def scenario_to_doc(s: Scenario) -> dict:
    return {
        "measurements": [{"id": m.id, "outcomes": list(m.outcomes)} for m in s.measurements],
        "contexts": [list(c) for c in s.cover],
    }


def scenario_from_doc(doc: Mapping) -> Scenario:
    raw_ms = _require(doc, "measurements", "scenario")
    raw_cs = _require(doc, "contexts", "scenario")
    if not isinstance(raw_ms, list) or not isinstance(raw_cs, list):
        raise InputError("scenario: 'measurements' and 'contexts' must be arrays")
    ms = []
    for i, m in enumerate(raw_ms):
        mid = _require(m, "id", f"scenario.measurements[{i}]")
        outs = _require(m, "outcomes", f"scenario.measurements[{i}]")
        if not isinstance(outs, list):
            raise InputError(f"scenario.measurements[{i}].outcomes must be an array")
        ms.append(Measurement(mid, tuple(outs)))
    for i, c in enumerate(raw_cs):
        if not isinstance(c, list):
            raise InputError(f"scenario.contexts[{i}] must be an array of ids")
    return Scenario(tuple(ms), tuple(tuple(c) for c in raw_cs))


def _scenario_ref(ref: Any, base_dir: Path | None) -> Scenario:
    if isinstance(ref, str):
        path = Path(ref)
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        return scenario_from_doc(load_json(path))
    return scenario_from_doc(ref)


# -- model ---------------------------------------------------------------------


def table_to_doc(d: Distribution) -> dict:
    return {",".join(t): format_rational(w) for t, w in d.weights.items() if w}


def model_to_doc(m: EmpiricalModel) -> dict:
    return {
        "scenario": scenario_to_doc(m.scenario),
        "tables": {context_key(ctx): table_to_doc(d) for ctx, d in m.tables.items()},
    }


def model_from_doc(doc: Mapping, base_dir: Path | None = None) -> EmpiricalModel:
    s = _scenario_ref(_require(doc, "scenario", "model"), base_dir)
    raw = _require(doc, "tables", "model")
    if not isinstance(raw, Mapping):
        raise InputError("model: 'tables' must be an object")
    tables = {}
    for key, table in raw.items():
        ctx = _split(key)
        canonical = tuple(sorted(ctx))
        if not isinstance(table, Mapping):
            raise InputError(f"model.tables[{key!r}] must be an object")
        entries = {}
        for tkey, w in table.items():
            t = _split(tkey)
            if len(t) != len(ctx):
                raise InputError(f"model.tables[{key!r}]: key {tkey!r} has wrong arity")
            reordered = tuple(t[ctx.index(mid)] for mid in canonical)
            entries[reordered] = parse_rational(w)
        tables[canonical] = entries
    for ctx in s.cover:
        if ctx not in tables:
            raise InputError(f"model.tables: missing table for context {context_key(ctx)!r}")
    return make_model(s, tables)


def load_model(path: str | Path) -> EmpiricalModel:
    path = Path(path)
    return model_from_doc(load_json(path), path.parent)


def load_scenario(path: str | Path) -> Scenario:
    return scenario_from_doc(load_json(path))


# -- bundle --------------------------------------------------------------------


def bundle_to_doc(b: SampleBundle) -> dict:
    return {
        "scenario": scenario_to_doc(b.scenario),
        "local_spaces": {
            mid: {"values": list(sp.values), "reference": dict(sp.reference)}
            for mid, sp in b.local_spaces.items()
        },
        "labelings": {incidence_key(inc): dict(lab) for inc, lab in b.labelings.items()},
    }


def bundle_from_doc(doc: Mapping, base_dir: Path | None = None) -> SampleBundle:
    s = _scenario_ref(_require(doc, "scenario", "bundle"), base_dir)
    raw_spaces = _require(doc, "local_spaces", "bundle")
    raw_labs = _require(doc, "labelings", "bundle")
    spaces = {}
    for mid, sp in raw_spaces.items():
        values = _require(sp, "values", f"bundle.local_spaces[{mid!r}]")
        ref = _require(sp, "reference", f"bundle.local_spaces[{mid!r}]")
        spaces[mid] = LocalSpace(tuple(values), dict(ref))
    labelings = {}
    for key, lab in raw_labs.items():
        if key.count("|") != 1:
            raise InputError(f"bundle.labelings key {key!r} must look like 'a,b|b'")
        ctx_part, mid = key.split("|")
        labelings[(tuple(sorted(_split(ctx_part))), mid)] = dict(lab)
    return SampleBundle(s, spaces, labelings)


def load_bundle(path: str | Path) -> SampleBundle:
    path = Path(path)
    return bundle_from_doc(load_json(path), path.parent)


def base_from_doc(doc: Mapping, b: SampleBundle) -> Distribution:
    raw = _require(doc, "weights", "base")
    weights = {_split(k): parse_rational(v) for k, v in raw.items()}
    return Distribution(b.local_measurements(), weights)


def base_to_doc(d: Distribution) -> dict:
    return {"weights": table_to_doc(d)}


def twist_report_to_doc(r: TwistReport) -> dict:
    return {
        "twisted_incidences": [incidence_key(inc) for inc in r.twisted_incidences],
        "cycles": [
            {"edges": [[context_key(a), context_key(b), m] for a, b, m in c.edges], "parity": c.parity}
            for c in r.cycles
        ],
        "trivial_holonomy": r.trivial_holonomy,
    }


def gauge_to_doc(g: Gauge) -> dict:
    return {
        "permutations": {mid: dict(p) for mid, p in g.permutations.items()},
        "context_flips": sorted(context_key(c) for c in g.context_flips),
    }


def gauge_from_doc(doc: Mapping) -> Gauge:
    perms = {mid: dict(p) for mid, p in doc.get("permutations", {}).items()}
    flips = frozenset(tuple(sorted(_split(k))) for k in doc.get("context_flips", []))
    return Gauge(perms, flips)


def sections_to_doc(sections: list[Section]) -> dict:
    return {
        "count": len(sections),
        "sections": [
            {"local_values": dict(sec.local_values), "assignment": dict(sec.assignment.values)}
            for sec in sections
        ],
    }


# -- verdicts --------------------------------------------------------------------


def _row_key(ctx, t) -> str:
    return f"{context_key(ctx)}|{','.join(t)}"


def _parse_row_key(key: str) -> tuple[tuple[str, ...], tuple[str, ...]]:
    if key.count("|") != 1:
        raise InputError(f"coefficient key {key!r} must look like 'a,b|up,0'")
    c, t = key.split("|")
    return _split(c), _split(t)


def violation_to_doc(v: DisturbanceViolation) -> dict:
    return {
        "contexts": [context_key(v.first), context_key(v.second)],
        "overlap": list(v.overlap),
        "marginals": [table_to_doc(v.first_marginal), table_to_doc(v.second_marginal)],
        "differing_measurements": v.differing_measurements(),
    }


def verdict_to_doc(v: Verdict) -> dict:
    doc: dict = {"status": v.status}
    cert = v.certificate
    if isinstance(cert, HiddenVariableModel):
        doc["hv_model"] = {
            "assignments": [dict(a.values) for a in cert.assignments],
            "weights": [format_rational(w) for w in cert.weights],
        }
    elif isinstance(cert, InfeasibilityWitness):
        doc["witness"] = {
            "coefficients": {_row_key(c, t): format_rational(x) for (c, t), x in cert.coefficients.items()},
            "bound": format_rational(cert.bound),
        }
    if v.violations:
        doc["violations"] = [violation_to_doc(x) for x in v.violations]
    return doc


def verdict_from_doc(doc: Mapping) -> Verdict:
    status = _require(doc, "status", "verdict")
    if "hv_model" in doc:
        hv = doc["hv_model"]
        cert = HiddenVariableModel(
            tuple(DeterministicAssignment(dict(a)) for a in hv["assignments"]),
            tuple(parse_rational(w) for w in hv["weights"]),
        )
        return Verdict(status, cert)
    if "witness" in doc:
        w = doc["witness"]
        coeffs = {_parse_row_key(k): parse_rational(x) for k, x in w["coefficients"].items()}
        return Verdict(status, InfeasibilityWitness(coeffs, parse_rational(w["bound"])))
    return Verdict(status)


def _label_key(label: tuple) -> str:
    kind = label[0]
    if kind == "norm":
        return f"norm|{context_key(label[1])}"
    if kind == "nd":
        return f"nd|{context_key(label[1])}|{context_key(label[2])}|{','.join(label[3])}"
    return f"agree|{context_key(label[1])}|{','.join(label[2])}"


def _parse_label_key(key: str) -> tuple:
    parts = key.split("|")
    if parts[0] == "norm" and len(parts) == 2:
        return ("norm", _split(parts[1]))
    if parts[0] == "nd" and len(parts) == 4:
        return ("nd", _split(parts[1]), _split(parts[2]), _split(parts[3]))
    if parts[0] == "agree" and len(parts) == 3:
        return ("agree", _split(parts[1]), _split(parts[2]))
    raise InputError(f"bad multiplier key {key!r}")


def extension_to_doc(r: ExtensionResult) -> dict:
    doc: dict = {"status": r.status}
    if r.extension is not None:
        doc["extension"] = model_to_doc(r.extension)
    if r.witness is not None:
        w = r.witness
        doc["witness"] = {
            "coefficients": {_row_key(c, t): format_rational(x) for (c, t), x in w.coefficients.items()},
            "bound": format_rational(w.bound),
            "multipliers": {_label_key(k): format_rational(x) for k, x in w.multipliers.items()},
        }
    if r.violations:
        doc["violations"] = [violation_to_doc(x) for x in r.violations]
    return doc


def extension_from_doc(doc: Mapping) -> ExtensionResult:
    status = _require(doc, "status", "extension result")
    ext = model_from_doc(doc["extension"]) if "extension" in doc else None
    witness = None
    if "witness" in doc:
        w = doc["witness"]
        witness = ExtensionWitness(
            {_parse_label_key(k): parse_rational(x) for k, x in w["multipliers"].items()},
            {_parse_row_key(k): parse_rational(x) for k, x in w["coefficients"].items()},
            parse_rational(w["bound"]),
        )
    return ExtensionResult(status, extension=ext, witness=witness)


def sequence_to_doc(r: SequenceReport) -> dict:
    return {
        "steps": [{"index": k, **extension_to_doc(res)} for k, res in enumerate(r.results)],
        "statuses": list(r.statuses),
        "failure_step": r.failure_step,
    }

