"""File formats: versioned JSON documents and CSV tables.

Maps, registries, scenario suites, and trajectory documents are JSON with
a ``format`` field pinned to ``fcm/1``.  Serialization is deterministic:
keys keep construction order and every float is rendered with up to 12
significant digits, so identical inputs produce byte-identical output.
Indicator series and tabular trajectory exports are plain CSV.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
import warnings
from dataclasses import dataclass
from typing import Any, Iterable, Mapping, Optional

import numpy as np

from .analysis import ClosurePair, InfluenceReport, StabilityReport, StabilizationPlan
from .dynamics import ImpulseSchedule, Trajectory, vector_from_named
from .knowledge import (
    IndicatorTemplate,
    KnowledgeBase,
    MunicipalityType,
    PopulationClass,
    SemanticNetwork,
    TypologyRegistry,
)
from .mapcore import (
    CognitiveMap,
    Factor,
    FactorKind,
    MapMetadata,
    WeightedEdge,
    build_map,
)
from .scenario import RankedScenario, Scenario, ScenarioResult, TargetSpec

FORMAT_VERSION = "fcm/1"


class DocumentError(ValueError):
    """Document text cannot be parsed or does not match the schema."""


class BoundsClipWarning(UserWarning):
    """An indicator value fell outside its declared bounds and was clipped."""


def round12(x: float) -> float:
    """Nearest double to x rendered at 12 significant digits."""
    return float(format(float(x), ".12g"))


def _round_tree(value: Any) -> Any:
    if isinstance(value, bool):
        return value
    if isinstance(value, float):
        return round12(value)
    if isinstance(value, (int, str)) or value is None:
        return value
    if isinstance(value, Mapping):
        return {k: _round_tree(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_round_tree(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_round_tree(v) for v in value.tolist()]
    if isinstance(value, (np.floating,)):
        return round12(float(value))
    if isinstance(value, (np.integer,)):
        return int(value)
    raise TypeError(f"cannot serialize {type(value).__name__}")


def dumps_document(doc: Mapping[str, Any]) -> bytes:
    """Deterministic JSON bytes: insertion key order, 12-significant-digit floats."""
    return (json.dumps(_round_tree(doc), indent=2, ensure_ascii=False) + "\n").encode()


def _loads(data: bytes | str) -> Any:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        return json.loads(data)
    except json.JSONDecodeError as e:
        raise DocumentError(f"parse error at line {e.lineno} column {e.colno}: {e.msg}") from e


def _expect(doc: Mapping[str, Any], field: str, types, where: str):
    if field not in doc:
        raise DocumentError(f"{where}: missing field {field!r}")
    value = doc[field]
    if not isinstance(value, types):
        raise DocumentError(f"{where}: field {field!r} has wrong type {type(value).__name__}")
    return value


def _check_version(doc: Any, where: str) -> Mapping[str, Any]:
    if not isinstance(doc, dict):
        raise DocumentError(f"{where}: document is not an object")
    version = doc.get("format")
    if version != FORMAT_VERSION:
        raise DocumentError(f"{where}: unsupported version {version!r}")
    return doc


# ----------------------------------------------------------------- maps

def map_document(m: CognitiveMap) -> dict:
    mt = m.metadata.municipality_type
    return {
        "format": FORMAT_VERSION,
        "kind": "map",
        "metadata": {
            "name": m.metadata.name,
            "version": m.metadata.version,
            "municipality_type": None
            if mt is None
            else {
                "climate": mt.climate,
                "population_class": mt.population_class,
                "specialization": mt.specialization,
            },
        },
        "factors": [
            {"id": f.id, "name": f.name, "kind": f.kind.value, "parent": f.parent}
            for f in m.factors
        ],
        "edges": [
            {"source": e.source, "target": e.target, "weight": e.weight}
            for e in m.edges
        ],
    }


def map_from_document(doc: Any) -> CognitiveMap:
    doc = _check_version(doc, "map document")
    meta_raw = doc.get("metadata") or {}
    if not isinstance(meta_raw, dict):
        raise DocumentError("map document: field 'metadata' has wrong type")
    mt_raw = meta_raw.get("municipality_type")
    mtype = None
    if mt_raw is not None:
        if not isinstance(mt_raw, dict):
            raise DocumentError("map document: field 'municipality_type' has wrong type")
        mtype = MunicipalityType(
            str(mt_raw.get("climate", "")),
            str(mt_raw.get("population_class", "")),
            str(mt_raw.get("specialization", "")),
        )
    metadata = MapMetadata(
        name=str(meta_raw.get("name", "")),
        version=str(meta_raw.get("version", "1")),
        municipality_type=mtype,
    )
    factors = []
    for i, raw in enumerate(_expect(doc, "factors", list, "map document")):
        if not isinstance(raw, dict):
            raise DocumentError(f"map document: factors[{i}] is not an object")
        fid = _expect(raw, "id", str, f"factors[{i}]")
        kind = raw.get("kind", "general")
        try:
            kind = FactorKind(kind)
        except ValueError:
            raise DocumentError(f"factors[{i}]: unknown kind {kind!r}") from None
        parent = raw.get("parent")
        if parent is not None and not isinstance(parent, str):
            raise DocumentError(f"factors[{i}]: field 'parent' has wrong type")
        factors.append(Factor(fid, str(raw.get("name", "")), kind, parent))
    edges = []
    for i, raw in enumerate(_expect(doc, "edges", list, "map document")):
        if not isinstance(raw, dict):
            raise DocumentError(f"map document: edges[{i}] is not an object")
        src = _expect(raw, "source", str, f"edges[{i}]")
        tgt = _expect(raw, "target", str, f"edges[{i}]")
        w = _expect(raw, "weight", (int, float), f"edges[{i}]")
        if isinstance(w, bool):
            raise DocumentError(f"edges[{i}]: field 'weight' has wrong type")
        edges.append(WeightedEdge(src, tgt, float(w)))
    return build_map(factors, edges, metadata)  # InvalidMapError propagates


def save_map(m: CognitiveMap) -> bytes:
    return dumps_document(map_document(m))


def load_map(data: bytes | str) -> CognitiveMap:
    return map_from_document(_loads(data))


# ------------------------------------------------------------- registry

def registry_document(kb: KnowledgeBase) -> dict:
    reg, tpl, net = kb.registry, kb.template, kb.network
    return {
        "format": FORMAT_VERSION,
        "kind": "registry",
        "climate_zones": sorted(reg.climate_zones),
        "population_classes": [
            {"label": c.label, "min_population": c.min_population}
            for c in reg.population_classes
        ],
        "specializations": sorted(reg.specializations),
        "supported": sorted(list(t) for t in reg.supported),
        "indicators": {
            "general": sorted(tpl.general),
            "special": {k: sorted(v) for k, v in sorted(tpl.special.items())},
            "overrides": [
                {"type": list(t), "indicators": sorted(v)}
                for t, v in sorted(tpl.overrides.items())
            ],
        },
        "semantic_network": {
            "nodes": sorted(net.nodes),
            "edges": sorted(list(e) for e in net.edges),
        },
    }


def registry_from_document(doc: Any) -> KnowledgeBase:
    doc = _check_version(doc, "registry document")
    zones = frozenset(_expect(doc, "climate_zones", list, "registry document"))
    classes = tuple(
        PopulationClass(
            _expect(raw, "label", str, f"population_classes[{i}]"),
            int(_expect(raw, "min_population", (int, float), f"population_classes[{i}]")),
        )
        for i, raw in enumerate(_expect(doc, "population_classes", list, "registry document"))
    )
    specs = frozenset(_expect(doc, "specializations", list, "registry document"))
    supported = frozenset(
        tuple(t) for t in _expect(doc, "supported", list, "registry document")
    )
    registry = TypologyRegistry(zones, classes, specs, supported)

    ind = doc.get("indicators") or {}
    template = IndicatorTemplate(
        general=frozenset(ind.get("general", [])),
        special={k: frozenset(v) for k, v in ind.get("special", {}).items()},
        overrides={
            tuple(o["type"]): frozenset(o["indicators"])
            for o in ind.get("overrides", [])
        },
    )
    net_raw = doc.get("semantic_network") or {"nodes": [], "edges": []}
    network = SemanticNetwork(
        frozenset(net_raw.get("nodes", [])),
        frozenset(tuple(e) for e in net_raw.get("edges", [])),
    )
    return KnowledgeBase(registry, template, network)


def save_registry(kb: KnowledgeBase) -> bytes:
    return dumps_document(registry_document(kb))


def load_registry(data: bytes | str) -> KnowledgeBase:
    return registry_from_document(_loads(data))


# ------------------------------------------------------------ scenarios

@dataclass(frozen=True)
class ScenarioSuite:
    """Scenario definitions plus the shared target and base state."""

    scenarios: tuple[Scenario, ...]
    target: Optional[TargetSpec]
    y_base: Optional[dict[str, float]]

    def base_vector(self, m: CognitiveMap) -> np.ndarray:
        if self.y_base is None:
            return np.zeros(m.n)
        return vector_from_named(m, self.y_base)


def scenario_document(suite: ScenarioSuite, m: CognitiveMap) -> dict:
    doc: dict[str, Any] = {"format": FORMAT_VERSION, "kind": "scenarios"}
    doc["scenarios"] = [
        {
            "name": s.name,
            "controls": list(s.control_factors),
            "schedule": {
                str(t): named for t, named in sorted(_schedule_named(s, m).items())
            },
            "horizon": s.horizon,
            "clamp": s.clamp,
        }
        for s in suite.scenarios
    ]
    if suite.target is not None:
        doc["target"] = {
            "factor": suite.target.target,
            "desired_delta": suite.target.desired_delta,
            "horizon": suite.target.horizon,
        }
    if suite.y_base is not None:
        doc["y_base"] = dict(suite.y_base)
    return doc


def _schedule_named(s: Scenario, m: CognitiveMap) -> dict[int, dict[str, float]]:
    named: dict[int, dict[str, float]] = {}
    for t, vec in s.schedule.entries.items():
        arr = np.asarray(vec)
        named[t] = {m.factor_ids[int(i)]: float(arr[int(i)]) for i in np.nonzero(arr)[0]}
    return named


def scenarios_from_document(doc: Any, m: CognitiveMap) -> ScenarioSuite:
    doc = _check_version(doc, "scenario document")
    scenarios = []
    for i, raw in enumerate(doc.get("scenarios", [])):
        if not isinstance(raw, dict):
            raise DocumentError(f"scenarios[{i}] is not an object")
        name = _expect(raw, "name", str, f"scenarios[{i}]")
        controls = tuple(_expect(raw, "controls", list, f"scenarios[{i}]"))
        horizon = _expect(raw, "horizon", int, f"scenarios[{i}]")
        sched_raw = raw.get("schedule", {})
        if not isinstance(sched_raw, dict):
            raise DocumentError(f"scenarios[{i}]: field 'schedule' has wrong type")
        try:
            named = {int(t): vals for t, vals in sched_raw.items()}
        except ValueError:
            raise DocumentError(f"scenarios[{i}]: schedule keys must be step indices") from None
        schedule = ImpulseSchedule.from_named(m, named)
        scenarios.append(
            Scenario(name, controls, schedule, horizon, bool(raw.get("clamp", False)))
        )
    target = None
    if "target" in doc:
        t_raw = doc["target"]
        target = TargetSpec(
            _expect(t_raw, "factor", str, "target"),
            float(_expect(t_raw, "desired_delta", (int, float), "target")),
            int(_expect(t_raw, "horizon", int, "target")),
        )
    y_base = doc.get("y_base")
    if y_base is not None and not isinstance(y_base, dict):
        raise DocumentError("field 'y_base' has wrong type")
    return ScenarioSuite(tuple(scenarios), target, y_base)


def load_scenarios(data: bytes | str, m: CognitiveMap) -> ScenarioSuite:
    return scenarios_from_document(_loads(data), m)


# ------------------------------------------------------------ indicators

@dataclass(frozen=True)
class IndicatorRow:
    municipality: str
    factor: str
    period: str
    value: float
    lower: float
    upper: float


@dataclass(frozen=True)
class IndicatorSeries:
    rows: tuple[IndicatorRow, ...]


_SERIES_HEADER = ["municipality", "factor", "period", "value", "min", "max"]


def read_indicator_series(data: bytes | str) -> IndicatorSeries:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    reader = csv.reader(io.StringIO(data))
    try:
        header = next(reader)
    except StopIteration:
        raise DocumentError("indicator series: empty file") from None
    if [h.strip() for h in header] != _SERIES_HEADER:
        raise DocumentError(
            f"indicator series: header must be {','.join(_SERIES_HEADER)}"
        )
    rows = []
    for lineno, rec in enumerate(reader, start=2):
        if not rec or all(not cell.strip() for cell in rec):
            continue
        if len(rec) != 6:
            raise DocumentError(f"indicator series line {lineno}: expected 6 columns")
        try:
            value, lower, upper = (float(rec[j]) for j in (3, 4, 5))
        except ValueError:
            raise DocumentError(f"indicator series line {lineno}: non-numeric value") from None
        rows.append(IndicatorRow(rec[0].strip(), rec[1].strip(), rec[2].strip(), value, lower, upper))
    return IndicatorSeries(tuple(rows))


def ingest_indicators(
    series: IndicatorSeries,
    m: CognitiveMap,
    period: str,
    default: float = 0.5,
    municipality: Optional[str] = None,
) -> np.ndarray:
    """Base state vector from raw indicator values, min-max normalized.

    Y_i = (value - min) / (max - min) per factor; values outside their
    bounds clip to [0, 1] with a BoundsClipWarning (municipal statistics
    contain outliers; refusing them would be unhelpful).  Factors without a
    row for the period take the configured default.
    """
    y = np.full(m.n, float(default))
    seen: set[str] = set()
    for row in series.rows:
        if row.period != period:
            continue
        if municipality is not None and row.municipality != municipality:
            continue
        if row.factor not in m.index:
            continue
        if row.factor in seen:
            raise DocumentError(
                f"duplicate indicator row for factor {row.factor!r} in period {period!r}"
            )
        seen.add(row.factor)
        if row.upper <= row.lower:
            raise DocumentError(
                f"factor {row.factor!r}: bounds [{row.lower}, {row.upper}] are not increasing"
            )
        norm = (row.value - row.lower) / (row.upper - row.lower)
        if norm < 0.0 or norm > 1.0:
            warnings.warn(
                f"factor {row.factor!r} value {row.value} outside [{row.lower}, {row.upper}]; clipped",
                BoundsClipWarning,
                stacklevel=2,
            )
            norm = min(max(norm, 0.0), 1.0)
        y[m.index[row.factor]] = norm
    return y


# ------------------------------------------------------------ trajectories

def trajectory_document(traj: Trajectory) -> dict:
    return {
        "format": FORMAT_VERSION,
        "kind": "trajectory",
        "factors": list(traj.factor_ids),
        "horizon": traj.horizon,
        "y": traj.ys.tolist(),
        "o": traj.os_.tolist(),
    }


def export_trajectory(traj: Trajectory, fmt: str = "tabular") -> bytes:
    """Tabular CSV of the Y series, or the full JSON document with Y and O."""
    if fmt == "document":
        return dumps_document(trajectory_document(traj))
    if fmt != "tabular":
        raise ValueError(f"unknown trajectory format {fmt!r}")
    out = io.StringIO()
    out.write("t," + ",".join(traj.factor_ids) + "\r\n")
    for t in range(traj.horizon + 1):
        cells = [str(t)] + [format(v, ".12g") for v in traj.ys[t]]
        out.write(",".join(cells) + "\r\n")
    return out.getvalue().encode()


# --------------------------------------------------------------- reports

def analysis_document(
    m: CognitiveMap,
    closure: ClosurePair,
    infl: InfluenceReport,
    stab: StabilityReport,
) -> dict:
    return {
        "format": FORMAT_VERSION,
        "kind": "analysis",
        "factors": list(m.factor_ids),
        "stability": {
            "spectral_radius": stab.spectral_radius,
            "classification": stab.classification,
            "tol": stab.tol,
        },
        "closure": {"v_plus": closure.v_plus.tolist(), "v_minus": closure.v_minus.tolist()},
        "influence": {
            "P": infl.influence.tolist(),
            "C": infl.consonance.tolist(),
            "D": infl.dissonance.tolist(),
            "per_factor": {
                "influence_on_system": infl.influence_on_system.tolist(),
                "susceptibility": infl.susceptibility.tolist(),
                "consonance_on_system": infl.consonance_on_system.tolist(),
            },
        },
    }


def plan_document(plan: StabilizationPlan) -> dict:
    return {
        "format": FORMAT_VERSION,
        "kind": "stabilization-plan",
        "succeeded": plan.succeeded,
        "resulting_radius": plan.resulting_radius,
        "changes": [
            {
                "source": c.source,
                "target": c.target,
                "old_weight": c.old_weight,
                "new_weight": c.new_weight,
            }
            for c in plan.changes
        ],
    }


def ranking_document(ranked: list[RankedScenario]) -> dict:
    return {
        "format": FORMAT_VERSION,
        "kind": "ranking",
        "ranking": [
            {"name": r.name, "target_delta": r.target_delta, "distance": r.distance}
            for r in ranked
        ],
    }


def scenario_result_document(result: ScenarioResult) -> dict:
    doc = trajectory_document(result.trajectory)
    return {
        "format": FORMAT_VERSION,
        "kind": "scenario-result",
        "name": result.name,
        "target_delta": result.target_delta,
        "final_deltas": result.final_deltas.tolist(),
        "trajectory": {k: doc[k] for k in ("factors", "horizon", "y", "o")},
    }


# ------------------------------------------------------------------ files

def write_atomic(path: str, data: bytes) -> None:
    """Whole-file atomic write: temp file in the same directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
