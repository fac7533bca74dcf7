"""Cognitive maps: factors, signed fuzzy edge weights, validation, decomposition.

A map is a directed graph whose nodes are development indicators ("factors")
and whose edges carry signed influence weights in [-1, 1].  Factor order is
significant: the i-th factor of a map is the i-th coordinate of every vector
and matrix produced anywhere downstream.  Maps are immutable values; every
operation returns a new map.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterable, Optional, Sequence

import numpy as np

from .knowledge import MunicipalityType


class FactorKind(str, Enum):
    TARGET = "target"
    CONTROL = "control"
    GENERAL = "general"
    SPECIAL = "special"


@dataclass(frozen=True)
class Factor:
    """One indicator node. ``parent`` records decomposition lineage."""

    id: str
    name: str = ""
    kind: FactorKind = FactorKind.GENERAL
    parent: Optional[str] = None


@dataclass(frozen=True)
class WeightedEdge:
    """Directed influence ``source -> target`` with weight in [-1, 1]."""

    source: str
    target: str
    weight: float


@dataclass(frozen=True)
class MapMetadata:
    name: str = ""
    version: str = "1"
    municipality_type: Optional[MunicipalityType] = None


@dataclass(frozen=True)
class Violation:
    """One broken invariant: a machine code, the offending element, prose."""

    code: str
    subject: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        if self.ok:
            return "valid"
        return "; ".join(v.message for v in self.violations)


class MapError(ValueError):
    """Base class for cognitive-map construction and lookup errors."""


class InvalidMapError(MapError):
    """Raised by build_map when the inputs violate map invariants."""

    def __init__(self, report: ValidationReport):
        super().__init__(str(report))
        self.report = report


class UnknownFactorError(MapError):
    def __init__(self, factor_id: str):
        super().__init__(f"unknown factor {factor_id!r}")
        self.factor_id = factor_id


_KIND_VALUES = {k.value for k in FactorKind}


@dataclass(frozen=True, eq=False)
class CognitiveMap:
    """Factors plus signed weight relation; treat instances as immutable.

    Instances built through :func:`build_map` satisfy all invariants.
    Directly constructed instances may not; :func:`validate_map` reports
    the difference.  Derived caches (index, weight matrix) assume a valid
    map and are populated lazily.
    """

    factors: tuple[Factor, ...]
    edges: tuple[WeightedEdge, ...]
    metadata: MapMetadata = MapMetadata()

    @property
    def n(self) -> int:
        return len(self.factors)

    @property
    def factor_ids(self) -> tuple[str, ...]:
        return tuple(f.id for f in self.factors)

    @property
    def index(self) -> dict[str, int]:
        cached = self.__dict__.get("_index")
        if cached is None:
            cached = {f.id: i for i, f in enumerate(self.factors)}
            object.__setattr__(self, "_index", cached)
        return cached

    def factor(self, factor_id: str) -> Factor:
        i = self.index.get(factor_id)
        if i is None:
            raise UnknownFactorError(factor_id)
        return self.factors[i]

    def weights(self) -> np.ndarray:
        """Dense weight matrix W with W[i, j] = weight of edge i -> j."""
        cached = self.__dict__.get("_weights")
        if cached is None:
            idx = self.index
            cached = np.zeros((self.n, self.n))
            for e in self.edges:
                cached[idx[e.source], idx[e.target]] = e.weight
            cached.setflags(write=False)
            object.__setattr__(self, "_weights", cached)
        return cached

    def target_factor(self) -> Optional[Factor]:
        for f in self.factors:
            if f.kind == FactorKind.TARGET:
                return f
        return None

    def control_ids(self) -> tuple[str, ...]:
        return tuple(f.id for f in self.factors if f.kind == FactorKind.CONTROL)


def build_map(
    factors: Iterable[Factor],
    edges: Iterable[WeightedEdge] = (),
    metadata: MapMetadata | None = None,
) -> CognitiveMap:
    """Construct a validated map. Factor order is preserved.

    Raises InvalidMapError listing every violation at once, so a caller
    fixing an authored map sees the full damage in one pass.
    """
    m = CognitiveMap(tuple(factors), tuple(edges), metadata or MapMetadata())
    report = validate_map(m)
    if not report.ok:
        raise InvalidMapError(report)
    return m


def validate_map(m: CognitiveMap) -> ValidationReport:
    """Check every map invariant; an empty report means the map is valid."""
    bad: list[Violation] = []
    seen: set[str] = set()
    for f in m.factors:
        if not f.id or any(c.isspace() for c in f.id):
            bad.append(Violation("bad-factor-id", f.id, f"factor id {f.id!r} is empty or has whitespace"))
        if f.id in seen:
            bad.append(Violation("duplicate-factor-id", f.id, f"duplicate factor id {f.id!r}"))
        seen.add(f.id)
        kind = f.kind.value if isinstance(f.kind, FactorKind) else f.kind
        if kind not in _KIND_VALUES:
            bad.append(Violation("bad-kind", f.id, f"factor {f.id!r} has unknown kind {kind!r}"))

    by_id = {f.id: f for f in m.factors}
    for f in m.factors:
        if f.parent is not None and f.parent not in by_id:
            bad.append(Violation("dangling-parent", f.id, f"factor {f.id!r} names missing parent {f.parent!r}"))
    # lineage cycles: follow parent chains
    for f in m.factors:
        trail = {f.id}
        cur = f
        while cur.parent is not None and cur.parent in by_id:
            if cur.parent in trail:
                bad.append(Violation("parent-cycle", f.id, f"decomposition lineage cycle through {f.id!r}"))
                break
            trail.add(cur.parent)
            cur = by_id[cur.parent]

    pairs: set[tuple[str, str]] = set()
    for e in m.edges:
        key = (e.source, e.target)
        if key in pairs:
            bad.append(Violation("duplicate-edge", f"{e.source}->{e.target}",
                                 f"duplicate edge {e.source!r}->{e.target!r}"))
        pairs.add(key)
        for endpoint in (e.source, e.target):
            if endpoint not in by_id:
                bad.append(Violation("dangling-edge", f"{e.source}->{e.target}",
                                     f"edge {e.source!r}->{e.target!r} names missing factor {endpoint!r}"))
        # closed interval, exact comparison: weights are authored, not computed
        if not (-1.0 <= e.weight <= 1.0):
            bad.append(Violation("weight-range", f"{e.source}->{e.target}",
                                 f"edge {e.source!r}->{e.target!r} weight {e.weight} outside [-1,1]"))

    targets = [f.id for f in m.factors if f.kind == FactorKind.TARGET]
    if len(targets) > 1:
        bad.append(Violation("multiple-targets", ",".join(targets),
                             f"multiple target factors: {', '.join(targets)}"))
    return ValidationReport(tuple(bad))


def decompose_factor(
    m: CognitiveMap,
    factor_id: str,
    children: Sequence[tuple[Factor, float]],
) -> CognitiveMap:
    """Split a factor into child indicators that aggregate back into it.

    The parent stays in the map; each child is appended with
    ``parent=factor_id`` plus one edge ``child -> parent`` carrying the
    aggregation weight.  Pre-existing edges are untouched and the input
    map is not modified.
    """
    if factor_id not in m.index:
        raise UnknownFactorError(factor_id)
    existing = set(m.index)
    fresh: set[str] = set()
    for child, w in children:
        if child.id in existing or child.id in fresh:
            raise MapError(f"child id {child.id!r} collides with an existing factor")
        fresh.add(child.id)
        if not (-1.0 <= w <= 1.0):
            raise MapError(f"aggregation weight {w} for child {child.id!r} outside [-1,1]")
    new_factors = list(m.factors)
    new_edges = list(m.edges)
    for child, w in children:
        new_factors.append(replace(child, parent=factor_id))
        new_edges.append(WeightedEdge(child.id, factor_id, w))
    return build_map(new_factors, new_edges, m.metadata)


def structurally_equal(a: CognitiveMap, b: CognitiveMap) -> bool:
    """Same factors in the same order, same edge set, same metadata."""
    return (
        a.factors == b.factors
        and set(a.edges) == set(b.edges)
        and a.metadata == b.metadata
    )
