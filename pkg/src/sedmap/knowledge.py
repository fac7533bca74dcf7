"""Municipality typology and the semantic layer around cognitive maps.

A municipality type is a (climate zone, population class, specialization)
triple; the registry says which triples occur in practice.  Each type
selects an indicator set: general indicators shared by all types plus
special ones keyed by specialization (with optional per-triple overrides).
A small semantic network records what the development strategy of a
municipality depends on; queries are direct triple lookups, no inference.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from typing import FrozenSet, Mapping, Optional

RELATIONS = frozenset({"depends-on", "is-a", "part-of", "assessed-by"})


class RegistryError(ValueError):
    """Registry content or lookup argument is invalid."""


@dataclass(frozen=True)
class PopulationClass:
    """Half-open interval [min_population, next class) of persons."""

    label: str
    min_population: int


@dataclass(frozen=True)
class MunicipalityType:
    climate: str
    population_class: str
    specialization: str

    def as_tuple(self) -> tuple[str, str, str]:
        return (self.climate, self.population_class, self.specialization)


@dataclass(frozen=True)
class TypologyRegistry:
    """Labeled classification axes and the supported (k, p, a) triples.

    Population classes must start at 0 and be strictly increasing: together
    they partition [0, inf) with inclusive lower bounds, so every count
    lands in exactly one class.
    """

    climate_zones: frozenset[str]
    population_classes: tuple[PopulationClass, ...]
    specializations: frozenset[str]
    supported: frozenset[tuple[str, str, str]]

    def __post_init__(self):
        classes = self.population_classes
        if not classes:
            raise RegistryError("registry has no population classes")
        if classes[0].min_population != 0:
            raise RegistryError("population classes must start at 0")
        labels = [c.label for c in classes]
        if len(set(labels)) != len(labels):
            raise RegistryError("duplicate population class labels")
        for a, b in zip(classes, classes[1:]):
            if b.min_population <= a.min_population:
                raise RegistryError(
                    f"population class bounds not increasing at {b.label!r}"
                )
        for k, p, a in self.supported:
            if k not in self.climate_zones or p not in labels or a not in self.specializations:
                raise RegistryError(f"supported triple ({k!r}, {p!r}, {a!r}) uses unknown labels")

    def population_class_for(self, population: int) -> PopulationClass:
        if population < 0:
            raise RegistryError(f"population {population} is negative")
        bounds = [c.min_population for c in self.population_classes]
        i = bisect.bisect_right(bounds, population) - 1
        return self.population_classes[i]


def resolve_type(
    registry: TypologyRegistry,
    climate: str,
    population: int,
    specialization: str,
) -> MunicipalityType:
    """Classify a municipality into its (k, p, a) type.

    Population boundaries are inclusive on the lower end: a count equal to a
    class bound belongs to that class.
    """
    if climate not in registry.climate_zones:
        raise RegistryError(f"unknown climate zone {climate!r}")
    if specialization not in registry.specializations:
        raise RegistryError(f"unknown specialization {specialization!r}")
    pclass = registry.population_class_for(population)
    triple = (climate, pclass.label, specialization)
    if triple not in registry.supported:
        raise RegistryError(
            f"unsupported municipality type ({climate!r}, {pclass.label!r}, {specialization!r})"
        )
    return MunicipalityType(*triple)


@dataclass(frozen=True)
class IndicatorTemplate:
    """General indicators plus special ones selected by the type.

    ``special`` is keyed by specialization; ``overrides`` replaces the
    special set for one full (k, p, a) triple when a type deviates from
    its specialization's default.
    """

    general: frozenset[str]
    special: Mapping[str, frozenset[str]] = field(default_factory=dict)
    overrides: Mapping[tuple[str, str, str], frozenset[str]] = field(default_factory=dict)


def indicators_for_type(template: IndicatorTemplate, mtype: MunicipalityType) -> frozenset[str]:
    """Indicator ids applicable to a type: general union special, deduplicated."""
    special = template.overrides.get(mtype.as_tuple())
    if special is None:
        special = template.special.get(mtype.specialization, frozenset())
    return frozenset(template.general) | frozenset(special)


@dataclass(frozen=True)
class SemanticNetwork:
    """Directed labeled triples over named domain entities."""

    nodes: frozenset[str]
    edges: frozenset[tuple[str, str, str]]  # (subject, relation, object)

    def __post_init__(self):
        for s, r, o in self.edges:
            if r not in RELATIONS:
                raise RegistryError(f"unknown relation {r!r} on edge ({s!r}, {r!r}, {o!r})")
            if s not in self.nodes or o not in self.nodes:
                raise RegistryError(f"edge ({s!r}, {r!r}, {o!r}) names a missing node")


def semantic_query(network: SemanticNetwork, subject: str, relation: str) -> frozenset[str]:
    """All objects o with (subject, relation, o) in the network; empty if none."""
    return frozenset(o for s, r, o in network.edges if s == subject and r == relation)


@dataclass(frozen=True)
class KnowledgeBase:
    """Registry, indicator template, and semantic network as one loadable unit."""

    registry: TypologyRegistry
    template: IndicatorTemplate
    network: SemanticNetwork
