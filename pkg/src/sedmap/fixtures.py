"""Bundled example maps and knowledge objects.

The chain map is the two-factor workhorse used across tests and docs.  The
standard map is an illustrative starting model for municipal development
studies: quality of life as the target, production as the control lever,
plus the demographic and social-infrastructure indicators every type
shares.  Its weights are editorial choices, not measurements; treat it as
a template to adapt per municipality.
"""

from __future__ import annotations

from .knowledge import (
    IndicatorTemplate,
    KnowledgeBase,
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


def chain_map() -> CognitiveMap:
    """Two factors, one edge: control p drives target q with weight 0.5."""
    return build_map(
        [
            Factor("p", "Production", FactorKind.CONTROL),
            Factor("q", "Quality of life", FactorKind.TARGET),
        ],
        [WeightedEdge("p", "q", 0.5)],
        MapMetadata(name="chain", version="1"),
    )


def standard_map() -> CognitiveMap:
    """Illustrative municipal development model with a mild feedback loop."""
    factors = [
        Factor("quality_of_life", "Quality of life", FactorKind.TARGET),
        Factor("production", "Production", FactorKind.CONTROL),
        Factor("demographics", "Demographics", FactorKind.GENERAL),
        Factor("social_infrastructure", "Social infrastructure", FactorKind.GENERAL),
        Factor("employment", "Employment", FactorKind.GENERAL),
    ]
    edges = [
        WeightedEdge("production", "employment", 0.7),
        WeightedEdge("production", "quality_of_life", 0.4),
        WeightedEdge("employment", "quality_of_life", 0.5),
        WeightedEdge("demographics", "social_infrastructure", 0.5),
        WeightedEdge("social_infrastructure", "quality_of_life", 0.4),
        WeightedEdge("demographics", "employment", 0.3),
        WeightedEdge("quality_of_life", "demographics", 0.2),
    ]
    return build_map(factors, edges, MapMetadata(name="standard-sed", version="1"))


def default_registry() -> TypologyRegistry:
    zones = frozenset({"temperate", "subarctic"})
    classes = (
        PopulationClass("small", 0),
        PopulationClass("medium", 10_000),
        PopulationClass("large", 50_000),
    )
    specs = frozenset({"agriculture", "forestry", "mining"})
    supported = frozenset(
        (k, p.label, a) for k in zones for p in classes for a in specs
    )
    return TypologyRegistry(zones, classes, specs, supported)


def default_template() -> IndicatorTemplate:
    return IndicatorTemplate(
        general=frozenset({"demographics", "quality_of_life", "employment"}),
        special={
            "agriculture": frozenset({"agricultural_output"}),
            "forestry": frozenset({"timber_output"}),
            "mining": frozenset({"extraction_output"}),
        },
    )


def default_network() -> SemanticNetwork:
    """Dependency structure of strategy selection, as far as it is known.

    Only the determinants with a documented reading are wired: the strategy
    depends on the municipality's type, its current development level, and
    the number of rural settlements it contains; the type in turn depends
    on the three classification axes; the development level is assessed by
    the two indicator groups.
    """
    nodes = frozenset(
        {
            "SED-strategy",
            "municipality-type",
            "current-SED-level",
            "rural-settlement-count",
            "climate-zone",
            "population-class",
            "specialization",
            "general-indicators",
            "special-indicators",
        }
    )
    edges = frozenset(
        {
            ("SED-strategy", "depends-on", "municipality-type"),
            ("SED-strategy", "depends-on", "current-SED-level"),
            ("SED-strategy", "depends-on", "rural-settlement-count"),
            ("municipality-type", "depends-on", "climate-zone"),
            ("municipality-type", "depends-on", "population-class"),
            ("municipality-type", "depends-on", "specialization"),
            ("current-SED-level", "assessed-by", "general-indicators"),
            ("current-SED-level", "assessed-by", "special-indicators"),
            ("special-indicators", "depends-on", "municipality-type"),
        }
    )
    return SemanticNetwork(nodes, edges)


def default_knowledge_base() -> KnowledgeBase:
    return KnowledgeBase(default_registry(), default_template(), default_network())
