"""Cognitive-map workbench for municipal development scenarios.

Build and validate signed fuzzy cognitive maps, run impulse-process
simulations, analyze influence structure and stability, search for
stabilizing edge changes and goal-reaching control impulses, and organize
maps by municipality typology.  Exposed as a library, a CLI (``sedmap``),
and an HTTP service (``sedmap serve``).
"""

from .analysis import (
    ClosurePair,
    EdgeChange,
    InfluenceReport,
    StabilityReport,
    StabilizationPlan,
    analyze_map,
    apply_plan,
    influence_report,
    stability_report,
    stabilize_search,
    transitive_closure,
)
from .dynamics import (
    ImpulseSchedule,
    Trajectory,
    closed_form_state,
    impulse_step,
    simulate,
    vector_from_named,
)
from .knowledge import (
    IndicatorTemplate,
    KnowledgeBase,
    MunicipalityType,
    PopulationClass,
    SemanticNetwork,
    TypologyRegistry,
    indicators_for_type,
    resolve_type,
    semantic_query,
)
from .mapcore import (
    CognitiveMap,
    Factor,
    FactorKind,
    InvalidMapError,
    MapError,
    MapMetadata,
    UnknownFactorError,
    ValidationReport,
    Violation,
    WeightedEdge,
    build_map,
    decompose_factor,
    structurally_equal,
    validate_map,
)
from .scenario import (
    RankedScenario,
    Scenario,
    ScenarioError,
    ScenarioResult,
    TargetSpec,
    UnreachableTargetError,
    compare_scenarios,
    invert_scenario,
    run_scenario,
    sensitivity,
)

__version__ = "0.1.0"
