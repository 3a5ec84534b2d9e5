"""Query tips, rewrites, and the toy plan-cost comparison."""

from pgstudio.advisor.errors import (
    AdvisorError,
    NoRewriteAvailable,
    StaleDiagnostic,
    UnsupportedShape,
)
from pgstudio.advisor.planner import (
    DEFAULT_COST_MODEL,
    CostModel,
    PlanNode,
    PlanReport,
    TableStats,
    compare_plans,
    plan,
    predicate_selectivity,
    predicate_weight,
)
from pgstudio.advisor.rules import (
    Diagnostic,
    Equivalence,
    Rule,
    analyze,
    apply_rewrite,
    query_fingerprint,
)

__all__ = [
    "AdvisorError",
    "NoRewriteAvailable",
    "StaleDiagnostic",
    "UnsupportedShape",
    "DEFAULT_COST_MODEL",
    "CostModel",
    "PlanNode",
    "PlanReport",
    "TableStats",
    "compare_plans",
    "plan",
    "predicate_selectivity",
    "predicate_weight",
    "Diagnostic",
    "Equivalence",
    "Rule",
    "analyze",
    "apply_rewrite",
    "query_fingerprint",
]
