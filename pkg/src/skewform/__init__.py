"""skewform: symbolic exterior calculus with evolutionary (unclosed) forms.

Exact rational-function coefficients, wedge/d/Hodge operators, connection
commutators with torsion, pseudostructure restrictions, and classification
of relations d(psi) = omega as identical or nonidentical, including the
degenerate transformations that turn one into the other.
"""

from .symexpr import (
    Expr,
    ExprError,
    ExprSyntaxError,
    PoleError,
    UnboundVariableError,
    ZeroDecision,
    cos,
    diff,
    evaluate,
    exp,
    is_zero,
    ln,
    parse_expr,
    sin,
    zero_test,
)
from .exterior import (
    Chart,
    ChartError,
    DiffForm,
    FormError,
    NotClosedError,
    commutator1,
    ext_d,
    form_from_json,
    form_to_json,
    form_to_text,
    homotopy_antiderivative,
    is_closed,
    is_exact,
    parse_form,
    wedge,
)
from .manifold import (
    Connection,
    TorsionError,
    bianchi_first_check,
    covariant_deriv,
    evo_commutator,
    evo_d,
    riemann,
    torsion,
)
from .duality import (
    Metric,
    MetricError,
    christoffel,
    codifferential,
    dual_closure_check,
    hodge_laplacian,
    hodge_star,
    laplacian,
)
from .relations import (
    CLOSED_RHS,
    IDENTICAL,
    NONIDENTICAL,
    Pseudostructure,
    Relation,
    RelationError,
    ScanReport,
    Verdict,
    classify,
    classify_on,
    degenerate_scan,
    dual_closure_on,
    induced_metric,
    integrate_chain,
    interior_d,
    poisson_bracket,
    pullback,
)
from .catalog import (
    CanonicalCheckResult,
    GreenReport,
    LegendreResult,
    canonical_check,
    green_check,
    legendre_transform,
    list_entries,
    run_all,
    run_entry,
)
from .session import Session, SessionError, load_session, parse_session, run_session

__version__ = "0.1.0"

__all__ = [
    "Chart",
    "ChartError",
    "Connection",
    "DiffForm",
    "Expr",
    "ExprError",
    "ExprSyntaxError",
    "FormError",
    "Metric",
    "MetricError",
    "NotClosedError",
    "PoleError",
    "Pseudostructure",
    "Relation",
    "RelationError",
    "ScanReport",
    "Session",
    "SessionError",
    "TorsionError",
    "UnboundVariableError",
    "Verdict",
    "ZeroDecision",
    "IDENTICAL",
    "CLOSED_RHS",
    "NONIDENTICAL",
    "bianchi_first_check",
    "canonical_check",
    "christoffel",
    "classify",
    "classify_on",
    "codifferential",
    "commutator1",
    "cos",
    "covariant_deriv",
    "degenerate_scan",
    "diff",
    "dual_closure_check",
    "dual_closure_on",
    "evaluate",
    "evo_commutator",
    "evo_d",
    "exp",
    "ext_d",
    "form_from_json",
    "form_to_json",
    "form_to_text",
    "green_check",
    "hodge_laplacian",
    "hodge_star",
    "homotopy_antiderivative",
    "induced_metric",
    "integrate_chain",
    "interior_d",
    "is_closed",
    "is_exact",
    "is_zero",
    "laplacian",
    "legendre_transform",
    "list_entries",
    "ln",
    "load_session",
    "parse_expr",
    "parse_form",
    "parse_session",
    "poisson_bracket",
    "pullback",
    "riemann",
    "run_all",
    "run_entry",
    "run_session",
    "sin",
    "torsion",
    "wedge",
    "zero_test",
]
