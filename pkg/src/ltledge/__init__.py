"""Linear temporal logic with first-class edge (event) operators.

The package evaluates formulas over ultimately-periodic lasso traces,
proves closure under stuttering syntactically with emitted proof trees,
searches for stuttering counterexamples by bounded enumeration, and
ships the edge-extended existence property-pattern catalog.
"""

from .analyzer import (
    Closed,
    ProofTree,
    Rule,
    Unknown,
    Verdict,
    analyze,
    check_proof,
    normalize,
    proof_from_doc,
    proof_to_doc,
    render_proof,
)
from .falsifier import (
    Counterexample,
    SearchBounds,
    cex_from_doc,
    cex_to_doc,
    falsify,
    minimize,
)
from .formula import (
    Always,
    And,
    AnyEdge,
    Atom,
    ConstFalse,
    ConstTrue,
    Eventually,
    FallEdge,
    Formula,
    Iff,
    Implies,
    Next,
    Not,
    Or,
    RiseEdge,
    Until,
    atoms_of,
    desugar_edges,
    subformulas,
)
from .patterns import (
    Catalog,
    CatalogReport,
    PatternTemplate,
    catalog,
    check_catalog,
    instantiate,
)
from .semantics import (
    LassoTrace,
    UnknownAtomError,
    dump_trace,
    eval_formula,
    eval_oracle,
    load_trace,
    stutter_at,
    trace_from_doc,
    trace_to_doc,
    unroll,
)
from .syntax import ParseError, parse, render

__version__ = "0.1.0"

__all__ = [
    "Always", "And", "AnyEdge", "Atom", "Catalog", "CatalogReport",
    "Closed", "ConstFalse", "ConstTrue", "Counterexample", "Eventually",
    "FallEdge", "Formula", "Iff", "Implies", "LassoTrace", "Next", "Not",
    "Or", "ParseError", "PatternTemplate", "ProofTree", "RiseEdge", "Rule",
    "SearchBounds", "Unknown", "UnknownAtomError", "Until", "Verdict",
    "analyze", "atoms_of", "catalog", "cex_from_doc", "cex_to_doc",
    "check_catalog", "check_proof", "desugar_edges", "dump_trace",
    "eval_formula", "eval_oracle", "falsify", "instantiate", "load_trace",
    "minimize", "normalize", "parse", "proof_from_doc", "proof_to_doc",
    "render", "render_proof", "stutter_at", "subformulas", "trace_from_doc",
    "trace_to_doc", "unroll",
]
