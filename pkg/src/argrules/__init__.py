"""Rule induction with argumentation graphs.

Learns a graph of attacks (and optionally supports) between attribute-value
arguments and a target argument by best-first search, predicts by checking
whether the target is in the grounded extension of the graph projected on
an instance's facts, and explains each prediction with the defenders or the
undefended attackers of the target.
"""
from .dataset import (
    Atom,
    AttributeSchema,
    Dataset,
    Instance,
    RawTable,
    atomize,
    build_dataset,
    fit_schema,
    fit_segmentation,
    from_table,
    load_table,
    split,
)
from .dot import export_dot
from .errors import ArgRulesError, ConfigError, DataIOError, InvariantError, SchemaError
from .experiment import EvalConfig, EvalReport, evaluate
from .explain import (
    ExplanationSet,
    Role,
    Verdict,
    def_by,
    def_by_bipolar,
    not_acc,
    not_def,
    render,
)
from .framework import (
    ATTACK,
    FORBIDDEN,
    NO_EDGE,
    SUPPORT,
    TARGET,
    TOP,
    ArgKind,
    Argument,
    ArgumentUniverse,
    ContextualGraph,
    Label,
    RelationMatrix,
    Variant,
    bipolar_extension,
    extension,
    grounded,
    legal_target,
    predict,
    project,
    violations,
)
from .model import Model
from .search import SearchConfig, SearchResult, heuristic, neighbours, node_hash, prune_check, search

__version__ = "0.1.0"
