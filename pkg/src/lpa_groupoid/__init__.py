"""Leavitt path algebras of finite graphs realized as partial skew groupoid
rings D(X)⋆λG(E), with the group-type factorization and desk-scale probes."""

from .cylinders import CylinderFunction, LambdaAction
from .factorization import build_context, psi, psi_inverse, verify_factorization
from .fields import QQ, Field
from .graph import Graph, analyze, load_graph
from .grouptype import Transversal, check_transversal, decide_with_sink, search_transversal
from .lpa import LeavittEmbedding, embed, eval_word, leavitt_1n_check, matrix_oracle, verify_ck_relations
from .parser import evaluate, parse_expression
from .skew import SkewElement
from .walks import ReducedWalk, compose, invert, parse_walk, reduce

__version__ = "0.1.0"

__all__ = [
    "CylinderFunction",
    "LambdaAction",
    "build_context",
    "psi",
    "psi_inverse",
    "verify_factorization",
    "QQ",
    "Field",
    "Graph",
    "analyze",
    "load_graph",
    "Transversal",
    "check_transversal",
    "decide_with_sink",
    "search_transversal",
    "LeavittEmbedding",
    "embed",
    "eval_word",
    "leavitt_1n_check",
    "matrix_oracle",
    "verify_ck_relations",
    "evaluate",
    "parse_expression",
    "SkewElement",
    "ReducedWalk",
    "compose",
    "invert",
    "parse_walk",
    "reduce",
]
