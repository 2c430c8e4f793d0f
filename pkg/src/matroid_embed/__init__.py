"""Online matroid embeddings, the secretary reduction built on them, and their limits."""

from .matroids import (
    CompleteBinaryMatroid,
    CopyMatroid,
    ExplicitMatroid,
    FreeMatroid,
    GraphicMatroid,
    LaminarMatroid,
    LinearMatroid,
    Matroid,
    PrefixGatedOracle,
    TrivialMatroid,
    UniformMatroid,
    check_axioms,
    copies,
    direct_sum,
    find_circuit,
    greedy_max_weight_basis,
    is_morphism,
    restrict,
    span,
)
from .ome import SCHEMES, EmbeddingRecord, run_embedding, solve_alignment
from .fileformat import dump_matroid, parse_matroid_file, parse_matroid_text

__version__ = "0.1.0"

__all__ = [
    "CompleteBinaryMatroid",
    "CopyMatroid",
    "ExplicitMatroid",
    "FreeMatroid",
    "GraphicMatroid",
    "LaminarMatroid",
    "LinearMatroid",
    "Matroid",
    "PrefixGatedOracle",
    "TrivialMatroid",
    "UniformMatroid",
    "check_axioms",
    "copies",
    "direct_sum",
    "find_circuit",
    "greedy_max_weight_basis",
    "is_morphism",
    "restrict",
    "span",
    "SCHEMES",
    "EmbeddingRecord",
    "run_embedding",
    "solve_alignment",
    "dump_matroid",
    "parse_matroid_file",
    "parse_matroid_text",
]
