"""Noisy clique, biclique and star decomposition of graphs, drawn as Ring Motifs."""
from importlib.resources import files

from .graph import AdjacencyMatrix, Graph, Ordering, ParseError, ValidationError, load_edge_list, load_matrix, materialize
from .layout import ForceParams, LayoutState, run as run_layout
from .patterns import Local, ModelKind, NoiseModel, Pattern, PatternKind, enumerate_all
from .pipeline import PipelineConfig, run_pipeline
from .render import RenderConfig, render_matrix, render_motifs, render_precision_bar
from .reorder import morans_i_simplified, reorder
from .select import Decomposition, FilterRule, PrecisionCounts, decompose
from .synthetic import Plant, generate_synthetic

__version__ = "0.1.0"


def karate_club() -> Graph:
    """Zachary's karate club, 34 vertices and 78 edges, labels 1..34."""
    return load_edge_list(files(__package__).joinpath("data/karate.edges").read_text())


__all__ = [
    "AdjacencyMatrix",
    "Decomposition",
    "FilterRule",
    "ForceParams",
    "Graph",
    "LayoutState",
    "Local",
    "ModelKind",
    "NoiseModel",
    "Ordering",
    "ParseError",
    "Pattern",
    "PatternKind",
    "PipelineConfig",
    "Plant",
    "PrecisionCounts",
    "RenderConfig",
    "ValidationError",
    "decompose",
    "enumerate_all",
    "generate_synthetic",
    "karate_club",
    "load_edge_list",
    "load_matrix",
    "materialize",
    "morans_i_simplified",
    "render_matrix",
    "render_motifs",
    "render_precision_bar",
    "reorder",
    "run_layout",
    "run_pipeline",
]
