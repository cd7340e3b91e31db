"""Reply-tree structure analytics.

Thin wrapper over the native module: reply-tree construction, the
seen-probability (vision) model, author-graph centralities, text statistics,
the corpus analysis pipeline and the synthetic corpus generator.
"""

from ._core import (
    Conversation,
    ConvoscopeError,
    analyze,
    author_baseline_vision,
    author_graph_edges,
    branching_factor,
    centralities,
    depth,
    extract_text_features,
    generate,
    path_distance,
    root_dominance,
    seen_probability,
    text_stats,
    theta,
    zeta,
    __version__,
)

__all__ = [
    "Conversation",
    "ConvoscopeError",
    "analyze",
    "author_baseline_vision",
    "author_graph_edges",
    "branching_factor",
    "centralities",
    "depth",
    "extract_text_features",
    "generate",
    "path_distance",
    "root_dominance",
    "seen_probability",
    "text_stats",
    "theta",
    "zeta",
    "__version__",
]
