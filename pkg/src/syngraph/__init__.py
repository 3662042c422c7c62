"""Syntactic dependency networks from child free-speech transcripts.

The toolkit covers the full path from CHAT-style transcript to
per-corpus network statistics: utterance extraction and normalization,
dependency annotation storage (extended DGA XML), advisory annotation
flags, head/complement tree projection, word-type graph building, and
the metric suite (degree, clustering, path length, random baseline,
small-world check, assortativity, average structure size).
"""

from .annotations import (
    ACCEPT,
    AnnotatedDocument,
    AnnotatedUtterance,
    AnnotationDecision,
    DecisionStatus,
    DependencyArc,
    DgaParseError,
    DocumentValidationError,
    RejectReason,
    Structure,
    Violation,
    read_dga_xml,
    skeleton_document,
    structures_from_arcs,
    validate,
    write_dga_xml,
)
from .chat import (
    DEFAULT_PUNCTUATION,
    DEFAULT_SPEAKER,
    Age,
    RawUtterance,
    Token,
    TokenKind,
    Transcript,
    extract_child_utterances,
    make_token,
    normalize,
    parse_chat,
    tokenize,
)
from .criteria import (
    DEFAULT_LEXICON,
    AdultTurn,
    AdvisoryFlag,
    FlagKind,
    NonAcceptedLexicon,
    classify_token,
    flag_discourse_item,
    flag_duplication,
    flag_imitation,
    strip_onomatopoeia,
    utterance_flags,
)
from .graph import (
    AdjacencyMatrix,
    SyntaxGraph,
    adjacency,
    build_graph,
    components,
    giant_component,
    subgraph,
    undirected_view,
)
from .metrics import (
    MetricsReport,
    assortativity,
    avg_degree,
    avg_structure_size,
    clustering_avg,
    clustering_local,
    compute_report,
    path_length,
    poisson_baseline,
    small_world,
)
from .pipeline import CorpusEntry, CorpusSeries, PipelineConfig, RunResult, emit, run
from .projection import ConstituencyNode, Leaf, Phrase, TreeError, head_word, invert, project

__version__ = "0.1.0"
