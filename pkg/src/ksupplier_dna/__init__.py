"""Test-tube (Adleman-Lipton) simulation of a DNA algorithm for minimum k-supplier."""

from .errors import (
    DuplexPresent,
    InstanceError,
    MalformedStrand,
    NoSolution,
    NonTerminating,
    SimulationError,
    StrandExplosion,
    TubeConsumed,
)
from .model import (
    Graph,
    Instance,
    Library,
    ShortestPaths,
    all_pairs_shortest_paths,
    build_library,
    descending_pairs,
    load_instance,
    validate_instance,
)
from .oracle import MAXMAX, MAXMIN, check_step_bounds, oracle_solve, verify_report
from .pipeline import (
    PipelineReport,
    SolutionAssignment,
    corrected_threshold_pipeline,
    decode_strand,
    phase1_generate,
    phase2_filter_valid,
    phase3_cardinality,
    phase4_tag_distance,
    phase5_extract_selection,
    phase5_extract_xsearch,
    run_pipeline,
)
from .tube import Duplex, Lab, Strand, Symbol, TraceEvent, Tube, length_mers

__version__ = "0.1.0"
