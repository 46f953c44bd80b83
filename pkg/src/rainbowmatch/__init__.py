"""Rainbow perfect matchings in edge-colored complete bipartite graphs."""
from ._backend import name as backend
from .coloring import (
    ColorStats,
    EdgeColoring,
    PairSummary,
    PerfectMatching,
    color_stats,
    format_coloring,
    is_rainbow,
    mono_pair_count,
    mu,
    pair_summary,
    parse_coloring,
    read_coloring,
    validate,
    write_coloring,
)
from .errors import (
    BudgetExceeded,
    ColorIdOutOfRange,
    ColoringParseError,
    DimensionMismatch,
    DivisibilityViolation,
    InvalidMatching,
    OutOfRange,
    RainbowError,
    SizeMismatch,
    UndefinedMu,
)
from .exact import (
    CountResult,
    FindResult,
    SearchBudget,
    count_derangements,
    count_matchings_with_overlap,
    count_rainbow_matchings,
    exact_rainbow_probability,
    find_rainbow_matching,
    max_partial_rainbow,
    search_rainbow_matching,
)
from .generators import (
    GENERATORS,
    gen_adversarial_blocks,
    gen_all_distinct,
    gen_capped,
    gen_cyclic,
    gen_rrm,
    gen_urm,
    generate,
)
from .montecarlo import (
    Estimate,
    estimate_existence,
    estimate_rainbow_given_coloring,
    estimate_rainbow_given_model,
    sample_uniform_matching,
)
from .rng import Seed
from .theory import (
    BoundReport,
    LlllWitness,
    c_of_k,
    chebyshev_failure_bound,
    epsilon_ndg,
    f_of_s,
    llll_feasibility,
    model_mu,
    rrm_closed_form,
    sandwich_bounds,
    urm_closed_form,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
