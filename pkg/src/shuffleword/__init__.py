"""Square-free and self-shuffling infinite words.

Submodules: :mod:`~shuffleword.words` (morphisms, streams, factor search),
:mod:`~shuffleword.avoidance` (squares, 3u1u3, exponents),
:mod:`~shuffleword.shuffle` (frontier DP, witnesses, recurrent builder),
:mod:`~shuffleword.catalog` (named morphisms and words) and
:mod:`~shuffleword.cli`.
"""

from .avoidance import (
    ExponentReport,
    PatternReport,
    SquareReport,
    find_pattern_3u1u3,
    find_square,
    is_square_free,
    max_exponent,
    repetition_threshold,
)
from .catalog import F, G, H, H_PRIME, morphism
from .catalog import word as catalog_word
from .errors import *  # noqa: F401,F403
from .shuffle import (
    BlockSchedule,
    FactorizationReport,
    RecurrentShuffle,
    ShuffleFrontier,
    SurvivalCurve,
    build_recurrent_shuffle,
    exact_finite_shuffle,
    hall_shuffle_witness,
    is_shuffle_to_depth,
    self_shuffle_witness_g,
    shuffle_frontier,
    survival_curve,
    verify_block_factorization,
)
from .words import (
    Morphism,
    Occurrence,
    WordStream,
    apply_morphism,
    compose,
    decode_bifix,
    find_occurrence,
    fixed_point_prefix,
    is_factor_of,
    shift,
    to_str,
    word,
)

__version__ = "0.1.0"
