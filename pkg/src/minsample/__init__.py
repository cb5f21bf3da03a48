"""Min-entropy sampling bounds, random access code bounds, and brute-force
oracles for the guessing-probability machinery behind them."""

from .bounds import (
    BoundReport,
    Precondition,
    best_sampled_rate,
    brw_bound,
    corollary1_bound,
    inequality_audit,
    kr_blockwise,
    kr_recursive,
    kt_lift,
    lemma42_params,
    listdecode_extractor_threshold,
    main_sampling_threshold,
    nayak_max_p,
    rac_success_bound,
    smoothness_floor,
    xor_extractor_threshold,
)
from .entropy_math import (
    binary_entropy,
    binary_entropy_inv,
    binomial_tail_below,
    hoeffding_tail,
    log_binomial_tail_below,
)
from .guess_oracle import (
    ClassicalJoint,
    SubsetStrategy,
    brw_rhs,
    enumerate_storage_functions,
    minentropy,
    pguess_subset,
    pguess_whole,
    pguess_xor,
    verify_brw,
    verify_fourier_identity,
    walsh_transform,
    xor_guesser_from_subset_strategy,
)
from .quantum import (
    CqEnsemble,
    RacEncoding,
    helstrom,
    helstrom_pguess,
    pgm,
    pgm_pguess,
    qrac_2to1,
    rac_success,
    statistical_distance,
    verify_lemma1,
)
from .sampler_sim import (
    SamplePlan,
    make_rng,
    monte_carlo_pguess_subset,
    permutation_transform,
    sample_subset,
    verify_theorem3,
)
from .xor_code import ScaleError, XorCode, check_list_decodable, encode, subset_rank, subset_unrank

__version__ = "0.1.0"
