"""Multi-prover proof-of-retrievability library.

Exact-arithmetic building blocks (prime fields, ramp-scheme sharing,
response codes), the multi-prover constructions with worst-case and
average-case extractors, and the statistical tests that decide from audit
transcripts whether extraction will succeed.
"""

from .field import (
    FieldElement,
    FieldModulus,
    Polynomial,
    derived_rng,
    poly_interpolate,
    poly_random,
)
from .ramp import (
    DistributionComparison,
    LinearCodeSpec,
    RampParams,
    Share,
    ShareVector,
    coefficient_rs_code,
    leakage_probe,
    multiplication_code,
    reconstruct,
    reconstruct_code,
    share_gen,
    share_gen_blocks,
    share_gen_code,
    symbol_repetition_code,
)
from .por import (
    IndexedCodePoR,
    PorScheme,
    ResponseCode,
    ShachamWatersPoR,
    build_response_code,
    consistent_keys,
    extract_nearest,
    extraction_threshold,
    measure_success,
    measure_success_avg,
    sw_dstar,
    sw_gamma,
    sw_keygen,
    sw_respond,
    sw_tag,
    sw_threshold,
    sw_verify,
)
from .adversary import (
    CorruptionSpec,
    ProvingAlgorithm,
    collude_redistribute,
    make_prover,
)
from .systems import (
    AuditTranscript,
    ExtractionReport,
    IndexedBase,
    MporConfig,
    MporSystem,
    ProverState,
    SwBase,
    VerifierState,
    build_provers,
    coalition_view_distribution,
    derive_keys,
    extract_average,
    extract_worst_case,
    mpor_audit,
    mpor_setup,
    privacy_probe,
    run_audits,
    storage_accounting,
)
from .stats import (
    FAIL_TO_REJECT_H0,
    REJECT_H0,
    FailureModel,
    TestOutcome,
    audit_hypothesis_test,
    binom_cdf,
    chi2_quantile,
    chi2_sf,
    lambda_upper,
    poisson_binomial_cdf,
    poisson_cdf,
    poisson_vs_exact_report,
    regularized_gamma_p,
    regularized_gamma_q,
    transcript_to_counts,
)

__version__ = "0.1.0"
