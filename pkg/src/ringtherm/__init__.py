"""Thermometry of Gibbs samplers on odd antiferromagnetic Ising rings.

The package covers the full desk-scale pipeline: exact closed-form ring
statistics with a brute-force oracle (``ising``), exact Gibbs sampling
(``sampling``), effective-temperature extraction by TVD minimization
(``thermometry``), machine profiles / the offset scaling model / a
synthetic annealer backend and shot planner (``annealer``), scaling-law
fits (``scaling``), native ring embeddings on hardware graphs
(``embedding``), and a CLI (``ringtherm``).
"""

__version__ = "0.1.0"

from . import errors
from .annealer import (
    AnnealJob,
    MachineProfile,
    Perturbation,
    Submission,
    SubmissionPlan,
    TimeModel,
    ingest_samples,
    list_profiles,
    load_profile,
    model_teff,
    physical_coupling,
    physical_temperature,
    plan_shots,
    simulate_job,
    write_samples,
)
from .embedding import (
    HardwareGraph,
    RingEmbedding,
    find_ring_embedding,
    is_bipartite,
    load_graph,
    verify_embedding,
)
from .ising import (
    DomainWallPmf,
    RingSpec,
    brute_force_log_weight_sum,
    brute_force_pmf,
    domain_wall_pmf,
    invert_mean_density,
    log_partition,
    mean_density,
)
from .sampling import (
    EmpiricalHistogram,
    SampleSet,
    count_domain_walls,
    empirical_histogram,
    realize_config,
    sample_counts,
)
from .scaling import (
    AggregatedPoint,
    FitResult,
    SweepPoint,
    aggregate_over_sizes,
    fit_teff_scaling,
)
from .thermometry import (
    EstimateResult,
    EstimatorOptions,
    classify_regime,
    estimate_temperature,
    tvd,
)

__all__ = [
    "__version__",
    "errors",
    "AnnealJob",
    "MachineProfile",
    "Perturbation",
    "Submission",
    "SubmissionPlan",
    "TimeModel",
    "ingest_samples",
    "list_profiles",
    "load_profile",
    "model_teff",
    "physical_coupling",
    "physical_temperature",
    "plan_shots",
    "simulate_job",
    "write_samples",
    "HardwareGraph",
    "RingEmbedding",
    "find_ring_embedding",
    "is_bipartite",
    "load_graph",
    "verify_embedding",
    "DomainWallPmf",
    "RingSpec",
    "brute_force_log_weight_sum",
    "brute_force_pmf",
    "domain_wall_pmf",
    "invert_mean_density",
    "log_partition",
    "mean_density",
    "EmpiricalHistogram",
    "SampleSet",
    "count_domain_walls",
    "empirical_histogram",
    "realize_config",
    "sample_counts",
    "AggregatedPoint",
    "FitResult",
    "SweepPoint",
    "aggregate_over_sizes",
    "fit_teff_scaling",
    "EstimateResult",
    "EstimatorOptions",
    "classify_regime",
    "estimate_temperature",
    "tvd",
]
