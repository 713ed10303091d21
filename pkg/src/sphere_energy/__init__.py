"""Energy statistics and negative type for the angular metric on spheres."""

from .energy_stats import (
    PairedSample,
    TestReport,
    dcov_statistic,
    energy_cluster,
    energy_distance,
    gof_test,
    independence_test,
    two_sample_test,
    uniform_sampler,
    vmf_sampler,
)
from .hemisphere_transform import (
    MonteCarloEstimate,
    Reconstruction,
    expected_distance_profile,
    fingerprints_equal,
    mc_distance_identity,
    mc_energy_identity,
    r_invariance_check,
    reconstruct_check,
)
from .measures import (
    DiscreteMeasure,
    HemisphereFingerprint,
    antisymmetrize,
    find_null_great_sphere,
    fingerprint,
    hemisphere_mass,
    invariant_part,
    partitioning_mass,
    pushforward_reflect,
)
from .negative_type import (
    DistanceMatrix,
    StrictnessCertificate,
    Verdict,
    antipodal_pairs,
    distance_matrix,
    quadratic_form,
    strictness_certificate,
)
from .sphere_core import (
    DimensionError,
    DomainError,
    Hemisphere,
    UnitVector,
    angular_distance,
    gnomonic_project,
    hemisphere_contains,
    partitioning_contains,
    reflect,
    sample_uniform,
)

__version__ = "0.1.0"

__all__ = [
    "PairedSample",
    "TestReport",
    "dcov_statistic",
    "energy_cluster",
    "energy_distance",
    "gof_test",
    "independence_test",
    "two_sample_test",
    "uniform_sampler",
    "vmf_sampler",
    "MonteCarloEstimate",
    "Reconstruction",
    "expected_distance_profile",
    "fingerprints_equal",
    "mc_distance_identity",
    "mc_energy_identity",
    "r_invariance_check",
    "reconstruct_check",
    "DiscreteMeasure",
    "HemisphereFingerprint",
    "antisymmetrize",
    "find_null_great_sphere",
    "fingerprint",
    "hemisphere_mass",
    "invariant_part",
    "partitioning_mass",
    "pushforward_reflect",
    "DistanceMatrix",
    "StrictnessCertificate",
    "Verdict",
    "antipodal_pairs",
    "distance_matrix",
    "quadratic_form",
    "strictness_certificate",
    "DimensionError",
    "DomainError",
    "Hemisphere",
    "UnitVector",
    "angular_distance",
    "gnomonic_project",
    "hemisphere_contains",
    "partitioning_contains",
    "reflect",
    "sample_uniform",
]
