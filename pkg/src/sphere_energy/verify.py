"""Randomized numerical checks of the hemisphere and negative-type identities.

Each ``verify_*`` function runs a batch of seeded trials and returns a
plain dict with the worst case observed and a ``passed`` flag, ready to
be dumped as JSON by the command line tool.
"""

from __future__ import annotations

import math

import numpy as np

from .hemisphere_transform import (
    mc_distance_identity,
    mc_energy_identity,
    r_invariance_check,
)
from .measures import (
    DiscreteMeasure,
    antisymmetrize,
    fingerprint,
    invariant_part,
    random_probability,
)
from .negative_type import distance_matrix, quadratic_form
from .sphere_core import angular_distance, sample_uniform_array

NEGTYPE_TOL = 1e-10
COMPARE_TOL = 1e-12


def random_sum_zero(n: int, rng: np.random.Generator) -> np.ndarray:
    alpha = rng.standard_normal(n)
    return alpha - alpha.mean()


def random_configuration(rng: np.random.Generator, max_points: int = 12,
                         max_dim: int = 5) -> np.ndarray:
    """Between 2 and ``max_points`` uniform points on S^1 .. S^(max_dim-1)."""
    dim = int(rng.integers(2, max_dim + 1))
    n = int(rng.integers(2, max_points + 1))
    return sample_uniform_array(dim, n, rng)


def random_positive_measure(rng: np.random.Generator, dim: int = 3,
                            symmetric_pairs: int = 0,
                            free_atoms: int = 3) -> DiscreteMeasure:
    """Positive measure with some antipodal pairs and some unpaired atoms.

    Pairs carry unequal random weights on their two points, so the
    invariant part is nonzero exactly when ``symmetric_pairs > 0``.
    """
    base = sample_uniform_array(dim, symmetric_pairs + free_atoms, rng)
    paired = base[:symmetric_pairs]
    atoms = np.vstack([base, -paired])
    weights = rng.uniform(0.1, 1.0, atoms.shape[0])
    return DiscreteMeasure(atoms, weights)


def random_invariant_probability(rng: np.random.Generator, dim: int = 3,
                                 pairs: int = 3) -> DiscreteMeasure:
    base = sample_uniform_array(dim, pairs, rng)
    w = rng.dirichlet(np.ones(pairs)) / 2.0
    return DiscreteMeasure(np.vstack([base, -base]), np.concatenate([w, w]))


def verify_identity(samples: int = 100_000, seed: int = 0,
                    x=(1.0, 0.0, 0.0), y=(0.0, 1.0, 0.0)) -> dict:
    est = mc_distance_identity(x, y, samples, seed)
    exact = angular_distance(x, y)
    z = abs(est.value - exact) / est.std_error if est.std_error > 0 else (
        0.0 if est.value == exact else math.inf)
    return {"check": "identity", "exact": exact, **est.to_dict(),
            "z_score": z, "passed": z <= 3.0}


def verify_energy(trials: int = 20, samples: int = 200_000, seed: int = 0,
                  max_atoms: int = 5, dim: int = 3) -> dict:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for k in range(trials):
        m1 = random_probability(int(rng.integers(1, max_atoms + 1)), dim, rng)
        m2 = random_probability(int(rng.integers(1, max_atoms + 1)), dim, rng)
        lhs, rhs = mc_energy_identity(m1, m2, samples, seed + k)
        worst = max(worst, abs(lhs - rhs.value) / rhs.std_error)
    return {"check": "energy", "trials": trials, "samples": samples,
            "seed": seed, "max_z_score": worst, "passed": worst <= 4.0}


def verify_negtype(trials: int = 500, seed: int = 0) -> dict:
    rng = np.random.default_rng(seed)
    worst = -math.inf
    for _ in range(trials):
        pts = random_configuration(rng)
        r = 1.0 if rng.uniform() < 0.5 else 0.5
        alpha = random_sum_zero(pts.shape[0], rng)
        worst = max(worst, quadratic_form(distance_matrix(pts, r), alpha))
    return {"check": "negtype", "trials": trials, "seed": seed,
            "max_quadratic_form": worst, "passed": worst <= NEGTYPE_TOL}


def verify_cw(trials: int = 200, seed: int = 0, directions: int = 500,
              dim: int = 3, max_atoms: int = 8) -> dict:
    rng = np.random.default_rng(seed)
    dirs = sample_uniform_array(dim, directions, rng)
    smallest = math.inf
    for _ in range(trials):
        pole = sample_uniform_array(dim, 1, rng)[0]
        m1 = random_probability(int(rng.integers(1, max_atoms + 1)), dim, rng, pole)
        m2 = random_probability(int(rng.integers(1, max_atoms + 1)), dim, rng, pole)
        gap = np.max(np.abs(fingerprint(m1, dirs).masses
                            - fingerprint(m2, dirs).masses))
        smallest = min(smallest, float(gap))
    return {"check": "cw", "trials": trials, "seed": seed,
            "directions": directions, "min_max_gap": smallest,
            "passed": smallest > 1e-9}


def verify_symm(trials: int = 200, seed: int = 0, directions: int = 200,
                dim: int = 3) -> dict:
    rng = np.random.default_rng(seed)
    dirs = sample_uniform_array(dim, directions, rng)
    agree = 0
    for k in range(trials):
        if k % 2 == 0:
            m = random_invariant_probability(rng, dim, int(rng.integers(1, 5)))
        else:
            m = random_probability(int(rng.integers(1, 7)), dim, rng)
        exact = invariant_part(m).allclose(m)
        agree += r_invariance_check(m, dirs, 1e-12) == exact
    return {"check": "symm", "trials": trials, "seed": seed,
            "agreements": agree, "passed": agree == trials}


def verify_compare(trials: int = 200, seed: int = 0, dim: int = 3) -> dict:
    rng = np.random.default_rng(seed)
    worst_slack = math.inf
    equality_mismatches = 0
    for _ in range(trials):
        m = random_positive_measure(rng, dim, int(rng.integers(0, 3)),
                                    int(rng.integers(0, 4)) or 1)
        slack = 2.0 * m.total_mass() - antisymmetrize(m).total_variation()
        worst_slack = min(worst_slack, slack)
        equal = abs(slack) <= COMPARE_TOL
        equality_mismatches += equal != invariant_part(m).is_zero()
    return {"check": "compare", "trials": trials, "seed": seed,
            "min_slack": worst_slack, "equality_mismatches": equality_mismatches,
            "passed": worst_slack >= -COMPARE_TOL and equality_mismatches == 0}


CHECKS = {
    "identity": verify_identity,
    "energy": verify_energy,
    "negtype": verify_negtype,
    "cw": verify_cw,
    "symm": verify_symm,
    "compare": verify_compare,
}
