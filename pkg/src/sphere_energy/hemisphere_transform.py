"""Hemisphere integrals and the hemisphere-mass transform of measures.

The angular distance has the representation

    d(x, y) = integral over t of |1{t.x > 0} - 1{t.y > 0}|^2 dsigma(t)

with ``sigma`` the rotation-invariant measure of total mass pi, and for
probability measures ``mu1, mu2`` it follows that the energy double
integral equals ``-2 * integral (mu1(H_t) - mu2(H_t))^2 dsigma(t)``. The
Monte Carlo estimators here sample ``t`` uniformly and scale by pi.

The rest of the module compares measures through their hemisphere
masses, which determine a measure up to its antipodally symmetric part.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .measures import (
    ATOM_TOL,
    DiscreteMeasure,
    HemisphereFingerprint,
    hemisphere_mask,
    invariant_part,
    partitioning_masses,
)
from .negative_type import distance_matrix
from .sphere_core import (
    DimensionError,
    as_points,
    as_unit,
    check_power,
    pairwise_angles,
    sample_uniform_array,
)

#: Total mass of the mixing measure on directions.
SIGMA_MASS = math.pi
#: Fingerprint components closer than this are treated as equal.
AGREE_TOL = 1e-12
#: Fingerprint components farther apart than this are treated as different.
DIFFER_TOL = 1e-9
MIN_SAMPLES = 100


@dataclass(frozen=True)
class MonteCarloEstimate:
    value: float
    std_error: float
    samples: int
    seed: int

    def to_dict(self) -> dict:
        return {"value": self.value, "std_error": self.std_error,
                "samples": self.samples, "seed": self.seed}


class Reconstruction(str, enum.Enum):
    SAME = "same"
    DIFFER = "differ"
    INCONCLUSIVE = "inconclusive"


def _estimate(values: np.ndarray, seed: int, scale: float) -> MonteCarloEstimate:
    # scale after averaging: the mean of a constant 0/1 array is exact
    n = values.size
    return MonteCarloEstimate(scale * float(values.mean()),
                              abs(scale) * float(values.std(ddof=1) / math.sqrt(n)),
                              n, seed)


def _directions(dim: int, samples: int, seed: int) -> np.ndarray:
    # Philox is counter based: the stream depends only on the seed.
    rng = np.random.Generator(np.random.Philox(seed))
    return sample_uniform_array(dim, samples, rng)


def mc_distance_identity(x, y, samples: int, seed: int) -> MonteCarloEstimate:
    """Estimate ``d(x, y)`` as pi times the fraction of separating poles.

    Examples
    --------
    >>> est = mc_distance_identity((1, 0), (-1, 0), samples=1000, seed=0)
    >>> est.value == math.pi
    True
    """
    if samples < MIN_SAMPLES:
        raise ValueError(f"samples must be >= {MIN_SAMPLES}")
    xc, yc = as_unit(x).coords, as_unit(y).coords
    if xc.size != yc.size:
        raise DimensionError(f"dimension mismatch: {xc.size} vs {yc.size}")
    t = _directions(xc.size, samples, seed)
    sep = (t @ xc > 0.0) != (t @ yc > 0.0)
    return _estimate(sep.astype(float), seed, SIGMA_MASS)


def energy_double_sum(m: DiscreteMeasure, r: float = 1.0) -> float:
    """``sum_ij w_i w_j d(a_i, a_j) ** r`` over the atoms of a signed measure."""
    if m.is_zero():
        return 0.0
    w = m.weights
    return float(w @ distance_matrix(m.atoms, r).entries @ w)


def mc_energy_identity(m1: DiscreteMeasure, m2: DiscreteMeasure,
                       samples: int, seed: int) -> tuple[float, MonteCarloEstimate]:
    """Both sides of the energy identity for two probability measures.

    Returns
    -------
    lhs : float
        The exact double sum of ``d`` against ``(m1 - m2) x (m1 - m2)``.
    rhs : MonteCarloEstimate
        ``-2 pi`` times the mean over uniform poles of the squared
        hemisphere-mass difference. ``std_error`` is the standard error of
        ``rhs.value`` itself, so it already includes the ``2 pi`` factor.
    """
    if samples < MIN_SAMPLES:
        raise ValueError(f"samples must be >= {MIN_SAMPLES}")
    for m in (m1, m2):
        if not m.is_probability():
            raise ValueError("energy identity needs probability measures")
    if m1.dim != m2.dim:
        raise DimensionError(f"dimension mismatch: {m1.dim} vs {m2.dim}")
    diff = m1 - m2
    lhs = energy_double_sum(diff)
    t = _directions(m1.dim, samples, seed)
    if diff.is_zero():
        gaps = np.zeros(samples)
    else:
        gaps = hemisphere_mask(diff.atoms, t).astype(float) @ diff.weights
    return lhs, _estimate(gaps ** 2, seed, -2.0 * SIGMA_MASS)


def expected_distance_profile(m: DiscreteMeasure, query_points,
                              r: float = 1.0) -> np.ndarray:
    """Expected distance ``sum_i w_i d(x, a_i) ** r`` at each query point."""
    r = check_power(r)
    q = as_points(query_points)
    if q.shape[1] != m.dim:
        raise DimensionError(f"dimension mismatch: {q.shape[1]} vs {m.dim}")
    if m.is_zero():
        return np.zeros(q.shape[0])
    return pairwise_angles(q, m.atoms, r) @ m.weights


def fingerprints_equal(f1: HemisphereFingerprint, f2: HemisphereFingerprint,
                       tol: float) -> bool:
    if f1.directions is not f2.directions and not (
            f1.directions.shape == f2.directions.shape
            and np.array_equal(f1.directions, f2.directions)):
        raise ValueError("fingerprints were taken over different directions")
    if f1.restricted_to != f2.restricted_to:
        raise ValueError("fingerprints use different restrictions")
    return bool(np.max(np.abs(np.asarray(f1.masses) - np.asarray(f2.masses)))
                <= tol)


def r_invariance_check(m: DiscreteMeasure, directions, tol: float) -> bool:
    """Whether ``m(H_t) == m(H_-t)`` within ``tol`` for every sampled ``t``.

    Only a finite-sample surrogate for R-invariance: agreement on a dense
    set of poles would be needed for a proof.
    """
    dirs = as_points(directions)
    if dirs.shape[1] != m.dim:
        raise DimensionError(f"dimension mismatch: {dirs.shape[1]} vs {m.dim}")
    if m.is_zero():
        return True
    plus = hemisphere_mask(m.atoms, dirs) @ m.weights
    minus = hemisphere_mask(m.atoms, -dirs) @ m.weights
    return bool(np.all(np.abs(plus - minus) <= tol))


def _atoms_match(m1: DiscreteMeasure, m2: DiscreteMeasure) -> bool:
    if len(m1) != len(m2):
        return False
    if len(m1) == 0:
        return True
    ang = pairwise_angles(m1.atoms, m2.atoms)
    for i in range(len(m1)):
        hits = np.flatnonzero(ang[i] <= ATOM_TOL)
        if hits.size != 1 or abs(m1.weights[i] - m2.weights[hits[0]]) > DIFFER_TOL:
            return False
    return True


def reconstruct_check(m1: DiscreteMeasure, m2: DiscreteMeasure,
                      directions) -> Reconstruction:
    """Compare two probability measures through partitioning-hemisphere masses.

    ``DIFFER`` when some sampled mass differs by more than ``DIFFER_TOL``.
    ``SAME`` when every mass agrees, neither measure has antipodally
    symmetric mass and the atoms match directly. Anything else is
    ``INCONCLUSIVE``: equal masses cannot identify a measure that carries
    symmetric mass.
    """
    for m in (m1, m2):
        if not m.is_probability():
            raise ValueError("reconstruct_check needs probability measures")
    dirs = as_points(directions)
    gap = np.abs(partitioning_masses(m1, dirs) - partitioning_masses(m2, dirs))
    if np.any(gap > DIFFER_TOL):
        return Reconstruction.DIFFER
    if (np.all(gap <= AGREE_TOL)
            and invariant_part(m1).is_zero()
            and invariant_part(m2).is_zero()
            and _atoms_match(m1, m2)):
        return Reconstruction.SAME
    return Reconstruction.INCONCLUSIVE
