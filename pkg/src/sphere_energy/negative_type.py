"""Negative type of the angular metric on finite point sets.

For points ``x_1..x_n`` and weights ``alpha`` with ``sum(alpha) == 0`` the
form ``sum_ij alpha_i alpha_j d(x_i, x_j)`` is never positive on a sphere.
Strictness (the form vanishing only at ``alpha == 0``) fails exactly when
the set holds two or more antipodal pairs; :func:`strictness_certificate`
decides it from the spectrum of the form on the sum-zero subspace.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .measures import ATOM_TOL
from .sphere_core import as_points, check_power, pairwise_angles

#: Largest restricted eigenvalue still counted as strictly negative.
STRICT_THRESHOLD = -1e-10
#: Restricted eigenvalue above which the form is called indefinite.
INDEFINITE_THRESHOLD = 1e-10


class Verdict(str, enum.Enum):
    STRICTLY_NEGATIVE = "strictly_negative"
    NULL_DIRECTION_FOUND = "null_direction_found"
    INDEFINITE = "indefinite"


@dataclass(frozen=True)
class DistanceMatrix:
    entries: np.ndarray
    points: np.ndarray
    r: float = 1.0

    def __len__(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class StrictnessCertificate:
    max_restricted_eigenvalue: float
    verdict: Verdict
    witness: Optional[np.ndarray] = None

    def to_dict(self) -> dict:
        return {
            "max_restricted_eigenvalue": self.max_restricted_eigenvalue,
            "verdict": self.verdict.value,
            "witness": None if self.witness is None else self.witness.tolist(),
        }


def distance_matrix(points, r: float = 1.0) -> DistanceMatrix:
    """Pairwise angular distances ``d(x_i, x_j) ** r``."""
    r = check_power(r)
    pts = as_points(points)
    d = pairwise_angles(pts, r=r)
    d = 0.5 * (d + d.T)
    np.fill_diagonal(d, 0.0)
    d.setflags(write=False)
    pts.setflags(write=False)
    return DistanceMatrix(d, pts, r)


def quadratic_form(dm: DistanceMatrix, alpha) -> float:
    """Evaluate ``alpha^T D alpha``.

    A warning is issued when ``alpha`` does not sum to zero; the value is
    returned regardless.
    """
    alpha = np.asarray(alpha, dtype=float).reshape(-1)
    if alpha.size != len(dm):
        raise ValueError(f"alpha has length {alpha.size}, matrix is {len(dm)}")
    if abs(alpha.sum()) > 1e-9:
        warnings.warn(f"alpha sums to {alpha.sum():.3g}, not 0", stacklevel=2)
    return float(alpha @ dm.entries @ alpha)


def sum_zero_basis(n: int) -> np.ndarray:
    """Orthonormal ``(n, n - 1)`` basis of ``{a : sum(a) == 0}``.

    The columns are the last ``n - 1`` columns of the Householder
    reflection that swaps ``e_1`` and ``ones / sqrt(n)``.
    """
    v = np.full(n, 1.0 / math.sqrt(n))
    v[0] -= 1.0
    h = np.eye(n) - 2.0 * np.outer(v, v) / (v @ v)
    return h[:, 1:]


def strictness_certificate(dm: DistanceMatrix) -> StrictnessCertificate:
    """Spectral certificate for strict negative type of the point set.

    The maximum of ``alpha^T D alpha`` over unit sum-zero ``alpha`` is the
    top eigenvalue of ``Q^T D Q`` for an orthonormal basis ``Q`` of the
    sum-zero subspace, which is the same as the top eigenvalue of
    ``P D P`` after dropping the constant eigenvector.

    Raises
    ------
    ValueError
        If two of the points coincide (within ``ATOM_TOL``).
    """
    n = len(dm)
    if n > 1:
        off = dm.entries if dm.r == 1.0 else pairwise_angles(dm.points)
        if np.min(off + np.diag(np.full(n, np.inf))) <= ATOM_TOL:
            raise ValueError("strictness undefined with repeated points")
    if n == 1:
        return StrictnessCertificate(-math.inf, Verdict.STRICTLY_NEGATIVE)
    q = sum_zero_basis(n)
    vals, vecs = np.linalg.eigh(q.T @ dm.entries @ q)
    top = float(vals[-1])
    witness = q @ vecs[:, -1]
    witness -= witness.mean()
    witness /= np.linalg.norm(witness)
    if top < STRICT_THRESHOLD:
        verdict = Verdict.STRICTLY_NEGATIVE
    elif top > INDEFINITE_THRESHOLD:
        verdict = Verdict.INDEFINITE
    else:
        verdict = Verdict.NULL_DIRECTION_FOUND
    return StrictnessCertificate(top, verdict, witness)


def antipodal_pairs(points) -> list[tuple[int, int]]:
    """Index pairs ``(i, j)``, ``i < j``, at distance above ``pi - 1e-9``."""
    pts = as_points(points)
    d = pairwise_angles(pts)
    i, j = np.nonzero(np.triu(d > math.pi - ATOM_TOL, 1))
    return [(int(a), int(b)) for a, b in zip(i, j)]
