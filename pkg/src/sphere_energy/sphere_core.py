"""Geometry on the unit sphere S^n embedded in R^(n+1).

Points are :class:`UnitVector` instances. Most functions also accept plain
array-likes of shape ``(n + 1,)``; bulk helpers work on ``(k, n + 1)``
arrays so the higher-level modules can stay vectorized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

#: Norm below which a coordinate vector is rejected as not a direction.
MIN_NORM = 1e-6
#: Norms this close to 1 are left alone, so renormalizing is idempotent.
UNIT_SLACK = 1e-15

ArrayLike = Union["UnitVector", Sequence[float], np.ndarray]


class DimensionError(ValueError):
    """Raised when points of different ambient dimension are combined."""


class DomainError(ValueError):
    """Raised when a point is outside the domain of a map."""


class UnitVector:
    """A point of S^n, stored as a read-only unit vector of length n + 1.

    Coordinates are renormalized on construction. Vectors with norm below
    ``MIN_NORM`` are rejected.
    """

    __slots__ = ("_coords",)

    def __init__(self, coords: Iterable[float]):
        arr = np.array(coords, dtype=float).reshape(-1)
        if arr.size < 2:
            raise ValueError("a unit vector needs at least 2 coordinates")
        if not np.all(np.isfinite(arr)):
            raise ValueError("coordinates must be finite")
        norm = np.linalg.norm(arr)
        if norm < MIN_NORM:
            raise ValueError(f"vector norm {norm:.3g} is below {MIN_NORM:g}")
        if abs(norm - 1.0) > UNIT_SLACK:
            arr = arr / norm
        arr.setflags(write=False)
        self._coords = arr

    @classmethod
    def _trusted(cls, arr: np.ndarray) -> "UnitVector":
        # arr must already be a unit vector; skips renormalization so that
        # exact negation stays exact.
        obj = cls.__new__(cls)
        arr = np.array(arr, dtype=float)
        arr.setflags(write=False)
        obj._coords = arr
        return obj

    @property
    def coords(self) -> np.ndarray:
        return self._coords

    @property
    def dim(self) -> int:
        """Ambient dimension n + 1."""
        return self._coords.size

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._coords.copy() if copy else self._coords
        return self._coords.astype(dtype)

    def __len__(self) -> int:
        return self._coords.size

    def __iter__(self):
        return iter(self._coords.tolist())

    def __neg__(self) -> "UnitVector":
        return reflect(self)

    def __eq__(self, other) -> bool:
        if not isinstance(other, UnitVector):
            return NotImplemented
        return bool(np.array_equal(self._coords, other._coords))

    def __hash__(self) -> int:
        return hash(self._coords.tobytes())

    def __repr__(self) -> str:
        inner = ", ".join(f"{c:.6g}" for c in self._coords)
        return f"UnitVector({inner})"


@dataclass(frozen=True)
class Hemisphere:
    """The open hemisphere ``{x : pole . x > 0}``."""

    pole: UnitVector

    def __post_init__(self):
        if not isinstance(self.pole, UnitVector):
            object.__setattr__(self, "pole", UnitVector(self.pole))

    def contains(self, x: ArrayLike) -> bool:
        return hemisphere_contains(self, x)


def check_power(r: float) -> float:
    """Validate a metric exponent; only ``0 < r <= 1`` is allowed."""
    r = float(r)
    if not 0.0 < r <= 1.0:
        raise ValueError(f"metric power must lie in (0, 1], got {r}")
    return r


def as_unit(x: ArrayLike) -> UnitVector:
    return x if isinstance(x, UnitVector) else UnitVector(x)


def as_points(points) -> np.ndarray:
    """Stack points into a ``(k, n + 1)`` float array of unit rows.

    UnitVector entries are used as-is; raw rows are renormalized with the
    same rules as :class:`UnitVector`.
    """
    if isinstance(points, np.ndarray) and points.ndim == 2:
        norms = np.linalg.norm(points, axis=1)
        if points.shape[1] < 2:
            raise ValueError("points need at least 2 coordinates")
        if not np.all(np.isfinite(norms)):
            raise ValueError("coordinates must be finite")
        if np.any(norms < MIN_NORM):
            raise ValueError(f"vector norm below {MIN_NORM:g}")
        off = np.abs(norms - 1.0) > UNIT_SLACK
        if not np.any(off):
            return np.asarray(points, dtype=float)
        out = np.array(points, dtype=float)
        out[off] /= norms[off, None]
        return out
    if len(points) == 0:
        raise ValueError("empty point list")
    if not any(isinstance(p, UnitVector) for p in points):
        try:
            arr = np.array(points, dtype=float)
        except ValueError:
            raise DimensionError("mixed point dimensions") from None
        if arr.ndim == 2:
            return as_points(arr)
    rows = [as_unit(p).coords for p in points]
    dims = {row.size for row in rows}
    if len(dims) != 1:
        raise DimensionError(f"mixed point dimensions {sorted(dims)}")
    return np.vstack(rows)


def to_unit_vectors(arr: np.ndarray) -> list[UnitVector]:
    return [UnitVector._trusted(row) for row in np.asarray(arr, dtype=float)]


def _check_same_dim(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape[-1] != b.shape[-1]:
        raise DimensionError(
            f"dimension mismatch: {a.shape[-1]} vs {b.shape[-1]}")


def pairwise_angles(a: np.ndarray, b: np.ndarray | None = None,
                    r: float = 1.0) -> np.ndarray:
    """Matrix of angular distances between the rows of ``a`` and ``b``.

    Uses ``2 * atan2(|x - y|, |x + y|)``, which equals ``arccos(x . y)``
    but keeps full precision near 0 and near pi, where arccos loses about
    half the significant digits.
    """
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = a if b is None else np.atleast_2d(np.asarray(b, dtype=float))
    _check_same_dim(a, b)
    diff = np.linalg.norm(a[:, None, :] - b[None, :, :], axis=-1)
    summ = np.linalg.norm(a[:, None, :] + b[None, :, :], axis=-1)
    ang = 2.0 * np.arctan2(diff, summ)
    np.clip(ang, 0.0, math.pi, out=ang)
    if r != 1.0:
        ang = ang ** check_power(r)
    return ang


def angular_distance(x: ArrayLike, y: ArrayLike, r: float = 1.0) -> float:
    """Geodesic distance ``arccos(x . y) ** r`` on the sphere.

    Parameters
    ----------
    x, y : UnitVector or array_like
        Points of the same sphere.
    r : float
        Metric exponent in (0, 1].

    Returns
    -------
    float
        A value in ``[0, pi ** r]``.

    Examples
    --------
    >>> angular_distance((1, 0), (-1, 0))
    3.141592653589793
    """
    r = check_power(r)
    xc, yc = as_unit(x).coords, as_unit(y).coords
    _check_same_dim(xc, yc)
    # same kernel as the matrix path so both agree bit for bit
    return float(pairwise_angles(xc, yc, r)[0, 0])


def reflect(x: ArrayLike) -> UnitVector:
    """The antipode ``-x``."""
    return UnitVector._trusted(-as_unit(x).coords)


def hemisphere_contains(h: Hemisphere, x: ArrayLike) -> bool:
    pole, xc = h.pole.coords, as_unit(x).coords
    _check_same_dim(pole, xc)
    return bool(float(pole @ xc) > 0.0)


def _first_nonzero_positive(arr: np.ndarray) -> np.ndarray:
    nz = arr != 0.0
    first = np.argmax(nz, axis=-1)
    return np.take_along_axis(arr, first[..., None], axis=-1)[..., 0] > 0.0


def partitioning_mask(pole: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Vectorized membership in the tie-broken partitioning hemisphere.

    A row belongs when ``pole . x > 0``, or when ``pole . x == 0`` and its
    first nonzero coordinate is positive. Exactly one of ``x`` and ``-x``
    is a member.
    """
    dots = points @ pole
    return (dots > 0.0) | ((dots == 0.0) & _first_nonzero_positive(points))


def partitioning_contains(pole: ArrayLike, x: ArrayLike) -> bool:
    p, xc = as_unit(pole).coords, as_unit(x).coords
    _check_same_dim(p, xc)
    return bool(partitioning_mask(p, xc[None, :])[0])


def householder_to_last_axis(pole: ArrayLike) -> np.ndarray:
    """Orthogonal symmetric matrix sending ``pole`` to the last basis vector."""
    p = as_unit(pole).coords
    e = np.zeros_like(p)
    e[-1] = 1.0
    v = p - e
    vv = float(v @ v)
    if vv == 0.0:
        return np.eye(p.size)
    return np.eye(p.size) - 2.0 * np.outer(v, v) / vv


def gnomonic_project(x: ArrayLike, pole: ArrayLike) -> np.ndarray:
    """Central projection of ``x`` onto the tangent plane ``{pole . y = 1}``.

    The result is expressed in coordinates where ``pole`` is the last
    axis (after the Householder reflection of
    :func:`householder_to_last_axis`), so its last entry is exactly 1.

    Raises
    ------
    DomainError
        If ``x`` is not in the open hemisphere around ``pole``.
    """
    xc, p = as_unit(x).coords, as_unit(pole).coords
    _check_same_dim(xc, p)
    if float(p @ xc) <= 0.0:
        raise DomainError("point not in open hemisphere")
    y = householder_to_last_axis(p) @ xc
    out = y / y[-1]
    out[-1] = 1.0
    return out


def gnomonic_inverse(y: Sequence[float], pole: ArrayLike) -> UnitVector:
    """Map a point of the tangent plane back to the sphere."""
    y = np.asarray(y, dtype=float)
    return UnitVector(householder_to_last_axis(pole) @ (y / np.linalg.norm(y)))


def projected_halfspace(t: ArrayLike, pole: ArrayLike) -> tuple[np.ndarray, float]:
    """Halfspace of the tangent plane that is the image of ``H_pole & H_t``.

    Returns ``(normal, offset)`` such that a projected point ``z`` (with
    ``z[-1] == 1``) lies in the image exactly when
    ``normal . z[:-1] + offset > 0``.
    """
    tt = householder_to_last_axis(pole) @ as_unit(t).coords
    return tt[:-1], float(tt[-1])


def sample_uniform_array(dim: int, count: int,
                         rng: np.random.Generator) -> np.ndarray:
    if dim < 2:
        raise ValueError(f"dim must be >= 2, got {dim}")
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    g = rng.standard_normal((count, dim))
    norms = np.linalg.norm(g, axis=1)
    # a zero Gaussian draw has probability zero; redraw defensively
    while np.any(norms < MIN_NORM):
        bad = norms < MIN_NORM
        g[bad] = rng.standard_normal((int(bad.sum()), dim))
        norms = np.linalg.norm(g, axis=1)
    return g / norms[:, None]


def sample_uniform(dim: int, count: int, seed: int) -> list[UnitVector]:
    """Draw ``count`` uniform points on S^(dim-1), reproducibly."""
    rng = np.random.default_rng(seed)
    return to_unit_vectors(sample_uniform_array(dim, count, rng))
