"""Finitely supported signed measures on S^n.

A :class:`DiscreteMeasure` is a list of distinct atoms with real weights.
Besides hemisphere masses it supports the reflection ``R: x -> -x`` and
the decompositions built on it: the antisymmetric part
``theta - R_* theta`` and the largest R-invariant minorant of a positive
measure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .sphere_core import (
    DimensionError,
    Hemisphere,
    UnitVector,
    as_points,
    as_unit,
    pairwise_angles,
    partitioning_mask,
    sample_uniform_array,
    to_unit_vectors,
)

#: Angular tolerance for merging atoms and for pairing antipodes.
ATOM_TOL = 1e-9
#: Tolerance on total mass for a probability measure.
MASS_TOL = 1e-12
#: Distance from a great sphere an atom must keep to count as off it.
BOUNDARY_TOL = 1e-12


def _merge_atoms(atoms: np.ndarray, weights: np.ndarray):
    """Merge atoms closer than ``ATOM_TOL``; first occurrence keeps its coords."""
    if atoms.shape[0] <= 1:
        return atoms, weights
    close = pairwise_angles(atoms) <= ATOM_TOL
    keep, merged = [], []
    owner = np.full(atoms.shape[0], -1)
    for i in range(atoms.shape[0]):
        if owner[i] >= 0:
            continue
        group = np.flatnonzero(close[i] & (owner < 0))
        owner[group] = len(keep)
        keep.append(i)
        merged.append(weights[group].sum())
    return atoms[keep], np.array(merged, dtype=float)


class DiscreteMeasure:
    """Finitely supported signed measure on a sphere.

    Parameters
    ----------
    atoms : sequence of UnitVector or (k, n + 1) array
        Support points. Atoms within angular distance ``ATOM_TOL`` are
        merged, adding their weights.
    weights : sequence of float, optional
        Mass at each atom; uniform ``1 / k`` when omitted. Atoms whose
        (merged) weight is exactly zero are dropped.
    dim : int, optional
        Ambient dimension, required only for an empty measure.
    """

    __slots__ = ("_atoms", "_weights", "_dim")

    def __init__(self, atoms, weights=None, dim: Optional[int] = None):
        if len(atoms) == 0:
            if dim is None:
                raise ValueError("an empty measure needs an explicit dim")
            arr = np.zeros((0, dim))
            w = np.zeros(0)
        else:
            arr = as_points(atoms)
            if weights is None:
                w = np.full(arr.shape[0], 1.0 / arr.shape[0])
            else:
                w = np.asarray(weights, dtype=float).reshape(-1)
                if w.size != arr.shape[0]:
                    raise ValueError(
                        f"{arr.shape[0]} atoms but {w.size} weights")
                if not np.all(np.isfinite(w)):
                    raise ValueError("weights must be finite")
            if dim is not None and dim != arr.shape[1]:
                raise DimensionError(f"atoms have dim {arr.shape[1]}, not {dim}")
            arr, w = _merge_atoms(arr, w)
            nz = w != 0.0
            arr, w = arr[nz], w[nz]
        arr = np.array(arr, dtype=float)
        arr.setflags(write=False)
        w.setflags(write=False)
        self._atoms = arr
        self._weights = w
        self._dim = arr.shape[1]

    @classmethod
    def zero(cls, dim: int) -> "DiscreteMeasure":
        return cls([], dim=dim)

    @classmethod
    def dirac(cls, x) -> "DiscreteMeasure":
        return cls([as_unit(x)], [1.0])

    @property
    def atoms(self) -> np.ndarray:
        """Atom coordinates as a read-only ``(k, n + 1)`` array."""
        return self._atoms

    @property
    def weights(self) -> np.ndarray:
        return self._weights

    @property
    def dim(self) -> int:
        return self._dim

    def atom_list(self) -> list[UnitVector]:
        return to_unit_vectors(self._atoms)

    def __len__(self) -> int:
        return self._weights.size

    def total_mass(self) -> float:
        return float(self._weights.sum())

    def total_variation(self) -> float:
        return float(np.abs(self._weights).sum())

    def is_positive(self) -> bool:
        return bool(np.all(self._weights >= 0.0))

    def is_probability(self) -> bool:
        return self.is_positive() and abs(self.total_mass() - 1.0) <= MASS_TOL

    def is_zero(self) -> bool:
        return self._weights.size == 0

    def positive_part(self) -> "DiscreteMeasure":
        keep = self._weights > 0.0
        return DiscreteMeasure(self._atoms[keep], self._weights[keep],
                               dim=self._dim)

    def negative_part(self) -> "DiscreteMeasure":
        keep = self._weights < 0.0
        return DiscreteMeasure(self._atoms[keep], -self._weights[keep],
                               dim=self._dim)

    def weight_at(self, x) -> float:
        """Mass of the atom matching ``x`` (0 if there is none)."""
        if self.is_zero():
            return 0.0
        ang = pairwise_angles(as_unit(x).coords, self._atoms)[0]
        hit = np.flatnonzero(ang <= ATOM_TOL)
        return float(self._weights[hit].sum())

    def _combine(self, other: "DiscreteMeasure", sign: float) -> "DiscreteMeasure":
        if other.dim != self.dim:
            raise DimensionError(f"dimension mismatch: {self.dim} vs {other.dim}")
        atoms = np.vstack([self._atoms, other._atoms])
        weights = np.concatenate([self._weights, sign * other._weights])
        if atoms.shape[0] == 0:
            return DiscreteMeasure.zero(self.dim)
        return DiscreteMeasure(atoms, weights, dim=self.dim)

    def __add__(self, other: "DiscreteMeasure") -> "DiscreteMeasure":
        return self._combine(other, 1.0)

    def __sub__(self, other: "DiscreteMeasure") -> "DiscreteMeasure":
        return self._combine(other, -1.0)

    def __neg__(self) -> "DiscreteMeasure":
        return self.scale(-1.0)

    def scale(self, c: float) -> "DiscreteMeasure":
        if self.is_zero():
            return self
        return DiscreteMeasure(self._atoms, c * self._weights, dim=self.dim)

    __rmul__ = scale

    def allclose(self, other: "DiscreteMeasure", atol: float = 1e-12) -> bool:
        """Atomwise comparison, ignoring atom order."""
        diff = self - other
        return bool(np.all(np.abs(diff.weights) <= atol))

    def __repr__(self) -> str:
        items = ", ".join(
            "(" + ", ".join(f"{c:.4g}" for c in a) + f"): {w:.6g}"
            for a, w in zip(self._atoms, self._weights))
        return f"DiscreteMeasure({{{items}}})"


@dataclass(frozen=True)
class HemisphereFingerprint:
    """Hemisphere masses of a measure over a finite sample of poles.

    ``masses[k]`` is the mass of ``H_{directions[k]}``, intersected with
    ``restricted_to`` when that is set.
    """

    directions: np.ndarray
    masses: np.ndarray
    restricted_to: Optional[Hemisphere] = None

    def __post_init__(self):
        if len(self.directions) != len(self.masses):
            raise ValueError("directions and masses differ in length")

    def __len__(self) -> int:
        return len(self.masses)


def _check_dim(m: DiscreteMeasure, pole: np.ndarray) -> None:
    if pole.shape[-1] != m.dim:
        raise DimensionError(f"dimension mismatch: {pole.shape[-1]} vs {m.dim}")


def pushforward_reflect(m: DiscreteMeasure) -> DiscreteMeasure:
    """Image of ``m`` under ``x -> -x``."""
    if m.is_zero():
        return m
    return DiscreteMeasure(-m.atoms, m.weights, dim=m.dim)


def antisymmetrize(m: DiscreteMeasure) -> DiscreteMeasure:
    """The antisymmetric measure ``m - R_* m``; its total mass is 0."""
    return m - pushforward_reflect(m)


def invariant_part(m: DiscreteMeasure) -> DiscreteMeasure:
    """Largest R-invariant measure below the positive measure ``m``.

    Each antipodal pair of atoms ``{x, -x}`` keeps ``min(m{x}, m{-x})`` on
    both points; unpaired atoms are dropped.

    Raises
    ------
    ValueError
        If ``m`` has a negative weight.
    """
    if not m.is_positive():
        raise ValueError("invariant part defined for positive measures")
    if m.is_zero():
        return m
    anti = pairwise_angles(m.atoms, -m.atoms) <= ATOM_TOL
    weights = np.zeros(len(m))
    for i, j in zip(*np.nonzero(anti)):
        if i != j:
            weights[i] = min(m.weights[i], m.weights[j])
    return DiscreteMeasure(m.atoms, weights, dim=m.dim)


def hemisphere_mask(atoms: np.ndarray, poles: np.ndarray,
                    restriction: Optional[Hemisphere] = None) -> np.ndarray:
    """Boolean ``(poles, atoms)`` matrix of strict membership ``t . x > 0``."""
    mask = (np.atleast_2d(poles) @ atoms.T) > 0.0
    if restriction is not None:
        mask &= (atoms @ restriction.pole.coords > 0.0)[None, :]
    return mask


def hemisphere_mass(m: DiscreteMeasure, pole,
                    restriction: Optional[Hemisphere] = None) -> float:
    """Mass of the open hemisphere ``H_pole``, optionally intersected with
    ``restriction``."""
    p = as_unit(pole).coords
    _check_dim(m, p)
    if restriction is not None:
        _check_dim(m, restriction.pole.coords)
    if m.is_zero():
        return 0.0
    return float(hemisphere_mask(m.atoms, p, restriction)[0] @ m.weights)


def partitioning_mass(m: DiscreteMeasure, pole) -> float:
    """Mass of the tie-broken partitioning hemisphere with the given pole."""
    p = as_unit(pole).coords
    _check_dim(m, p)
    if m.is_zero():
        return 0.0
    return float(partitioning_mask(p, m.atoms) @ m.weights)


def partitioning_masses(m: DiscreteMeasure, poles: np.ndarray) -> np.ndarray:
    poles = np.atleast_2d(np.asarray(poles, dtype=float))
    _check_dim(m, poles)
    if m.is_zero():
        return np.zeros(poles.shape[0])
    return np.array([partitioning_mask(p, m.atoms) @ m.weights for p in poles])


def fingerprint(m: DiscreteMeasure, directions,
                restriction: Optional[Hemisphere] = None) -> HemisphereFingerprint:
    """Hemisphere masses of ``m`` at every direction.

    Raises
    ------
    ValueError
        If ``directions`` is empty.
    """
    if len(directions) == 0:
        raise ValueError("fingerprint needs at least one direction")
    dirs = as_points(directions)
    _check_dim(m, dirs)
    if restriction is not None:
        _check_dim(m, restriction.pole.coords)
    if m.is_zero():
        masses = np.zeros(dirs.shape[0])
    else:
        masses = hemisphere_mask(m.atoms, dirs, restriction) @ m.weights
    dirs.setflags(write=False)
    masses.setflags(write=False)
    return HemisphereFingerprint(dirs, masses, restriction)


def find_null_great_sphere(ms: Sequence[DiscreteMeasure], seed: int,
                           max_draws: int = 100) -> UnitVector:
    """Pole of a great sphere carrying no atom of any of the measures.

    Uniform random poles miss every atom's great sphere almost surely; up
    to ``max_draws`` are tried before deterministic perturbations of the
    last draw.

    Raises
    ------
    ValueError
        If no measures are given or every attempt touches an atom
        ("degenerate support").
    """
    if len(ms) == 0:
        raise ValueError("need at least one measure")
    dim = ms[0].dim
    for m in ms:
        if m.dim != dim:
            raise DimensionError("measures live on different spheres")
    atoms = np.vstack([m.atoms for m in ms])
    rng = np.random.default_rng(seed)

    def clear(u):
        return atoms.shape[0] == 0 or bool(np.all(np.abs(atoms @ u) > BOUNDARY_TOL))

    u = None
    for _ in range(max_draws):
        u = sample_uniform_array(dim, 1, rng)[0]
        if clear(u):
            return UnitVector._trusted(u)
    for k in range(dim):
        for step in (1e-3, -1e-3, 1e-1, -1e-1):
            v = u.copy()
            v[k] += step
            v /= np.linalg.norm(v)
            if clear(v):
                return UnitVector._trusted(v)
    raise ValueError("degenerate support")


def random_probability(atom_count: int, dim: int, rng: np.random.Generator,
                       pole: Optional[np.ndarray] = None) -> DiscreteMeasure:
    """Random probability measure with Dirichlet(1) weights.

    With ``pole`` set, atoms are drawn uniformly from the open hemisphere
    around it.
    """
    atoms = sample_uniform_array(dim, atom_count, rng)
    if pole is not None:
        dots = atoms @ pole
        atoms[dots < 0] *= -1.0
    weights = rng.dirichlet(np.ones(atom_count))
    return DiscreteMeasure(atoms, weights)
