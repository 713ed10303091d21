"""Energy statistics with angular distances.

Distance covariance (V-statistic form), the two-sample energy distance,
permutation tests built on them, a goodness-of-fit test against a
sampled reference, and agglomerative clustering with energy linkage.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .sphere_core import (
    DimensionError,
    as_points,
    as_unit,
    check_power,
    pairwise_angles,
    sample_uniform_array,
)

MIN_PAIRED = 4
MIN_PERMUTATIONS = 99
#: Relative slack when counting permutation replicates as ties.
TIE_RTOL = 1e-12

ReferenceSampler = Callable[[int, int], np.ndarray]


@dataclass(frozen=True)
class PairedSample:
    xs: np.ndarray
    ys: np.ndarray

    def __post_init__(self):
        xs, ys = as_points(self.xs), as_points(self.ys)
        if xs.shape[0] != ys.shape[0]:
            raise ValueError(f"paired lists differ in length: "
                             f"{xs.shape[0]} vs {ys.shape[0]}")
        if xs.shape[0] < MIN_PAIRED:
            raise ValueError(f"need at least {MIN_PAIRED} pairs, "
                             f"got {xs.shape[0]}")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)

    def __len__(self) -> int:
        return self.xs.shape[0]


@dataclass(frozen=True)
class TestReport:
    statistic: float
    p_value: float
    replications: int
    seed: int
    method: str

    __test__ = False  # not a pytest class

    def to_dict(self) -> dict:
        return {"statistic": self.statistic, "p_value": self.p_value,
                "replications": self.replications, "seed": self.seed,
                "method": self.method}


@dataclass
class ClusterResult:
    """Cluster labels plus the merge history.

    Each merge is ``(cluster_a, cluster_b, height, size)`` with scipy-style
    cluster numbering.
    """

    labels: np.ndarray
    merges: list = field(default_factory=list)


def double_centered(a: np.ndarray) -> np.ndarray:
    """``a_ij - mean_i. - mean_.j + mean_..``"""
    row = a.mean(axis=1, keepdims=True)
    col = a.mean(axis=0, keepdims=True)
    return a - row - col + a.mean()


def _dcov_from_distances(a: np.ndarray, b: np.ndarray) -> float:
    n = a.shape[0]
    return float(np.sum(double_centered(a) * double_centered(b)) / (n * n))


def dcov_statistic(s: PairedSample, r: float = 1.0) -> float:
    """Squared distance covariance ``(1/n^2) sum_ij A_ij B_ij``.

    ``A`` and ``B`` are the double-centered angular distance matrices of
    the two marginals.
    """
    r = check_power(r)
    return _dcov_from_distances(pairwise_angles(s.xs, r=r),
                                pairwise_angles(s.ys, r=r))


def _replicate_seeds(seed: int, count: int):
    return np.random.SeedSequence(seed).spawn(count)


def _p_value(observed: float, replicates: np.ndarray) -> float:
    slack = TIE_RTOL * max(abs(observed), 1.0)
    hits = int(np.sum(replicates >= observed - slack))
    return (1 + hits) / (1 + replicates.size)


def _check_permutations(permutations: int) -> None:
    if permutations < MIN_PERMUTATIONS:
        raise ValueError(f"permutations must be >= {MIN_PERMUTATIONS}")


def independence_test(s: PairedSample, r: float = 1.0,
                      permutations: int = 999, seed: int = 0) -> TestReport:
    """Permutation test of independence based on :func:`dcov_statistic`.

    Each replicate shuffles ``ys`` with its own generator spawned from
    ``seed``, so the result does not depend on evaluation order.
    """
    r = check_power(r)
    _check_permutations(permutations)
    a = double_centered(pairwise_angles(s.xs, r=r))
    b = pairwise_angles(s.ys, r=r)
    n = len(s)
    observed = float(np.sum(a * double_centered(b)) / (n * n))
    reps = np.empty(permutations)
    for k, ss in enumerate(_replicate_seeds(seed, permutations)):
        p = np.random.default_rng(ss).permutation(n)
        reps[k] = np.sum(a * double_centered(b[np.ix_(p, p)])) / (n * n)
    return TestReport(observed, _p_value(observed, reps), permutations, seed,
                      "dcov-permutation")


def _energy_from_pooled(d: np.ndarray, in_a: np.ndarray) -> float:
    in_b = ~in_a
    return float(2.0 * d[np.ix_(in_a, in_b)].mean()
                 - d[np.ix_(in_a, in_a)].mean()
                 - d[np.ix_(in_b, in_b)].mean())


def _pool(a, b) -> tuple[np.ndarray, np.ndarray]:
    if len(a) == 0 or len(b) == 0:
        raise ValueError("energy distance needs two non-empty samples")
    pa, pb = as_points(a), as_points(b)
    if pa.shape[1] != pb.shape[1]:
        raise DimensionError(f"dimension mismatch: {pa.shape[1]} vs {pb.shape[1]}")
    return pa, pb


def energy_distance(a, b, r: float = 1.0) -> float:
    """V-statistic energy distance ``2 E d(A, B) - E d(A, A') - E d(B, B')``.

    Means run over all ordered pairs, diagonal included, so the value is
    the energy of the difference of the two empirical measures.
    """
    r = check_power(r)
    pa, pb = _pool(a, b)
    return float(2.0 * pairwise_angles(pa, pb, r).mean()
                 - pairwise_angles(pa, r=r).mean()
                 - pairwise_angles(pb, r=r).mean())


def two_sample_test(a, b, r: float = 1.0, permutations: int = 999,
                    seed: int = 0) -> TestReport:
    """Permutation test of equal distributions with the energy distance."""
    r = check_power(r)
    _check_permutations(permutations)
    pa, pb = _pool(a, b)
    if pa.shape[0] < 2 or pb.shape[0] < 2:
        raise ValueError("two-sample test needs at least 2 points per sample")
    pooled = np.vstack([pa, pb])
    d = pairwise_angles(pooled, r=r)
    in_a = np.zeros(pooled.shape[0], dtype=bool)
    in_a[:pa.shape[0]] = True
    observed = _energy_from_pooled(d, in_a)
    reps = np.empty(permutations)
    for k, ss in enumerate(_replicate_seeds(seed, permutations)):
        reps[k] = _energy_from_pooled(d, np.random.default_rng(ss).permutation(in_a))
    return TestReport(observed, _p_value(observed, reps), permutations, seed,
                      "energy-permutation")


def gof_test(sample, reference_sampler: ReferenceSampler, m: int,
             r: float = 1.0, permutations: int = 999,
             seed: int = 0) -> TestReport:
    """Goodness of fit as a two-sample test against ``m`` reference draws.

    The reference is ``reference_sampler(m, seed)``; permutations reuse
    ``seed`` as well.
    """
    n = len(sample)
    if m < n:
        raise ValueError(f"reference size m={m} is below sample size {n}")
    reference = reference_sampler(m, seed)
    report = two_sample_test(sample, reference, r, permutations, seed)
    return TestReport(report.statistic, report.p_value, report.replications,
                      seed, "energy-gof")


def uniform_sampler(dim: int) -> ReferenceSampler:
    """Reference sampler for the uniform distribution on S^(dim-1)."""
    def draw(count: int, seed: int) -> np.ndarray:
        return sample_uniform_array(dim, count, np.random.default_rng(seed))
    return draw


def _vmf_cosines(kappa: float, dim: int, count: int,
                 rng: np.random.Generator) -> np.ndarray:
    # Wood (1994) rejection sampler for w = mu . x.
    p = dim - 1
    b = p / (math.sqrt(4.0 * kappa ** 2 + p ** 2) + 2.0 * kappa)
    x0 = (1.0 - b) / (1.0 + b)
    c = kappa * x0 + p * math.log(1.0 - x0 ** 2)
    out = np.empty(count)
    filled = 0
    while filled < count:
        z = rng.beta(p / 2.0, p / 2.0)
        w = (1.0 - (1.0 + b) * z) / (1.0 - (1.0 - b) * z)
        u = rng.uniform()
        if kappa * w + p * math.log(1.0 - x0 * w) - c >= math.log(u):
            out[filled] = w
            filled += 1
    return out


def vmf_sampler(mean_direction, kappa: float) -> ReferenceSampler:
    """Reference sampler for the von Mises-Fisher distribution.

    The cosine to the mean direction comes from Wood's rejection scheme;
    the tangent part is a uniform direction orthogonal to the mean.
    """
    mu = as_unit(mean_direction).coords
    if kappa < 0:
        raise ValueError("kappa must be nonnegative")
    dim = mu.size

    def draw(count: int, seed: int) -> np.ndarray:
        rng = np.random.default_rng(seed)
        if kappa == 0:
            return sample_uniform_array(dim, count, rng)
        w = _vmf_cosines(kappa, dim, count, rng)
        v = rng.standard_normal((count, dim))
        v -= np.outer(v @ mu, mu)
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        pts = v * np.sqrt(np.clip(1.0 - w ** 2, 0.0, None))[:, None] + np.outer(w, mu)
        return pts / np.linalg.norm(pts, axis=1, keepdims=True)

    return draw


def _linkage(sums: dict, sizes: dict, i: int, j: int) -> float:
    ni, nj = sizes[i], sizes[j]
    between = sums[min(i, j), max(i, j)] / (ni * nj)
    return (ni * nj / (ni + nj)) * (
        2.0 * between - sums[i, i] / ni ** 2 - sums[j, j] / nj ** 2)


def energy_cluster(points, k: int, r: float = 1.0) -> ClusterResult:
    """Agglomerative clustering with energy linkage.

    The distance between clusters ``A`` and ``B`` is
    ``|A||B| / (|A| + |B|) * (2 mean d(A, B) - mean d(A, A) - mean d(B, B))``.
    Starting from singletons the closest pair merges until ``k`` clusters
    remain; ties go to the lexicographically smallest pair of cluster ids.
    Merged clusters get ids ``n, n + 1, ...`` as in scipy's linkage.

    Heights are recorded as computed. They need not increase: energy
    linkage is not monotone.
    """
    r = check_power(r)
    pts = as_points(points)
    n = pts.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in [1, {n}], got {k}")
    d = pairwise_angles(pts, r=r)
    members = {i: [i] for i in range(n)}
    sizes = {i: 1 for i in range(n)}
    sums = {(i, j): (d[i, j] if i != j else 0.0)
            for i in range(n) for j in range(i, n)}
    merges = []
    next_id = n
    while len(members) > k:
        ids = sorted(members)
        best = None
        for ai, i in enumerate(ids):
            for j in ids[ai + 1:]:
                h = _linkage(sums, sizes, i, j)
                if best is None or h < best[0]:
                    best = (h, i, j)
        h, i, j = best
        new = next_id
        next_id += 1
        members[new] = members.pop(i) + members.pop(j)
        sizes[new] = sizes.pop(i) + sizes.pop(j)
        sums[new, new] = sums[i, i] + sums[j, j] + 2.0 * sums[i, j]
        for o in members:
            if o == new:
                continue
            sums[o, new] = sums[min(o, i), max(o, i)] + sums[min(o, j), max(o, j)]
        merges.append((i, j, float(h), sizes[new]))
    labels = np.empty(n, dtype=int)
    # relabel 0..k-1 in order of each cluster's smallest member
    for label, cid in enumerate(sorted(members, key=lambda c: min(members[c]))):
        labels[members[cid]] = label
    return ClusterResult(labels, merges)
