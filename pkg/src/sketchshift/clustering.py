"""Seeded k-means (Lloyd's algorithm) and the elbow diagnostic.

The implementation is deliberately self-contained: deterministic
distance-weighted seeding, a fixed iteration cap, explicit empty-cluster
repair, and a per-iteration objective history that callers can assert on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import TooFewPoints

MAX_ITERATIONS = 300


@dataclass
class KMeansResult:
    centroids: np.ndarray       # (k, d)
    assignment: np.ndarray      # (n,) cluster slot per input vector
    wcss: float                 # within-cluster sum of squares at convergence
    wcss_history: list[float]   # objective after each Lloyd iteration
    iterations: int


@dataclass
class ElbowResult:
    points: list[tuple[int, float]]  # (k, wcss)
    elbow_k: int
    # False when the range is too short to evaluate a second difference
    elbow_defined: bool


def kmeans(vectors, k: int, seed: int) -> KMeansResult:
    """Cluster vectors into k groups.

    Iterates assignment / centroid updates until the assignment is stable or
    MAX_ITERATIONS is reached. Clusters that come up empty are repaired by
    donating the point currently farthest from its own centroid; the repair
    is folded into the update step so the objective still decreases through
    every recorded iteration. After Lloyd converges, a deterministic
    single-point exchange pass drains shallow local optima (its fixed points
    are also Lloyd-stable, and it only ever lowers the objective).
    """
    X = np.asarray(vectors, dtype=np.float64)
    if X.ndim != 2:
        X = X.reshape(len(X), -1)
    n = X.shape[0]
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if n < k:
        raise TooFewPoints(f"{n} vectors for k={k}")

    rng = np.random.default_rng(seed)
    centroids = _seed_centroids(X, k, rng)
    assignment = np.full(n, -1, dtype=np.int64)
    history: list[float] = []
    iterations = 0

    for _ in range(MAX_ITERATIONS):
        iterations += 1
        d2 = _sq_distances(X, centroids)
        new_assignment = d2.argmin(axis=1)

        centroids = _update_centroids(X, new_assignment, centroids, k)
        repaired = _repair_empty(X, new_assignment, centroids, k)

        wcss = float(_sq_distances(X, centroids)[np.arange(n), new_assignment].sum())
        history.append(wcss)

        converged = not repaired and np.array_equal(new_assignment, assignment)
        assignment = new_assignment
        if converged:
            break

    if _refine_exchanges(X, assignment, k):
        centroids = _update_centroids(X, assignment, centroids, k)
        history.append(
            float(_sq_distances(X, centroids)[np.arange(n), assignment].sum())
        )

    return KMeansResult(
        centroids=centroids,
        assignment=assignment,
        wcss=history[-1],
        wcss_history=history,
        iterations=iterations,
    )


def _seed_centroids(X: np.ndarray, k: int, rng) -> np.ndarray:
    """Distance-weighted seeding with a small greedy candidate pool.

    Each new center is drawn with probability proportional to squared
    distance from the nearest chosen center; a handful of candidates are
    sampled and the one minimizing the resulting potential wins.
    """
    n = X.shape[0]
    trials = 2 + int(math.log(k)) if k > 1 else 1
    chosen = [int(rng.integers(n))]
    for _ in range(1, k):
        d2 = _sq_distances(X, X[chosen]).min(axis=1)
        total = d2.sum()
        if total <= 0.0:
            # all remaining points coincide with existing centers
            chosen.append(int(rng.integers(n)))
            continue
        candidates = rng.choice(n, size=trials, p=d2 / total)
        best_c, best_potential = -1, np.inf
        for c in candidates:
            potential = np.minimum(d2, ((X - X[c]) ** 2).sum(axis=1)).sum()
            if potential < best_potential:
                best_potential, best_c = potential, int(c)
        chosen.append(best_c)
    return X[chosen].copy()


def _sq_distances(X: np.ndarray, centers: np.ndarray) -> np.ndarray:
    diff = X[:, None, :] - centers[None, :, :]
    return np.einsum("nkd,nkd->nk", diff, diff)


def _update_centroids(X, assignment, old, k) -> np.ndarray:
    centroids = old.copy()
    for j in range(k):
        members = assignment == j
        if members.any():
            centroids[j] = X[members].mean(axis=0)
    return centroids


def _repair_empty(X, assignment, centroids, k) -> bool:
    """Assign the globally worst-fitting point to each empty cluster.

    The donated point becomes its own centroid (zero contribution) and its
    former cluster's mean is recomputed, so the objective can only drop.
    """
    repaired = False
    for j in range(k):
        if (assignment == j).any():
            continue
        d = np.linalg.norm(X - centroids[assignment], axis=1)
        counts = np.bincount(assignment, minlength=k)
        d[counts[assignment] < 2] = -1.0  # never empty another cluster
        victim = int(d.argmax())
        source = assignment[victim]
        assignment[victim] = j
        centroids[j] = X[victim]
        still = assignment == source
        centroids[source] = X[still].mean(axis=0)
        repaired = True
    return repaired


def _refine_exchanges(X, assignment, k, max_passes: int = 50) -> bool:
    """Greedy single-point exchange refinement (Hartigan style).

    Moves one point at a time to whichever cluster lowers the objective the
    most, using size-corrected deltas: removing x from cluster a changes the
    objective by -|a|/(|a|-1) * d(x, mean_a)^2 and adding it to b by
    +|b|/(|b|+1) * d(x, mean_b)^2. Sweeps points in index order until a full
    pass makes no move. Returns True when anything changed.
    """
    n = X.shape[0]
    if k < 2 or n <= k:
        return False
    counts = np.bincount(assignment, minlength=k).astype(np.float64)
    sums = np.zeros((k, X.shape[1]))
    np.add.at(sums, assignment, X)
    moved_any = False
    for _ in range(max_passes):
        moved = False
        for i in range(n):
            a = assignment[i]
            if counts[a] < 2:
                continue
            means = sums / counts[:, None]
            d2 = ((means - X[i]) ** 2).sum(axis=1)
            gain_remove = -(counts[a] / (counts[a] - 1.0)) * d2[a]
            cost_add = (counts / (counts + 1.0)) * d2
            cost_add[a] = np.inf
            b = int(cost_add.argmin())
            if gain_remove + cost_add[b] < -1e-12:
                sums[a] -= X[i]
                counts[a] -= 1.0
                sums[b] += X[i]
                counts[b] += 1.0
                assignment[i] = b
                moved = moved_any = True
        if not moved:
            break
    return moved_any


def elbow_curve(vectors, k_min: int, k_max: int, seed: int) -> ElbowResult:
    """Run kmeans for each k in the inclusive range and locate the elbow.

    The elbow estimate is the k maximizing the discrete second difference of
    the WCSS curve. With fewer than three points the estimate is undefined
    and reported as the smallest k with ``elbow_defined=False``.
    """
    X = np.asarray(vectors, dtype=np.float64)
    n = X.shape[0]
    if k_min < 1 or k_max < k_min or k_max > n:
        raise ValueError(f"k range [{k_min}, {k_max}] invalid for {n} vectors")
    points = [(k, kmeans(X, k, seed).wcss) for k in range(k_min, k_max + 1)]
    if len(points) < 3:
        return ElbowResult(points=points, elbow_k=points[0][0], elbow_defined=False)
    w = [p[1] for p in points]
    second = [w[i - 1] - 2.0 * w[i] + w[i + 1] for i in range(1, len(w) - 1)]
    best = max(range(len(second)), key=lambda i: second[i])
    return ElbowResult(points=points, elbow_k=points[best + 1][0], elbow_defined=True)
