"""The homothety-class distance, distance matrices, balls and spheres."""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .chain_ring import BudgetExceeded, ChainRing
from .submodule import (
    HomothetyClass,
    Submodule,
    enumerate_classes,
    enumerate_submodules,
    full_module,
    intersect,
    is_boundary,
    is_subset,
    scale_pi,
    tilde,
)


def _require_same(c1: HomothetyClass, c2: HomothetyClass):
    if c1.rep.ring != c2.rep.ring or c1.rep.d != c2.rep.d:
        raise ValueError("classes live in different ambient modules")


def n_value(c1: HomothetyClass, c2: HomothetyClass) -> int:
    """Least ``m`` with ``pi^m rep(c1)`` inside ``rep(c2)``."""
    _require_same(c1, c2)
    A, B = c1.rep, c2.rep
    if A == B:
        return 0
    for m in range(A.ring.r + 1):
        if is_subset(scale_pi(A, m), B):
            return m
    raise AssertionError("pi^r kills every module")  # pragma: no cover


def dist(c1: HomothetyClass, c2: HomothetyClass) -> int:
    return n_value(c1, c2) + n_value(c2, c1)


def dist_to_set(c: HomothetyClass, M: Iterable[HomothetyClass]) -> int:
    M = list(M)
    if not M:
        raise ValueError("distance to an empty set")
    return min(dist(c, other) for other in M)


@dataclass
class DistanceMatrix:
    """Half-distance matrix ``N`` and distance matrix ``D = N + N^T``."""

    N: np.ndarray
    labels: list[str] | None = None

    @property
    def D(self) -> np.ndarray:
        return self.N + self.N.T

    @property
    def size(self) -> int:
        return self.N.shape[0]

    def min_distance(self) -> int:
        D = self.D
        pos = D[D > 0]
        if pos.size == 0:
            raise ValueError("minimum distance needs at least two distinct classes")
        return int(pos.min())

    def to_csv(self) -> str:
        return "\n".join(",".join(str(int(x)) for x in row) for row in self.D) + "\n"

    def to_json(self) -> dict:
        labels = self.labels or [str(i) for i in range(self.size)]
        return {"labels": labels, "N": self.N.tolist(), "D": self.D.tolist()}

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def _pack(reps: Sequence[Submodule]):
    n = len(reps)
    d = reps[0].d
    gens = np.zeros((n, d, d), dtype=np.int64)
    nrows = np.zeros(n, dtype=np.int64)
    pivcols = np.zeros((n, d), dtype=np.int64)
    pivvals = np.zeros((n, d), dtype=np.int64)
    for i, U in enumerate(reps):
        nrows[i] = len(U.rows)
        for t, (row, (c, v)) in enumerate(zip(U.rows, U.pivots)):
            gens[i, t] = row
            pivcols[i, t] = c
            pivvals[i, t] = v
    return gens, nrows, pivcols, pivvals


def half_distance_table(reps: Sequence[Submodule], backend=None) -> np.ndarray:
    """``N[i, j]`` over tilde representatives, through a kernel backend when the ring is small."""
    n = len(reps)
    if n == 0:
        return np.zeros((0, 0), dtype=np.int64)
    ring = reps[0].ring
    impl = backend or kernels
    try:
        add, mul, neg, val = ring.tables()
    except BudgetExceeded:
        impl = None
    if impl is None:
        classes = [HomothetyClass(U, 0) for U in reps]
        N = np.zeros((n, n), dtype=np.int64)
        for i in range(n):
            for j in range(n):
                if i != j:
                    N[i, j] = n_value(classes[i], classes[j])
        return N
    arr = lambda t: np.ascontiguousarray(np.asarray(t, dtype=np.int64))  # noqa: E731
    return impl.half_distance(*_pack(reps), arr(add), arr(mul), arr(neg), arr(val), ring.q, ring.r)


def half_distance_matrix(classes: Sequence[HomothetyClass], backend=None) -> DistanceMatrix:
    classes = list(classes)
    N = half_distance_table([c.rep for c in classes], backend)
    return DistanceMatrix(N, [str(i) for i in range(len(classes))])


def min_distance(classes: Sequence[HomothetyClass]) -> int:
    classes = list(classes)
    if len(set(c.rep for c in classes)) < 2:
        raise ValueError("minimum distance needs at least two distinct classes")
    value = half_distance_matrix(classes).min_distance()
    if all(c.class_size == 1 for c in classes):
        assert value <= 2 * classes[0].ring.r, "spherical codes have min distance at most 2r"
    return value


def all_classes(ring: ChainRing, d: int, budget: int | None = None) -> list[HomothetyClass]:
    """All of ``L^0(V_r)`` sorted by canonical form."""
    return sorted(enumerate_classes(ring, d, budget))


def _center(ring: ChainRing, d: int) -> HomothetyClass:
    return HomothetyClass(full_module(ring, d), ring.r + 1)


def sphere(ring: ChainRing, d: int, ell: int, budget: int | None = None) -> list[HomothetyClass]:
    """Classes at distance exactly ``ell`` from ``[V_r]``.

    Computed by distance and checked against the class-size description
    (class size ``r - ell + 1``) obtained by grouping every submodule by its
    tilde representative.
    """
    r = ring.r
    if not 0 <= ell <= r:
        raise ValueError(f"radius {ell} outside 0..{r}")
    center = _center(ring, d)
    by_dist = sorted(c for c in enumerate_classes(ring, d, budget) if dist(c, center) == ell)
    sizes: dict[Submodule, int] = {}
    for U in enumerate_submodules(ring, d, budget):
        rep = tilde(U)
        sizes[rep] = sizes.get(rep, 0) + 1
    by_size = sorted(rep for rep, s in sizes.items() if s == r - ell + 1)
    if [c.rep for c in by_dist] != by_size:
        raise AssertionError("distance and class-size descriptions of the sphere disagree")
    return by_dist


def ball(ring: ChainRing, d: int, ell: int, budget: int | None = None) -> list[HomothetyClass]:
    r = ring.r
    if not 0 <= ell <= r:
        raise ValueError(f"radius {ell} outside 0..{r}")
    center = _center(ring, d)
    return sorted(c for c in enumerate_classes(ring, d, budget) if dist(c, center) <= ell)


def is_max_distance_pair(c1: HomothetyClass, c2: HomothetyClass) -> bool:
    """Both boundary, and ``pi^(r-1) U_i`` not inside ``U_1 & U_2`` for ``i = 1, 2``."""
    _require_same(c1, c2)
    U1, U2 = c1.rep, c2.rep
    if not (is_boundary(U1) and is_boundary(U2)):
        return False
    meet = intersect(U1, U2)
    r = U1.ring.r
    return not is_subset(scale_pi(U1, r - 1), meet) and not is_subset(scale_pi(U2, r - 1), meet)


def tropical_distance(delta: Sequence[int], eps: Sequence[int]) -> int:
    """``max_i(delta_i - eps_i) - min_i(delta_i - eps_i)``."""
    diff = [a - b for a, b in zip(delta, eps)]
    return max(diff) - min(diff)
