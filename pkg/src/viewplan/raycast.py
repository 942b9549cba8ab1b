"""Ray casting against triangle meshes through a bounding-volume hierarchy."""
from __future__ import annotations

import math

import numpy as np

from .mesh import TriangleMesh

_LEAF_SIZE = 8
_PARALLEL_EPS = 1e-12


def ray_triangle(origin, direction, v0, v1, v2) -> float | None:
    """Distance t >= 0 along the ray to the triangle, or None. Hits both sides."""
    e1 = v1 - v0
    e2 = v2 - v0
    pvec = np.cross(direction, e2)
    det = float(e1 @ pvec)
    if abs(det) < _PARALLEL_EPS:
        return None
    inv = 1.0 / det
    tvec = origin - v0
    u = float(tvec @ pvec) * inv
    if u < 0.0 or u > 1.0:
        return None
    qvec = np.cross(tvec, e1)
    v = float(direction @ qvec) * inv
    if v < 0.0 or u + v > 1.0:
        return None
    t = float(e2 @ qvec) * inv
    if t < 0.0:
        return None
    return t


class Bvh:
    """Median-split AABB tree over mesh triangles.

    Nodes live in flat arrays; `order` is the leaf-sorted triangle permutation.
    Traversal reports the same nearest hit a linear scan would (ties on t broken
    toward the lower triangle index), just faster.
    """

    def __init__(self, mesh: TriangleMesh):
        self.mesh = mesh
        tris = mesh.triangles
        self._v0 = mesh.vertices[tris[:, 0]]
        self._v1 = mesh.vertices[tris[:, 1]]
        self._v2 = mesh.vertices[tris[:, 2]]
        lo = np.minimum(np.minimum(self._v0, self._v1), self._v2)
        hi = np.maximum(np.maximum(self._v0, self._v1), self._v2)
        centers = (lo + hi) * 0.5

        self.order = np.arange(mesh.n_triangles)
        node_lo: list[np.ndarray] = []
        node_hi: list[np.ndarray] = []
        node_left: list[int] = []   # child index, or -1 for leaves
        node_right: list[int] = []
        node_start: list[int] = []  # leaf slice into order
        node_count: list[int] = []

        def build(start: int, count: int) -> int:
            idx = self.order[start : start + count]
            me = len(node_lo)
            node_lo.append(lo[idx].min(axis=0))
            node_hi.append(hi[idx].max(axis=0))
            node_left.append(-1)
            node_right.append(-1)
            node_start.append(start)
            node_count.append(count)
            if count > _LEAF_SIZE:
                spread = centers[idx].max(axis=0) - centers[idx].min(axis=0)
                axis = int(np.argmax(spread))
                # stable sort keeps the permutation deterministic under ties
                local = np.argsort(centers[idx, axis], kind="stable")
                self.order[start : start + count] = idx[local]
                half = count // 2
                node_left[me] = build(start, half)
                node_right[me] = build(start + half, count - half)
            return me

        build(0, mesh.n_triangles)
        self.node_lo = np.array(node_lo)
        self.node_hi = np.array(node_hi)
        self.node_left = node_left
        self.node_right = node_right
        self.node_start = node_start
        self.node_count = node_count

    def _slab(self, node: int, origin, inv_dir, t_max: float) -> float | None:
        """Entry distance of the ray into the node box, or None if it misses."""
        lo = self.node_lo[node]
        hi = self.node_hi[node]
        enter = 0.0
        exit_ = t_max
        for k in range(3):
            iv = inv_dir[k]
            if math.isinf(iv):
                # Ray parallel to this slab: 0 * inf would poison the interval
                # math, so test containment directly.
                if origin[k] < lo[k] or origin[k] > hi[k]:
                    return None
                continue
            t0 = (lo[k] - origin[k]) * iv
            t1 = (hi[k] - origin[k]) * iv
            if t0 > t1:
                t0, t1 = t1, t0
            if t0 > enter:
                enter = t0
            if t1 < exit_:
                exit_ = t1
            if enter > exit_:
                return None
        return enter

    def nearest_hit(self, origin, direction, t_max: float = np.inf) -> tuple[float, int] | None:
        """Closest intersection (t, triangle index) with t <= t_max, or None."""
        origin = np.asarray(origin, dtype=np.float64)
        direction = np.asarray(direction, dtype=np.float64)
        with np.errstate(divide="ignore"):
            inv_dir = 1.0 / direction
        best_t = t_max
        best_idx = -1
        stack = [0]
        while stack:
            node = stack.pop()
            enter = self._slab(node, origin, inv_dir, best_t)
            if enter is None:
                continue
            if self.node_left[node] < 0:
                s, c = self.node_start[node], self.node_count[node]
                for tri in self.order[s : s + c]:
                    t = ray_triangle(origin, direction, self._v0[tri], self._v1[tri], self._v2[tri])
                    if t is None or t > best_t:
                        continue
                    if t < best_t or best_idx < 0 or tri < best_idx:
                        best_t = t
                        best_idx = int(tri)
            else:
                stack.append(self.node_left[node])
                stack.append(self.node_right[node])
        if best_idx < 0:
            return None
        return best_t, best_idx

    def any_hit(self, origin, direction, t_min: float, t_max: float) -> bool:
        """True iff some triangle intersects the ray strictly inside (t_min, t_max)."""
        origin = np.asarray(origin, dtype=np.float64)
        direction = np.asarray(direction, dtype=np.float64)
        with np.errstate(divide="ignore"):
            inv_dir = 1.0 / direction
        stack = [0]
        while stack:
            node = stack.pop()
            if self._slab(node, origin, inv_dir, t_max) is None:
                continue
            if self.node_left[node] < 0:
                s, c = self.node_start[node], self.node_count[node]
                for tri in self.order[s : s + c]:
                    t = ray_triangle(origin, direction, self._v0[tri], self._v1[tri], self._v2[tri])
                    if t is not None and t_min < t < t_max:
                        return True
            else:
                stack.append(self.node_left[node])
                stack.append(self.node_right[node])
        return False


def build_bvh(mesh: TriangleMesh) -> Bvh:
    return Bvh(mesh)
