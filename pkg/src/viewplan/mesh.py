"""Indexed triangle meshes and coverage submeshes.

A submesh is a subset of a mesh's triangles with a cached surface area and
oriented boundary. Unions of submeshes update both caches incrementally, so
repeated candidate scoring never re-walks the whole triangle set.
"""
from __future__ import annotations

import hashlib
import math
from typing import Iterable, Iterator, NamedTuple

import numpy as np


class HalfEdge(NamedTuple):
    """Directed edge (tail -> head); direction follows the owning triangle's winding."""

    tail: int
    head: int

    def undirected(self) -> tuple[int, int]:
        return (self.tail, self.head) if self.tail < self.head else (self.head, self.tail)


def iter_bits(bits: int) -> Iterator[int]:
    """Yield the indices of set bits, ascending."""
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


def triangle_bits(indices: Iterable[int]) -> int:
    bits = 0
    for i in indices:
        bits |= 1 << i
    return bits


class TriangleMesh:
    """Immutable vertex/triangle arrays with precomputed per-triangle quantities.

    Every undirected edge may have at most two incident triangles, and a shared
    edge must appear with opposite direction in its two triangles (consistent
    winding). Degenerate triangles are kept and contribute zero area.
    """

    def __init__(self, vertices, triangles, normalization_scale: float = 1.0):
        vertices = np.ascontiguousarray(vertices, dtype=np.float64)
        triangles = np.ascontiguousarray(triangles, dtype=np.int64)
        if vertices.ndim != 2 or vertices.shape[1] != 3:
            raise ValueError(f"vertices must be (V, 3), got {vertices.shape}")
        if triangles.ndim != 2 or triangles.shape[1] != 3:
            raise ValueError(f"triangles must be (T, 3), got {triangles.shape}")
        if len(triangles) == 0:
            raise ValueError("mesh has no triangles")
        if triangles.min() < 0 or triangles.max() >= len(vertices):
            raise ValueError("triangle references a vertex out of range")
        same = (
            (triangles[:, 0] == triangles[:, 1])
            | (triangles[:, 1] == triangles[:, 2])
            | (triangles[:, 2] == triangles[:, 0])
        )
        if same.any():
            raise ValueError(f"triangle {int(np.argmax(same))} repeats a vertex")
        if not (normalization_scale > 0.0):
            raise ValueError(f"normalization_scale must be positive, got {normalization_scale}")

        self.vertices = vertices
        self.triangles = triangles
        self.normalization_scale = float(normalization_scale)

        v0 = vertices[triangles[:, 0]]
        v1 = vertices[triangles[:, 1]]
        v2 = vertices[triangles[:, 2]]
        cross = np.cross(v1 - v0, v2 - v0)
        self.triangle_area = 0.5 * np.linalg.norm(cross, axis=1)
        self.triangle_normal = cross  # unnormalized; winding decides the facing side
        self.triangle_centroid = (v0 + v1 + v2) / 3.0

        self._tri_rows = triangles.tolist()  # plain-int rows for boundary walks
        adjacency: dict[tuple[int, int], tuple[int, ...]] = {}
        direction_seen: dict[tuple[int, int], tuple[int, int]] = {}
        for t, (a, b, c) in enumerate(self._tri_rows):
            for u, v in ((a, b), (b, c), (c, a)):
                key = (u, v) if u < v else (v, u)
                incident = adjacency.get(key)
                if incident is None:
                    adjacency[key] = (t,)
                    direction_seen[key] = (u, v)
                elif len(incident) == 1:
                    if direction_seen[key] == (u, v):
                        raise ValueError(
                            f"edge {key} traversed twice in the same direction; inconsistent winding"
                        )
                    adjacency[key] = (incident[0], t)
                else:
                    raise ValueError(f"edge {key} has more than two incident triangles")
        self.edge_adjacency = adjacency
        self.edge_length = {
            key: float(np.linalg.norm(vertices[key[1]] - vertices[key[0]])) for key in adjacency
        }

        self._full_bits = (1 << len(triangles)) - 1
        self._digest: str | None = None

        self.vertices.setflags(write=False)
        self.triangles.setflags(write=False)
        self.triangle_area.setflags(write=False)
        self.triangle_normal.setflags(write=False)
        self.triangle_centroid.setflags(write=False)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_triangles(self) -> int:
        return len(self.triangles)

    @property
    def full_bits(self) -> int:
        return self._full_bits

    @property
    def bbox_diagonal(self) -> float:
        extent = self.vertices.max(axis=0) - self.vertices.min(axis=0)
        return float(np.linalg.norm(extent))

    def normalized(self) -> TriangleMesh:
        """Rescale so the bounding-box diagonal is exactly 1. Idempotent."""
        diag = self.bbox_diagonal
        if diag <= 0.0:
            raise ValueError("cannot normalize a mesh with zero extent")
        if abs(diag - 1.0) <= 1e-12:
            return self
        return TriangleMesh(self.vertices / diag, self.triangles, normalization_scale=1.0 / diag)

    @property
    def digest(self) -> str:
        """Content hash of the geometry as stored (hex sha256)."""
        if self._digest is None:
            h = hashlib.sha256()
            h.update(b"viewplan-mesh-v1")
            h.update(np.uint64(self.n_vertices).tobytes())
            h.update(np.uint64(self.n_triangles).tobytes())
            h.update(self.vertices.astype("<f8").tobytes())
            h.update(self.triangles.astype("<i8").tobytes())
            self._digest = h.hexdigest()
        return self._digest

    def area_of_bits(self, bits: int) -> float:
        total = 0.0
        for t in iter_bits(bits):
            total += self.triangle_area[t]
        return total

    def _check_bits(self, bits: int) -> None:
        if bits < 0 or bits >> self.n_triangles:
            raise ValueError("triangle bitset out of range for this mesh")


def brute_force_boundary(mesh: TriangleMesh, bits: int) -> frozenset[HalfEdge]:
    """Boundary of a triangle set by per-edge incidence counting.

    An edge is on the boundary iff exactly one in-set triangle is incident to
    it; its direction is that triangle's winding. Reference implementation for
    from-scratch construction; unions use the incremental rule instead.
    """
    mesh._check_bits(bits)
    tally: dict[tuple[int, int], list] = {}
    rows = mesh._tri_rows
    for t in iter_bits(bits):
        a, b, c = rows[t]
        for u, v in ((a, b), (b, c), (c, a)):
            key = (u, v) if u < v else (v, u)
            entry = tally.get(key)
            if entry is None:
                tally[key] = [1, (u, v)]
            else:
                entry[0] += 1
    return frozenset(HalfEdge(*he) for count, he in tally.values() if count == 1)


class Submesh:
    """Triangle subset with cached area and oriented boundary. Immutable."""

    __slots__ = ("mesh", "bits", "boundary", "area", "boundary_length")

    def __init__(self, mesh, bits, boundary, area, boundary_length):
        self.mesh = mesh
        self.bits = bits
        self.boundary = boundary
        self.area = area
        self.boundary_length = boundary_length

    @classmethod
    def empty(cls, mesh: TriangleMesh) -> Submesh:
        return cls(mesh, 0, frozenset(), 0.0, 0.0)

    @classmethod
    def from_triangles(cls, mesh: TriangleMesh, triangles) -> Submesh:
        """Build from a bitset or an iterable of triangle indices."""
        bits = triangles if isinstance(triangles, int) else triangle_bits(triangles)
        mesh._check_bits(bits)
        boundary = brute_force_boundary(mesh, bits)
        return cls(mesh, bits, boundary, mesh.area_of_bits(bits), _total_length(mesh, boundary))

    @property
    def count(self) -> int:
        return self.bits.bit_count()

    def triangle_indices(self) -> Iterator[int]:
        return iter_bits(self.bits)

    def __eq__(self, other):
        if not isinstance(other, Submesh):
            return NotImplemented
        return self.mesh is other.mesh and self.bits == other.bits

    def __hash__(self):
        return hash((id(self.mesh), self.bits))

    def __repr__(self):
        return f"Submesh({self.count} tris, area={self.area:.6g}, boundary_length={self.boundary_length:.6g})"


def _total_length(mesh: TriangleMesh, boundary: frozenset[HalfEdge]) -> float:
    length = mesh.edge_length
    return sum(length[he.undirected()] for he in boundary)


def _edge_of(mesh: TriangleMesh, bits: int, he: HalfEdge) -> bool:
    # Undirected membership: is this edge an edge of any in-set triangle?
    incident = mesh.edge_adjacency.get(he.undirected())
    if incident is None:
        return False
    for t in incident:
        if (bits >> t) & 1:
            return True
    return False


def union_boundary(x1: Submesh, x2: Submesh) -> frozenset[HalfEdge]:
    """Boundary of the union from the parts' boundaries alone.

    Keeps a part's boundary half-edge unless its undirected edge belongs to the
    other part, except that half-edges present in both boundaries with the same
    direction survive. Opposite-direction pairs (the seam between the parts)
    cancel, which is why direction matters here while the edge-of test does not.
    """
    if x1.mesh is not x2.mesh:
        raise ValueError("submeshes belong to different meshes")
    mesh = x1.mesh
    b1, b2 = x1.boundary, x2.boundary
    out = set()
    for he in b1:
        if he in b2 or not _edge_of(mesh, x2.bits, he):
            out.add(he)
    for he in b2:
        if he not in b1 and not _edge_of(mesh, x1.bits, he):
            out.add(he)
    return frozenset(out)


def union_coverage(x1: Submesh, x2: Submesh) -> Submesh:
    """Union of two submeshes with incrementally maintained area and boundary."""
    if x1.mesh is not x2.mesh:
        raise ValueError("submeshes belong to different meshes")
    if x2.bits | x1.bits == x1.bits:
        return x1
    if x1.bits | x2.bits == x2.bits:
        return x2
    mesh = x1.mesh
    new_bits = x2.bits & ~x1.bits
    area = x1.area + mesh.area_of_bits(new_bits)
    boundary = union_boundary(x1, x2)
    return Submesh(mesh, x1.bits | x2.bits, boundary, area, _total_length(mesh, boundary))


def score(x: Submesh, lam: float) -> float:
    """Covered area divided by boundary length to the power lam.

    lam = 0 ranks by area alone; larger lam penalizes long perimeters. A closed
    (boundary-free) nonempty submesh scores +inf for lam > 0: no perimeter left
    to pay for.
    """
    if lam < 0.0:
        raise ValueError(f"lam must be nonnegative, got {lam}")
    if x.bits == 0:
        raise ValueError("score is undefined for an empty submesh")
    if x.boundary_length == 0.0:
        return x.area if lam == 0.0 else math.inf
    return x.area / x.boundary_length**lam
