"""Procedural test geometry: unit icosphere and planar grids."""
from __future__ import annotations

import numpy as np

from .mesh import TriangleMesh

_PHI = (1.0 + 5.0**0.5) / 2.0

_ICO_VERTS = [
    (-1, _PHI, 0), (1, _PHI, 0), (-1, -_PHI, 0), (1, -_PHI, 0),
    (0, -1, _PHI), (0, 1, _PHI), (0, -1, -_PHI), (0, 1, -_PHI),
    (_PHI, 0, -1), (_PHI, 0, 1), (-_PHI, 0, -1), (-_PHI, 0, 1),
]

_ICO_FACES = [
    (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
    (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
    (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
    (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
]


def icosphere(subdivisions: int = 0) -> TriangleMesh:
    """Unit sphere from a subdivided icosahedron: 20 * 4**subdivisions triangles."""
    if subdivisions < 0:
        raise ValueError("subdivisions must be nonnegative")
    verts = [np.array(v, dtype=np.float64) for v in _ICO_VERTS]
    verts = [v / np.linalg.norm(v) for v in verts]
    faces = list(_ICO_FACES)
    for _ in range(subdivisions):
        midpoint: dict[tuple[int, int], int] = {}

        def mid(i, j):
            key = (i, j) if i < j else (j, i)
            idx = midpoint.get(key)
            if idx is None:
                m = verts[i] + verts[j]
                verts.append(m / np.linalg.norm(m))
                idx = len(verts) - 1
                midpoint[key] = idx
            return idx

        split = []
        for a, b, c in faces:
            ab, bc, ca = mid(a, b), mid(b, c), mid(c, a)
            split += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = split
    return TriangleMesh(np.array(verts), np.array(faces, dtype=np.int64))


def planar_grid(rows: int, cols: int, square: float = 1.0) -> TriangleMesh:
    """rows x cols unit squares in the z=0 plane, two triangles per square.

    Vertex (r, c) sits at (c * square, r * square, 0); windings are
    counter-clockwise seen from +z.
    """
    if rows < 1 or cols < 1:
        raise ValueError("grid needs at least one row and one column")
    rr, cc = np.meshgrid(np.arange(rows + 1), np.arange(cols + 1), indexing="ij")
    verts = np.stack([cc.ravel() * square, rr.ravel() * square, np.zeros(rr.size)], axis=1)

    def vid(r, c):
        return r * (cols + 1) + c

    faces = []
    for r in range(rows):
        for c in range(cols):
            a, b = vid(r, c), vid(r, c + 1)
            d, e = vid(r + 1, c), vid(r + 1, c + 1)
            faces.append((a, b, e))
            faces.append((a, e, d))
    return TriangleMesh(verts, np.array(faces, dtype=np.int64))


def grid_square_triangles(rows: int, cols: int, r: int, c: int) -> tuple[int, int]:
    """Triangle indices of grid square (r, c) as built by planar_grid."""
    if not (0 <= r < rows and 0 <= c < cols):
        raise ValueError(f"square ({r}, {c}) outside {rows}x{cols} grid")
    base = 2 * (r * cols + c)
    return base, base + 1
