import numpy as np
import pytest

from viewplan import Submesh, TriangleMesh, icosphere, triangle_bits


@pytest.fixture(scope="session")
def unit_square() -> TriangleMesh:
    verts = [[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0]]
    return TriangleMesh(verts, [[0, 1, 2], [0, 2, 3]])


@pytest.fixture(scope="session")
def ico1() -> TriangleMesh:
    return icosphere(1)  # 80 triangles


@pytest.fixture(scope="session")
def ico3() -> TriangleMesh:
    return icosphere(3)  # 1280 triangles


def tri_neighbors(mesh: TriangleMesh) -> list[list[int]]:
    out: list[list[int]] = [[] for _ in range(mesh.n_triangles)]
    for incident in mesh.edge_adjacency.values():
        if len(incident) == 2:
            a, b = incident
            out[a].append(b)
            out[b].append(a)
    return out


def grown_patch(mesh: TriangleMesh, rng: np.random.Generator, size: int,
                neighbors=None) -> int:
    """Bitset of a connected patch grown from a random seed triangle."""
    if neighbors is None:
        neighbors = tri_neighbors(mesh)
    seed = int(rng.integers(mesh.n_triangles))
    chosen = {seed}
    frontier = [seed]
    while frontier and len(chosen) < size:
        t = frontier.pop(int(rng.integers(len(frontier))))
        for n in neighbors[t]:
            if n not in chosen:
                chosen.add(n)
                frontier.append(n)
                if len(chosen) >= size:
                    break
    return triangle_bits(chosen)


def random_bits(mesh: TriangleMesh, rng: np.random.Generator, density: float) -> int:
    mask = rng.random(mesh.n_triangles) < density
    if not mask.any():
        mask[int(rng.integers(mesh.n_triangles))] = True
    return triangle_bits(np.nonzero(mask)[0].tolist())


def submesh_of(mesh: TriangleMesh, bits: int) -> Submesh:
    return Submesh.from_triangles(mesh, bits)
