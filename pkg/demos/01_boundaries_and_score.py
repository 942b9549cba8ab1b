"""Surface patches, their boundaries, and the area-over-boundary score.

Covering a surface with camera views is a set-cover problem, but not every
cover is equally useful: a patch with a short boundary relative to its area
is compact and leaves cleaner seams for the next view. This script builds a
few patches on a flat grid and on a sphere and prints how the score
area / boundary_length^lam reacts as lam moves from 0 (pure area) upward.
"""

from viewplan import Submesh, icosphere, planar_grid, score, union_coverage


def describe(name, patch):
    print(f"  {name}: {patch.count} triangles, area {patch.area:.3f}, "
          f"boundary {patch.boundary_length:.3f}")
    for lam in (0.0, 0.5, 1.0, 2.0):
        print(f"    lam={lam:<4} score {score(patch, lam):.4f}")


def main():
    grid = planar_grid(4, 6)

    print("A compact 2x2 block against a 1x4 strip of equal area:")
    block = Submesh.from_triangles(grid, [0, 1, 2, 3, 12, 13, 14, 15])
    strip = Submesh.from_triangles(grid, [0, 1, 2, 3, 4, 5, 6, 7])
    describe("block", block)
    describe("strip", strip)
    print("  Same area, but the block's shorter boundary wins once lam > 0.\n")

    print("Unions cancel interior seams:")
    left = Submesh.from_triangles(grid, [0, 1, 2, 3])
    right = Submesh.from_triangles(grid, [2, 3, 4, 5])
    both = union_coverage(left, right)
    print(f"  left boundary {left.boundary_length:.3f}, "
          f"right boundary {right.boundary_length:.3f}, "
          f"union boundary {both.boundary_length:.3f} "
          f"(sum of parts would be {left.boundary_length + right.boundary_length:.3f})\n")

    print("A closed surface has no boundary at all:")
    sphere = icosphere(1)
    whole = Submesh.from_triangles(sphere, range(sphere.n_triangles))
    print(f"  icosphere: {whole.count} triangles, area {whole.area:.3f}, "
          f"boundary {whole.boundary_length:.1f}")
    print(f"  score at lam=0   : {score(whole, 0.0):.3f}  (plain area)")
    print(f"  score at lam=1   : {score(whole, 1.0)}  (division by zero length)")


if __name__ == "__main__":
    main()
