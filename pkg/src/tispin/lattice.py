"""Square-lattice geometry: site indexing, nearest-neighbor edges, bipartitions.

Sites are indexed row-major.  For d = 2 the lattice is ``rows x cols``
(``cols`` defaults to ``N`` for the standard ``N x N`` problem); for
d = 1 it is a chain of ``N`` sites.  Closed boundaries ("torus") require
side length >= 3 on every wrapped direction, since a 2-site ring would
double-count each coupling.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = ["LatticeGeometry"]


@dataclass(frozen=True)
class LatticeGeometry:
    d: int
    N: int
    boundary: str = "open"
    cols: int | None = None  # d = 2 only; None means N x N

    def __post_init__(self) -> None:
        if self.d not in (1, 2):
            raise ValueError(f"dimension {self.d} not supported (d must be 1 or 2)")
        if self.boundary not in ("open", "torus"):
            raise ValueError(f"boundary must be 'open' or 'torus', got {self.boundary!r}")
        if self.N < 2:
            raise ValueError("side length must be >= 2")
        if self.cols is not None and self.d != 2:
            raise ValueError("cols only applies to d = 2")
        if self.cols is not None and self.cols < 2:
            raise ValueError("cols must be >= 2")
        if self.boundary == "torus":
            for side in self.sides():
                if side < 3:
                    raise ValueError(
                        "torus with side < 3 double-counts edges; use open boundary"
                    )

    def sides(self) -> tuple[int, ...]:
        if self.d == 1:
            return (self.N,)
        return (self.N, self.cols if self.cols is not None else self.N)

    @property
    def n_sites(self) -> int:
        n = 1
        for s in self.sides():
            n *= s
        return n

    def site_index(self, coords: tuple[int, ...]) -> int:
        """Row-major index; coordinates wrap on a torus."""
        sides = self.sides()
        idx = 0
        for c, side in zip(coords, sides):
            if self.boundary == "torus":
                c %= side
            elif not 0 <= c < side:
                raise ValueError(f"coordinate {coords} outside open lattice")
            idx = idx * side + c
        return idx

    def edges(self) -> list[tuple[int, int]]:
        """Sorted nearest-neighbor pairs (i < j), each edge exactly once."""
        out: set[tuple[int, int]] = set()
        wrap = self.boundary == "torus"
        if self.d == 1:
            n = self.N
            for i in range(n - 1):
                out.add((i, i + 1))
            if wrap:
                out.add((0, n - 1))
        else:
            rows, cols = self.sides()
            for r in range(rows):
                for c in range(cols):
                    i = r * cols + c
                    if c + 1 < cols:
                        out.add(tuple(sorted((i, r * cols + c + 1))))
                    elif wrap:
                        out.add(tuple(sorted((i, r * cols))))
                    if r + 1 < rows:
                        out.add(tuple(sorted((i, (r + 1) * cols + c))))
                    elif wrap:
                        out.add(tuple(sorted((i, c))))
        return sorted(out)

    def checkerboard(self) -> frozenset[int]:
        """One side of the even/odd sublattice bipartition.

        Raises for geometries where the checkerboard fails to bipartition
        the edge graph (odd-length rings).
        """
        if self.d == 1:
            part = frozenset(i for i in range(self.N) if i % 2 == 0)
        else:
            rows, cols = self.sides()
            part = frozenset(
                r * cols + c for r in range(rows) for c in range(cols) if (r + c) % 2 == 0
            )
        for i, j in self.edges():
            if (i in part) == (j in part):
                raise ValueError("geometry is not bipartite (odd ring)")
        return part
