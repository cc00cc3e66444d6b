"""Spin-model Hamiltonians as Pauli-string operators.

Builders produce exact-coefficient :class:`~tispin.pauli.SparseOperator`
values; coefficients stay dyadic rationals until a matrix or matvec is
materialized.  Qubit ``i`` is lattice site ``i`` (row-major).

The nearest-neighbor exchange model is ``J * sum_<ij> (XX + YY + ZZ)``;
the ``spin`` convention rescales every term by 1/4 (spin operators are
half the Pauli matrices).  The classical-field model is the diagonal
``sum J_ij Z_i Z_j + sum B_i Z_i``.  A translation-unit-cell Hamiltonian
sums one fixed constant-size block over all lattice translations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .fixedpoint import FixedPrecisionReal
from .lattice import LatticeGeometry
from .pauli import ExactComplex, PauliTerm, SparseOperator, decompose_dense_block

__all__ = [
    "build_heisenberg",
    "build_ising",
    "build_unit_cell",
    "UnitCellTerm",
    "UnitCellSpec",
    "heisenberg_star_cell",
    "stoquastic_transform",
    "stoquastic_transform_for_geometry",
    "coupling_norm_constants",
    "norm_bound",
    "translation_permutation",
]

MAX_CELL_SITES = 5
MAX_CELL_TERMS = 1 << MAX_CELL_SITES


def _as_fraction(x) -> Fraction:
    if isinstance(x, FixedPrecisionReal):
        return x.value()
    return Fraction(x)


def build_heisenberg(geom: LatticeGeometry, J, convention: str = "sigma") -> SparseOperator:
    """Nearest-neighbor exchange model on the lattice.

    ``convention='sigma'`` gives J*(XX+YY+ZZ) per edge; ``'spin'`` gives
    the quarter-scaled S.S form.
    """
    jv = _as_fraction(J)
    if jv == 0:
        raise ValueError("coupling J must be nonzero")
    if convention not in ("sigma", "spin"):
        raise ValueError("convention must be 'sigma' or 'spin'")
    coeff = jv if convention == "sigma" else jv / 4
    terms = [
        PauliTerm(coeff, ((i, ax), (j, ax)))
        for i, j in geom.edges()
        for ax in "XYZ"
    ]
    return SparseOperator.from_pauli_terms(geom.n_sites, terms)


def build_ising(geom: LatticeGeometry, couplings, fields=None) -> SparseOperator:
    """Diagonal model: per-edge ZZ couplings plus per-site Z fields.

    ``couplings`` is a scalar (uniform) or a mapping keyed by sorted edge
    pairs; ``fields`` likewise by site, default zero.  The result carries
    the diagonal fast-path flag.
    """
    edges = geom.edges()
    terms = []
    for e in edges:
        jv = _as_fraction(couplings[e] if isinstance(couplings, dict) else couplings)
        if jv != 0:
            terms.append(PauliTerm(jv, ((e[0], "Z"), (e[1], "Z"))))
    if fields is not None:
        for i in range(geom.n_sites):
            if isinstance(fields, dict):
                bv = _as_fraction(fields.get(i, 0))
            else:
                bv = _as_fraction(fields)
            if bv != 0:
                terms.append(PauliTerm(bv, ((i, "Z"),)))
    op = SparseOperator.from_pauli_terms(geom.n_sites, terms)
    assert op.diagonal
    return op


@dataclass(frozen=True)
class UnitCellTerm:
    """One block of the unit cell: an ordered site subset, a scalar
    coupling, and a dense Hermitian matrix on those sites (first listed
    site is the most significant tensor factor)."""

    sites: tuple[tuple[int, ...], ...]
    coupling: FixedPrecisionReal
    matrix: tuple[tuple[ExactComplex, ...], ...]

    def __post_init__(self) -> None:
        k = len(self.sites)
        if len(set(self.sites)) != k:
            raise ValueError("repeated site offset inside a cell term")
        dim = 1 << k
        if len(self.matrix) != dim or any(len(row) != dim for row in self.matrix):
            raise ValueError(f"matrix must be {dim}x{dim} for {k} sites")
        for r in range(dim):
            for c in range(dim):
                re, im = self.matrix[r][c]
                cr, ci = self.matrix[c][r]
                if re != cr or im != -ci:
                    raise ValueError("cell-term matrix is not Hermitian")

    def row_sum_bound(self) -> Fraction:
        """Rational upper bound on the spectral norm (max row modulus sum,
        with |z| <= |Re z| + |Im z|)."""
        return max(
            sum(abs(re) + abs(im) for re, im in row) for row in self.matrix
        )

    def numeric_matrix(self) -> np.ndarray:
        dim = len(self.matrix)
        m = np.zeros((dim, dim), dtype=complex)
        for r in range(dim):
            for c in range(dim):
                re, im = self.matrix[r][c]
                m[r, c] = float(re) + 1j * float(im)
        return m


@dataclass(frozen=True)
class UnitCellSpec:
    """Constant Hamiltonian block summed over all lattice translations."""

    d: int
    terms: tuple[UnitCellTerm, ...]
    norm_cap_override: Fraction | None = None
    max_cell_sites: int = MAX_CELL_SITES

    def __post_init__(self) -> None:
        if self.d not in (1, 2):
            raise ValueError("unit cells support d in {1, 2}")
        if len(self.terms) > MAX_CELL_TERMS:
            raise ValueError(f"cell has {len(self.terms)} terms, cap is {MAX_CELL_TERMS}")
        if len(self.cell_sites) > self.max_cell_sites:
            raise ValueError(
                f"cell footprint {len(self.cell_sites)} exceeds cap {self.max_cell_sites}")
        for t in self.terms:
            if any(len(o) != self.d for o in t.sites):
                raise ValueError("site offset dimension mismatch")
        cap = self.norm_cap
        for t in self.terms:
            # numeric certification that every block obeys the cap
            norm = float(np.abs(np.linalg.eigvalsh(t.numeric_matrix())).max()) \
                if len(t.matrix) > 1 else abs(complex(t.numeric_matrix()[0, 0]))
            if norm > float(cap) + 1e-9:
                raise ValueError(f"cell-term norm {norm} exceeds cap {cap}")

    @property
    def cell_sites(self) -> tuple[tuple[int, ...], ...]:
        return tuple(sorted({o for t in self.terms for o in t.sites}))

    @property
    def norm_cap(self) -> Fraction:
        if self.norm_cap_override is not None:
            return self.norm_cap_override
        if not self.terms:
            return Fraction(0)
        return max(t.row_sum_bound() for t in self.terms)


def build_unit_cell(N: int, spec: UnitCellSpec, boundary: str = "torus") -> SparseOperator:
    """Sum the cell block over every lattice translation.

    Overlapping cells add; on an open lattice, blocks whose sites fall
    outside are clipped (the conformance claims are for the torus).
    """
    geom = LatticeGeometry(spec.d, N, boundary)
    decomposed = []
    for t in spec.terms:
        k = len(t.sites)
        entries = {
            (r, c): t.matrix[r][c]
            for r in range(1 << k)
            for c in range(1 << k)
            if t.matrix[r][c] != (Fraction(0), Fraction(0))
        }
        decomposed.append((t, decompose_dense_block(entries, k)))
    terms: list[PauliTerm] = []
    positions = (
        [(i,) for i in range(N)] if spec.d == 1
        else [(r, c) for r in range(N) for c in range(N)]
    )
    for pos in positions:
        for cell_term, parts in decomposed:
            k = len(cell_term.sites)
            try:
                abs_sites = [
                    geom.site_index(tuple(p + o for p, o in zip(pos, off)))
                    for off in cell_term.sites
                ]
            except ValueError:
                continue  # clipped at an open boundary
            if len(set(abs_sites)) != k:
                raise ValueError(
                    f"cell at {pos} wraps onto itself (N too small for the footprint)")
            jv = cell_term.coupling.value()
            for factors, (re, im) in parts:
                if im != 0:
                    raise ValueError("non-Hermitian component in cell decomposition")
                mapped = tuple((abs_sites[k - 1 - p], ax) for p, ax in factors)
                terms.append(PauliTerm(jv * re, mapped))
    return SparseOperator.from_pauli_terms(geom.n_sites, terms)


def _sigma_dot_sigma_matrix() -> tuple[tuple[ExactComplex, ...], ...]:
    z, o, tw = Fraction(0), Fraction(1), Fraction(2)
    rows = (
        (o, z, z, z),
        (z, -o, tw, z),
        (z, tw, -o, z),
        (z, z, z, o),
    )
    return tuple(tuple((v, Fraction(0)) for v in row) for row in rows)


def heisenberg_star_cell(J) -> UnitCellSpec:
    """The 5-site star cell whose translated sum reproduces the exchange
    model on a torus: (J/2) * sigma_center . sigma_q over the four arms,
    so each edge is covered by exactly two cells."""
    half = FixedPrecisionReal.from_fraction(_as_fraction(J) / 2)
    mat = _sigma_dot_sigma_matrix()
    center = (0, 0)
    arms = ((-1, 0), (0, 1), (1, 0), (0, -1))
    terms = tuple(UnitCellTerm((center, arm), half, mat) for arm in arms)
    return UnitCellSpec(d=2, terms=terms)


def stoquastic_transform(op: SparseOperator, a_sites) -> SparseOperator:
    """Conjugate by Z on every site outside ``a_sites``.

    A unitary conjugation, so the spectrum is exactly preserved; when
    ``a_sites`` is one side of a bipartition of the edge graph, the
    exchange model comes out with non-positive off-diagonal entries.
    """
    b_sites = set(range(op.n_qubits)) - set(a_sites)
    return op.conjugated_by_z(b_sites)


def stoquastic_transform_for_geometry(op: SparseOperator, geom: LatticeGeometry):
    """Checkerboard-bipartition transform; raises for non-bipartite
    geometries (odd rings).  Returns (transformed, a_sites)."""
    a_sites = geom.checkerboard()
    return stoquastic_transform(op, a_sites), a_sites


def translation_permutation(geom: LatticeGeometry, axis: int = 0) -> dict[int, int]:
    """Site map for a one-step translation along ``axis`` (torus only)."""
    if geom.boundary != "torus":
        raise ValueError("translations are symmetries only on the torus")
    sides = geom.sides()
    perm = {}
    for idx in range(geom.n_sites):
        coords = []
        rem = idx
        for side in reversed(sides):
            coords.append(rem % side)
            rem //= side
        coords.reverse()
        coords[axis] = (coords[axis] + 1) % sides[axis]
        perm[idx] = geom.site_index(tuple(coords))
    return perm


# Certified per-coupling norm constants: the operator attached to one
# unit of each coupling has norm at most a * N^d.  Edge terms use
# (edges <= d * N^d) times the per-edge norm; site terms use N^d sites.
#   exchange edge term XX+YY+ZZ: norm 3        -> a = 3d
#   diagonal edge term ZZ: norm 1              -> a = d
#   hopping edge term (both spins): norm 2     -> a = 2d
#   exchange-with-density edge term: norm 1    -> a = d
#   on-site double occupancy: norm 1           -> a = 1
def coupling_norm_constants(model: str, d: int, unit_cell: UnitCellSpec | None = None):
    if model == "heisenberg":
        return [("J", Fraction(3 * d))]
    if model == "ising":
        return [("J", Fraction(d))]
    if model == "hubbard":
        return [("t", Fraction(2 * d)), ("U", Fraction(1))]
    if model == "tj":
        return [("t", Fraction(2 * d)), ("J", Fraction(d))]
    if model == "unitcell":
        cap = unit_cell.norm_cap
        return [(f"term{i}", cap) for i in range(len(unit_cell.terms))]
    raise ValueError(f"unknown model {model!r}")


def norm_bound(model: str, geom: LatticeGeometry, couplings: dict,
               unit_cell: UnitCellSpec | None = None) -> Fraction:
    """A-priori certified bound on the operator norm: sum of
    |coupling| * a * N^d over the model's couplings."""
    scale = Fraction(geom.N) ** geom.d
    total = Fraction(0)
    constants = coupling_norm_constants(model, geom.d, unit_cell)
    if model == "unitcell":
        for (name, a), term in zip(constants, unit_cell.terms):
            total += abs(term.coupling.value()) * a * scale
    else:
        for name, a in constants:
            total += abs(_as_fraction(couplings[name])) * a * scale
    return total
