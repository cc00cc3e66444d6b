"""Fermionic lattice models built directly in occupation-number bases.

Spin orbitals are ordered row-major by site with the up orbital before
the down orbital: ``orbital(site, spin) = 2*site + spin`` (spin 0 = up).
Creation and annihilation operators carry the usual sign string over
occupied orbitals below the target in that fixed order, so every matrix
is bit-reproducible.

The itinerant-electron model is

    -t * sum_<ij>,s (c+_{i,s} c_{j,s} + c+_{j,s} c_{i,s})
       + U * sum_i n_{i,up} n_{i,down}

restricted to a fixed electron number; the strong-coupling variant
(``tj``) replaces the on-site repulsion with a projected hop plus an
exchange term J * (S_i . S_j - n_i n_j / 4) and lives entirely in the
no-double-occupancy sector.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np
import scipy.sparse as sp

from .fixedpoint import FixedPrecisionReal
from .lattice import LatticeGeometry
from .pauli import CapacityError, SparseOperator

__all__ = [
    "FermionInstance",
    "orbital",
    "sector_basis",
    "no_double_occupancy_basis",
    "apply_sequence",
    "build_fermi_hubbard",
    "build_tj",
]

MAX_SECTOR_DIM = 1 << 20

UP, DOWN = 0, 1


def orbital(site: int, spin: int) -> int:
    return 2 * site + spin


def _as_float(x) -> float:
    if isinstance(x, FixedPrecisionReal):
        return float(x.value())
    return float(Fraction(x))


@dataclass(frozen=True)
class FermionInstance:
    """Electron model on a lattice: hopping t, interaction (U or J),
    and a fixed electron count."""

    model: str  # 'hubbard' | 'tj'
    geom: LatticeGeometry
    t: object
    coupling: object  # U for hubbard, J for tj
    n_electrons: int

    def __post_init__(self) -> None:
        sites = self.geom.n_sites
        if self.model == "hubbard":
            if not 0 < self.n_electrons < 2 * sites:
                raise ValueError(
                    f"electron count must lie strictly between 0 and {2 * sites}")
        elif self.model == "tj":
            if not 0 <= self.n_electrons <= sites:
                raise ValueError("no-double-occupancy sector needs N_e <= sites")
        else:
            raise ValueError(f"unknown fermion model {self.model!r}")


def sector_basis(n_orbitals: int, n_electrons: int) -> list[int]:
    """All occupation bitstrings with the given electron count, ascending."""
    dim = comb(n_orbitals, n_electrons)
    if dim > MAX_SECTOR_DIM:
        raise CapacityError(f"sector dimension {dim} exceeds cap {MAX_SECTOR_DIM}")
    out = []
    for bits in range(1 << n_orbitals):
        if bin(bits).count("1") == n_electrons:
            out.append(bits)
    return out


def no_double_occupancy_basis(n_sites: int, n_electrons: int) -> list[int]:
    """Occupation bitstrings with no doubly occupied site, ascending."""
    dim = comb(n_sites, n_electrons) * (1 << n_electrons)
    if dim > MAX_SECTOR_DIM:
        raise CapacityError(f"sector dimension {dim} exceeds cap {MAX_SECTOR_DIM}")
    out = []
    for bits in range(1 << (2 * n_sites)):
        if bin(bits).count("1") != n_electrons:
            continue
        if any((bits >> (2 * s)) & 3 == 3 for s in range(n_sites)):
            continue
        out.append(bits)
    assert len(out) == dim
    return out


def apply_sequence(bits: int, ops) -> tuple[int, int] | None:
    """Apply fermionic operators in sequence (first element acts first).

    Each op is (kind, orbital) with kind '+' (create), '-' (annihilate),
    'n' (occupied projector) or 'h' (hole projector).  Returns the final
    bitstring and accumulated sign, or None when the state is killed.
    """
    sign = 1
    for kind, p in ops:
        occ = (bits >> p) & 1
        if kind == "n":
            if not occ:
                return None
        elif kind == "h":
            if occ:
                return None
        elif kind == "+":
            if occ:
                return None
            if bin(bits & ((1 << p) - 1)).count("1") % 2:
                sign = -sign
            bits |= 1 << p
        elif kind == "-":
            if not occ:
                return None
            if bin(bits & ((1 << p) - 1)).count("1") % 2:
                sign = -sign
            bits &= ~(1 << p)
        else:
            raise ValueError(f"unknown fermion op kind {kind!r}")
    return bits, sign


def _assemble(basis, column_terms) -> SparseOperator:
    index = {b: i for i, b in enumerate(basis)}
    live_terms = [(v, ops) for v, ops in column_terms if v != 0.0]
    rows, cols, vals = [], [], []
    for col, bits in enumerate(basis):
        for value, ops in live_terms:
            res = apply_sequence(bits, ops)
            if res is None:
                continue
            new_bits, sign = res
            row = index.get(new_bits)
            if row is None:
                continue  # outside the sector (projected away)
            rows.append(row)
            cols.append(col)
            vals.append(value * sign)
    dim = len(basis)
    m = sp.coo_matrix((vals, (rows, cols)), shape=(dim, dim), dtype=np.float64).tocsr()
    m.sum_duplicates()
    m.eliminate_zeros()
    return SparseOperator.from_matrix(m)


def build_fermi_hubbard(inst: FermionInstance, sector: bool = True) -> SparseOperator:
    """Hopping-plus-repulsion model, restricted to the fixed electron
    number when ``sector`` is true, else on the full Fock space."""
    if inst.model != "hubbard":
        raise ValueError("instance is not a hubbard model")
    geom = inst.geom
    n_orb = 2 * geom.n_sites
    t = _as_float(inst.t)
    u = _as_float(inst.coupling)
    if sector:
        basis = sector_basis(n_orb, inst.n_electrons)
    else:
        if n_orb > 20:
            raise CapacityError("full Fock space limited to 20 orbitals")
        basis = list(range(1 << n_orb))

    column_terms = []
    for i, j in geom.edges():
        for s in (UP, DOWN):
            column_terms.append((-t, (("-", orbital(j, s)), ("+", orbital(i, s)))))
            column_terms.append((-t, (("-", orbital(i, s)), ("+", orbital(j, s)))))
    for site in range(geom.n_sites):
        column_terms.append(
            (u, (("n", orbital(site, UP)), ("n", orbital(site, DOWN)))))
    return _assemble(basis, column_terms)


def build_tj(inst: FermionInstance) -> SparseOperator:
    """Projected-hopping-plus-exchange model on the no-double-occupancy
    sector."""
    if inst.model != "tj":
        raise ValueError("instance is not a tj model")
    geom = inst.geom
    t = _as_float(inst.t)
    j = _as_float(inst.coupling)
    basis = no_double_occupancy_basis(geom.n_sites, inst.n_electrons)

    def projected_hop(dst: int, src: int, s: int):
        # (1-n_{dst,-s}) c+_{dst,s} c_{src,s} (1-n_{src,-s}), rightmost first
        return (
            ("h", orbital(src, 1 - s)),
            ("-", orbital(src, s)),
            ("+", orbital(dst, s)),
            ("h", orbital(dst, 1 - s)),
        )

    def spin_raise(site: int):
        # S+ = c+_{up} c_{down} with hole projectors, rightmost first
        return (
            ("h", orbital(site, UP)),
            ("-", orbital(site, DOWN)),
            ("+", orbital(site, UP)),
            ("h", orbital(site, DOWN)),
        )

    def spin_lower(site: int):
        return (
            ("h", orbital(site, DOWN)),
            ("-", orbital(site, UP)),
            ("+", orbital(site, DOWN)),
            ("h", orbital(site, UP)),
        )

    column_terms = []
    for i, j_site in geom.edges():
        for s in (UP, DOWN):
            column_terms.append((-t, projected_hop(i, j_site, s)))
            column_terms.append((-t, projected_hop(j_site, i, s)))
        # transverse exchange (J/2)(S+_i S-_j + S-_i S+_j); rightmost first
        column_terms.append((j / 2, spin_lower(j_site) + spin_raise(i)))
        column_terms.append((j / 2, spin_raise(j_site) + spin_lower(i)))

    index = {b: i for i, b in enumerate(basis)}
    live_terms = [(v, ops) for v, ops in column_terms if v != 0.0]
    rows, cols, vals = [], [], []
    for col, bits in enumerate(basis):
        diag = 0.0
        for i, j_site in geom.edges():
            ni = (bits >> orbital(i, UP)) & 1, (bits >> orbital(i, DOWN)) & 1
            nj = (bits >> orbital(j_site, UP)) & 1, (bits >> orbital(j_site, DOWN)) & 1
            occ_i, occ_j = ni[0] + ni[1], nj[0] + nj[1]
            if occ_i and occ_j:
                szi = (ni[0] - ni[1]) / 2.0
                szj = (nj[0] - nj[1]) / 2.0
                diag += j * (szi * szj - occ_i * occ_j / 4.0)
        if diag != 0.0:
            rows.append(col)
            cols.append(col)
            vals.append(diag)
        for value, ops in live_terms:
            res = apply_sequence(bits, ops)
            if res is None:
                continue
            new_bits, sign = res
            row = index.get(new_bits)
            if row is None:
                continue
            rows.append(row)
            cols.append(col)
            vals.append(value * sign)
    dim = len(basis)
    m = sp.coo_matrix((vals, (rows, cols)), shape=(dim, dim), dtype=np.float64).tocsr()
    m.sum_duplicates()
    m.eliminate_zeros()
    return SparseOperator.from_matrix(m)
