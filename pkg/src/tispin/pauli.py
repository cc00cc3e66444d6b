"""Pauli-string operators on qubit registers and their sparse realizations.

A :class:`SparseOperator` is either a sum of Pauli strings with exact
(dyadic rational) or float coefficients, or an explicit sparse matrix
(used for fermionic sector Hamiltonians whose dimension is not a power
of two).  Pauli sums keep exact coefficients end to end; floating point
enters only when a matrix or matvec is materialized.

Basis convention: computational basis state ``s`` assigns qubit ``i`` the
bit ``(s >> i) & 1``; bit 0 means the +1 eigenstate of Z.  For a Pauli
string with flip mask f (X and Y sites), the only nonzero column-``s``
entry sits at row ``s ^ f`` and equals

    coeff * i**n_Y * (-1)**popcount(s & (Y|Z sites)).
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
import scipy.sparse as sp

__all__ = [
    "PauliTerm",
    "SparseOperator",
    "CapacityError",
    "decompose_dense_block",
]

MAX_QUBITS = 24
_DENSE_CAP = 1 << 12

AXES = "XYZ"

# exact complex numbers as (real, imaginary) Fraction pairs
ExactComplex = tuple[Fraction, Fraction]
_I_POWERS: tuple[ExactComplex, ...] = (
    (Fraction(1), Fraction(0)),
    (Fraction(0), Fraction(1)),
    (Fraction(-1), Fraction(0)),
    (Fraction(0), Fraction(-1)),
)


class CapacityError(RuntimeError):
    """Requested realization exceeds the configured size caps."""


def _cmul(a: ExactComplex, b: ExactComplex) -> ExactComplex:
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _cconj(a: ExactComplex) -> ExactComplex:
    return (a[0], -a[1])


class PauliTerm:
    """One Pauli string: a coefficient and a site -> axis assignment."""

    __slots__ = ("coeff", "factors", "flip_mask", "yz_mask", "n_y")

    def __init__(self, coeff, factors):
        self.coeff = coeff
        facs = tuple(sorted(factors.items() if isinstance(factors, dict) else factors))
        seen = set()
        for site, axis in facs:
            if axis not in AXES:
                raise ValueError(f"unknown Pauli axis {axis!r}")
            if site in seen:
                raise ValueError(f"duplicate site {site} in Pauli string")
            seen.add(site)
        self.factors = facs
        flip = yz = n_y = 0
        for site, axis in facs:
            if axis in "XY":
                flip |= 1 << site
            if axis in "YZ":
                yz |= 1 << site
            if axis == "Y":
                n_y += 1
        self.flip_mask = flip
        self.yz_mask = yz
        self.n_y = n_y

    @property
    def max_site(self) -> int:
        return self.factors[-1][0] if self.factors else -1

    def exact_amplitude(self, s: int) -> ExactComplex:
        """Column-``s`` amplitude (at row ``s ^ flip_mask``), exact path."""
        base = _I_POWERS[self.n_y % 4]
        sign = -1 if bin(s & self.yz_mask).count("1") % 2 else 1
        c = Fraction(self.coeff) * sign
        return (base[0] * c, base[1] * c)

    def mapped(self, site_map) -> "PauliTerm":
        return PauliTerm(self.coeff, {site_map[s]: a for s, a in self.factors})

    def __repr__(self) -> str:
        body = " ".join(f"{a}{s}" for s, a in self.factors) or "I"
        return f"({self.coeff})*{body}"


def _merge_terms(terms) -> tuple[PauliTerm, ...]:
    """Canonical form: one term per distinct string, sorted, zeros dropped."""
    acc: dict[tuple, object] = {}
    for t in terms:
        acc[t.factors] = acc.get(t.factors, 0) + t.coeff
    out = []
    for facs in sorted(acc):
        c = acc[facs]
        if c != 0:
            out.append(PauliTerm(c, facs))
    return tuple(out)


class SparseOperator:
    """Hermitian operator, realized lazily from Pauli terms or a matrix."""

    def __init__(self, *, dim, n_qubits=None, terms=None, matrix=None,
                 hermitian=True, diagonal=None):
        if terms is None and matrix is None:
            raise ValueError("need Pauli terms or an explicit matrix")
        self.dim = int(dim)
        self.n_qubits = n_qubits
        self.terms = terms
        self.hermitian = hermitian
        self._matrix = matrix
        self._apply_cache = None
        if diagonal is None:
            if terms is not None:
                diagonal = all(t.flip_mask == 0 for t in terms)
            else:
                m = matrix.tocoo()
                diagonal = bool(np.all(m.row == m.col))
        self.diagonal = diagonal

    # -- constructors ----------------------------------------------------

    @classmethod
    def from_pauli_terms(cls, n_qubits: int, terms) -> "SparseOperator":
        if n_qubits > MAX_QUBITS:
            raise CapacityError(f"{n_qubits} qubits exceeds cap of {MAX_QUBITS}")
        merged = _merge_terms(terms)
        for t in merged:
            if t.max_site >= n_qubits:
                raise ValueError("Pauli factor outside register")
        return cls(dim=1 << n_qubits, n_qubits=n_qubits, terms=merged)

    @classmethod
    def from_matrix(cls, matrix, hermitian=True) -> "SparseOperator":
        m = sp.csr_matrix(matrix)
        if m.shape[0] != m.shape[1]:
            raise ValueError("operator matrix must be square")
        return cls(dim=m.shape[0], matrix=m, hermitian=hermitian)

    # -- inspection ------------------------------------------------------

    @property
    def is_real(self) -> bool:
        if self.terms is not None:
            return all(t.n_y % 2 == 0 and not isinstance(t.coeff, complex)
                       for t in self.terms)
        return not np.iscomplexobj(self._matrix)

    def canonical_terms(self) -> dict:
        if self.terms is None:
            raise ValueError("no Pauli-term representation available")
        return {t.factors: t.coeff for t in self.terms}

    def coeff_bound(self) -> float:
        """Cheap rigorous upper bound on the operator norm."""
        if self.terms is not None:
            return float(sum(abs(Fraction(t.coeff)) for t in self.terms))
        m = self._matrix
        return float(np.max(np.abs(m).sum(axis=1))) if m.nnz else 0.0

    def term_count(self) -> int:
        return len(self.terms) if self.terms is not None else self._matrix.nnz

    # -- transformations -------------------------------------------------

    def mapped_sites(self, site_map) -> "SparseOperator":
        """Relabel qubits by a permutation (translation-invariance checks)."""
        return SparseOperator.from_pauli_terms(
            self.n_qubits, [t.mapped(site_map) for t in self.terms])

    def conjugated_by_z(self, z_sites) -> "SparseOperator":
        """Exact conjugation by a product of Z operators on ``z_sites``.

        Z X Z = -X and Z Y Z = -Y, so each term picks up a sign per X/Y
        factor inside ``z_sites``; the spectrum is unchanged.
        """
        zset = set(z_sites)
        new = []
        for t in self.terms:
            flips = sum(1 for site, axis in t.factors if axis in "XY" and site in zset)
            new.append(PauliTerm(t.coeff if flips % 2 == 0 else -t.coeff, t.factors))
        return SparseOperator.from_pauli_terms(self.n_qubits, new)

    def __sub__(self, other: "SparseOperator") -> "SparseOperator":
        if self.terms is not None and other.terms is not None:
            if self.n_qubits != other.n_qubits:
                raise ValueError("qubit counts differ")
            negated = [PauliTerm(-t.coeff, t.factors) for t in other.terms]
            return SparseOperator.from_pauli_terms(
                self.n_qubits, list(self.terms) + negated)
        if self.dim != other.dim:
            raise ValueError("dimensions differ")
        return SparseOperator.from_matrix(
            self.matrix(max_dim=self.dim) - other.matrix(max_dim=other.dim),
            hermitian=self.hermitian and other.hermitian)

    # -- realization -----------------------------------------------------

    def matrix(self, max_dim: int = 1 << 16):
        """Explicit CSR matrix; capacity-guarded."""
        if self._matrix is not None:
            return self._matrix
        if self.dim > max_dim:
            raise CapacityError(f"dim {self.dim} exceeds matrix cap {max_dim}")
        dtype = np.float64 if self.is_real else np.complex128
        idx = np.arange(self.dim, dtype=np.int64)
        rows, cols, vals = [], [], []
        for t in self.terms:
            amp = _phase_array(t, idx, dtype)
            rows.append(idx ^ t.flip_mask)
            cols.append(idx)
            vals.append(amp)
        if rows:
            m = sp.coo_matrix(
                (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                shape=(self.dim, self.dim), dtype=dtype).tocsr()
        else:
            m = sp.csr_matrix((self.dim, self.dim), dtype=dtype)
        self._matrix = m
        return m

    def dense(self, max_dim: int = _DENSE_CAP) -> np.ndarray:
        if self.dim > max_dim:
            raise CapacityError(f"dim {self.dim} exceeds dense cap {max_dim}")
        return self.matrix(max_dim=max_dim).toarray()

    def diagonal_vector(self, max_dim: int = 1 << 24) -> np.ndarray:
        """Diagonal of a diagonal-flagged operator, as a dense vector."""
        if not self.diagonal:
            raise ValueError("operator is not diagonal")
        if self.dim > max_dim:
            raise CapacityError(f"dim {self.dim} exceeds cap {max_dim}")
        if self.terms is None:
            return np.asarray(self._matrix.diagonal())
        idx = np.arange(self.dim, dtype=np.int64)
        diag = np.zeros(self.dim, dtype=np.float64)
        for t in self.terms:
            diag += _phase_array(t, idx, np.float64)
        return diag

    def matvec(self, v: np.ndarray) -> np.ndarray:
        """Apply the operator: matrix-free above the dense cap, CSR below."""
        if self.terms is None or self.dim <= _DENSE_CAP:
            return self.matrix(max_dim=max(self.dim, 1 << 16)) @ v
        if self._apply_cache is None:
            self._apply_cache = _build_apply_cache(self.terms, self.dim, self.is_real)
        out = np.zeros(self.dim, dtype=np.result_type(self._apply_cache.dtype, v.dtype))
        idx = self._apply_cache.idx
        for flip, amp in self._apply_cache.groups:
            if flip == 0:
                out += amp * v
            else:
                out[idx ^ flip] += amp * v
        return out

    def exact_entries(self, max_dim: int = 1 << 10) -> dict:
        """All nonzero entries as exact complex rationals.

        Only available for Pauli sums with exact coefficients; intended
        for small dimensions (stoquasticity and equality proofs).
        """
        if self.terms is None:
            raise ValueError("exact entries need a Pauli-term representation")
        if self.dim > max_dim:
            raise CapacityError(f"dim {self.dim} exceeds exact-entry cap {max_dim}")
        zero = Fraction(0)
        entries: dict[tuple[int, int], ExactComplex] = {}
        for t in self.terms:
            for s in range(self.dim):
                r = s ^ t.flip_mask
                re, im = t.exact_amplitude(s)
                old = entries.get((r, s), (zero, zero))
                entries[(r, s)] = (old[0] + re, old[1] + im)
        return {k: v for k, v in entries.items() if v[0] != 0 or v[1] != 0}


class _ApplyCache:
    __slots__ = ("idx", "groups", "dtype")

    def __init__(self, idx, groups, dtype):
        self.idx = idx
        self.groups = groups
        self.dtype = dtype


def _parity(values: np.ndarray) -> np.ndarray:
    return (np.bitwise_count(values) & 1).astype(np.int8)


def _phase_array(t: PauliTerm, idx: np.ndarray, dtype) -> np.ndarray:
    sign = 1.0 - 2.0 * _parity(idx & t.yz_mask)
    base = complex(t.coeff) * 1j ** (t.n_y % 4)
    if dtype == np.float64:
        if base.imag != 0:
            raise ValueError("imaginary amplitude in a real realization")
        return base.real * sign
    return base * sign.astype(np.complex128)


def _build_apply_cache(terms, dim, real):
    dtype = np.float64 if real else np.complex128
    idx = np.arange(dim, dtype=np.int64)
    by_flip: dict[int, np.ndarray] = {}
    for t in terms:
        amp = _phase_array(t, idx, dtype)
        if t.flip_mask in by_flip:
            by_flip[t.flip_mask] = by_flip[t.flip_mask] + amp
        else:
            by_flip[t.flip_mask] = amp
    groups = sorted(by_flip.items())
    return _ApplyCache(idx, groups, dtype)


def decompose_dense_block(entries: dict, k: int) -> list[tuple[tuple, ExactComplex]]:
    """Exact Pauli decomposition of a dense operator on ``k`` qubits.

    ``entries`` maps (row, col) to exact complex values on the
    2**k-dimensional block; bit ``p`` of a block index is qubit ``p``.
    Returns (factors, coefficient) pairs with ``factors`` a sorted tuple
    of (qubit, axis); the identity component has empty factors.
    """
    if k > 5:
        raise CapacityError("dense blocks limited to 5 qubits")
    blockdim = 1 << k
    out = []
    for code in range(4 ** k):
        factors = []
        c = code
        for p in range(k):
            a = c & 3
            c >>= 2
            if a:
                factors.append((p, AXES[a - 1]))
        term = PauliTerm(Fraction(1), tuple(factors))
        acc: ExactComplex = (Fraction(0), Fraction(0))
        for col in range(blockdim):
            row = col ^ term.flip_mask
            ent = entries.get((row, col))
            if ent is None:
                continue
            pv = _cconj(term.exact_amplitude(col))
            acc = (acc[0] + pv[0] * ent[0] - pv[1] * ent[1],
                   acc[1] + pv[0] * ent[1] + pv[1] * ent[0])
        coeff = (acc[0] / blockdim, acc[1] / blockdim)
        if coeff[0] != 0 or coeff[1] != 0:
            out.append((term.factors, coeff))
    return out
