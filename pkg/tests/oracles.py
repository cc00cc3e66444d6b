"""Independent brute-force oracles the tests check the library against.

Everything here is deliberately built from first principles (explicit
Kronecker products, exhaustive enumeration, single-particle filling) and
shares no code with the library paths it checks.
"""

from fractions import Fraction

import numpy as np

X = np.array([[0.0, 1.0], [1.0, 0.0]])
Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
Z = np.array([[1.0, 0.0], [0.0, -1.0]])
PAULI = {"X": X, "Y": Y, "Z": Z}


def kron_string(n_qubits, factors, coeff=1.0):
    """Dense matrix of a Pauli string via explicit Kronecker products.

    Qubit i holds bit i of the basis index, so qubit 0 is the LAST kron
    factor.
    """
    mats = [np.eye(2)] * n_qubits
    for site, axis in factors:
        mats[site] = PAULI[axis]
    out = np.array([[1.0 + 0j]])
    for m in reversed(mats):
        out = np.kron(out, m)
    return coeff * out


def kron_heisenberg(edges, n_qubits, j=1.0):
    h = np.zeros((2 ** n_qubits, 2 ** n_qubits), dtype=complex)
    for i, k in edges:
        for axis in "XYZ":
            h += j * kron_string(n_qubits, [(i, axis), (k, axis)])
    return h


def ising_min_by_enumeration(edges, n_sites, couplings, fields):
    """Exhaustive scan over all 2^n spin assignments."""
    best = None
    for bits in range(1 << n_sites):
        z = [1 - 2 * ((bits >> i) & 1) for i in range(n_sites)]
        e = sum(couplings[idx] * z[i] * z[k] for idx, (i, k) in enumerate(edges))
        e += sum(fields[i] * z[i] for i in range(n_sites))
        best = e if best is None else min(best, e)
    return best


def tight_binding_fill(edges, n_sites, t, n_electrons):
    """Fill the lowest spin-degenerate single-particle levels."""
    adj = np.zeros((n_sites, n_sites))
    for i, j in edges:
        adj[i, j] = adj[j, i] = 1.0
    levels = np.linalg.eigvalsh(-t * adj)
    doubled = np.sort(np.concatenate([levels, levels]))
    return float(doubled[:n_electrons].sum())


def dyadic_near(x, bits=64) -> Fraction:
    return Fraction(round(Fraction(x) * (1 << bits)), 1 << bits)


def dyadic_above(fr: Fraction, bits=64) -> Fraction:
    """Smallest 2^-bits grid point strictly above ``fr``."""
    return Fraction((fr.numerator * (1 << bits)) // fr.denominator + 1, 1 << bits)


def random_signed_digits(rng, n):
    return tuple(rng.choice((-1, 0, 1)) for _ in range(n))
