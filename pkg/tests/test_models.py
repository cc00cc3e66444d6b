import random
from fractions import Fraction

import numpy as np
import pytest

from tispin.fixedpoint import FixedPrecisionReal
from tispin.lattice import LatticeGeometry
from tispin.models import (UnitCellSpec, UnitCellTerm, build_heisenberg,
                           build_ising, build_unit_cell, coupling_norm_constants,
                           heisenberg_star_cell, norm_bound,
                           stoquastic_transform, stoquastic_transform_for_geometry,
                           translation_permutation)
from tispin.spectral import full_spectrum, ground_energy, operator_norm

from oracles import ising_min_by_enumeration, kron_heisenberg

F = FixedPrecisionReal.from_fraction


# -- exchange builder -------------------------------------------------------

def test_heisenberg_2x2_open_shape():
    geom = LatticeGeometry(2, 2, "open")
    op = build_heisenberg(geom, 1)
    assert op.dim == 16
    assert len(op.terms) == 12  # 3 strings per edge, 4 edges


def test_heisenberg_2x2_open_ground_energy():
    geom = LatticeGeometry(2, 2, "open")
    op = build_heisenberg(geom, 1)
    lam = ground_energy(op).value
    oracle = np.linalg.eigvalsh(
        kron_heisenberg(geom.edges(), geom.n_sites))[0].real
    assert abs(lam - oracle) < 1e-10
    assert abs(lam - (-8.0)) < 1e-10  # frozen from the kron oracle


def test_heisenberg_matches_kron_oracle_n3():
    geom = LatticeGeometry(2, 3, "open")
    op = build_heisenberg(geom, Fraction(3, 4))
    oracle = kron_heisenberg(geom.edges(), geom.n_sites, 0.75)
    assert np.allclose(op.dense().astype(complex), oracle)


def test_heisenberg_ferromagnet_polarized_ground_state():
    geom = LatticeGeometry(2, 2, "open")
    op = build_heisenberg(geom, -1)
    lam = ground_energy(op).value
    assert abs(lam - (-4.0)) < 1e-10  # -|edges| * |J|
    dense = op.dense()
    polarized = np.zeros(16)
    polarized[0] = 1.0
    assert np.allclose(dense @ polarized, lam * polarized)


def test_heisenberg_spin_convention_quarter_scale():
    geom = LatticeGeometry(1, 4, "torus")
    sigma = build_heisenberg(geom, 1, convention="sigma")
    spin = build_heisenberg(geom, 1, convention="spin")
    assert np.allclose(spin.dense(), sigma.dense() / 4)


def test_heisenberg_rejects_zero_coupling():
    with pytest.raises(ValueError):
        build_heisenberg(LatticeGeometry(2, 2, "open"), 0)


def test_translation_invariance_on_torus():
    for geom in (LatticeGeometry(2, 3, "torus"), LatticeGeometry(1, 5, "torus")):
        op = build_heisenberg(geom, Fraction(5, 8))
        for axis in range(geom.d):
            perm = translation_permutation(geom, axis)
            assert op.mapped_sites(perm).canonical_terms() == op.canonical_terms()


# -- diagonal builder ---------------------------------------------------------

def test_ising_neel_ground_state():
    for n in (2, 3, 4):
        geom = LatticeGeometry(2, n, "open")
        op = build_ising(geom, 1)
        assert op.diagonal
        lam = ground_energy(op).value
        edges = geom.edges()
        oracle = ising_min_by_enumeration(
            edges, geom.n_sites, [1.0] * len(edges), [0.0] * geom.n_sites)
        assert lam == oracle == -len(edges)


def test_ising_fields_only():
    geom = LatticeGeometry(2, 2, "open")
    fields = {0: Fraction(1), 1: Fraction(-2), 2: Fraction(3, 2), 3: Fraction(0)}
    op = build_ising(geom, 0, fields)
    lam = ground_energy(op).value
    assert lam == -float(sum(abs(v) for v in fields.values()))


def test_ising_single_edge():
    op = build_ising(LatticeGeometry(1, 2, "open"), 1)
    assert ground_energy(op).value == -1.0


def test_ising_random_vs_enumeration():
    rng = random.Random(71)
    geom = LatticeGeometry(2, 3, "open")
    edges = geom.edges()
    couplings = {e: Fraction(rng.randrange(-4, 5), 2) for e in edges}
    fields = {i: Fraction(rng.randrange(-4, 5), 4) for i in range(geom.n_sites)}
    op = build_ising(geom, couplings, fields)
    oracle = ising_min_by_enumeration(
        edges, geom.n_sites,
        [float(couplings[e]) for e in edges],
        [float(fields[i]) for i in range(geom.n_sites)])
    assert ground_energy(op).value == pytest.approx(float(oracle), abs=1e-12)


# -- unit cells ----------------------------------------------------------------

def test_star_cell_equals_heisenberg_torus_n3_exact():
    j = Fraction(3, 4)
    heis = build_heisenberg(LatticeGeometry(2, 3, "torus"), j)
    cell = build_unit_cell(3, heisenberg_star_cell(j))
    assert cell.canonical_terms() == heis.canonical_terms()
    assert cell.exact_entries() == heis.exact_entries()


def test_star_cell_edge_coefficient_doubles():
    # each edge sits in exactly two cells, so J/2 + J/2 = J per edge
    cell = build_unit_cell(3, heisenberg_star_cell(1))
    coeffs = set(cell.canonical_terms().values())
    assert coeffs == {Fraction(1)}


def test_single_site_z_cell():
    matrix = (((Fraction(1), Fraction(0)), (Fraction(0), Fraction(0))),
              ((Fraction(0), Fraction(0)), (Fraction(-1), Fraction(0))))
    spec = UnitCellSpec(d=2, terms=(
        UnitCellTerm(((0, 0),), FixedPrecisionReal.from_int(1), matrix),))
    op = build_unit_cell(3, spec)
    assert op.canonical_terms() == {((i, "Z"),): Fraction(1) for i in range(9)}
    assert ground_energy(op).value == -9.0


def test_empty_cell_is_zero_operator():
    spec = UnitCellSpec(d=2, terms=())
    op = build_unit_cell(3, spec)
    assert op.canonical_terms() == {}
    assert ground_energy(op).value == 0.0


def test_cell_footprint_cap():
    matrix = (((Fraction(1), Fraction(0)),) * 2,) * 2
    terms = tuple(
        UnitCellTerm(((0, k),), FixedPrecisionReal.from_int(1),
                     (((Fraction(1), Fraction(0)), (Fraction(0), Fraction(0))),
                      ((Fraction(0), Fraction(0)), (Fraction(1), Fraction(0)))))
        for k in range(6))
    with pytest.raises(ValueError):
        UnitCellSpec(d=2, terms=terms)


def test_cell_norm_cap_violation():
    with pytest.raises(ValueError):
        UnitCellSpec(d=2, terms=heisenberg_star_cell(1).terms,
                     norm_cap_override=Fraction(1))


def test_cell_non_hermitian_rejected():
    bad = (((Fraction(0), Fraction(0)), (Fraction(1), Fraction(0))),
           ((Fraction(0), Fraction(0)), (Fraction(0), Fraction(0))))
    with pytest.raises(ValueError):
        UnitCellTerm(((0, 0),), FixedPrecisionReal.from_int(1), bad)


def test_unit_cell_open_boundary_clips():
    # every edge interior to the open lattice appears once with weight J/2
    # per covering cell; border edges lose the wrapped-around partner
    op = build_unit_cell(3, heisenberg_star_cell(1), boundary="open")
    heis = build_heisenberg(LatticeGeometry(2, 3, "open"), 1)
    coeffs = op.canonical_terms()
    assert set(coeffs) == set(heis.canonical_terms())
    assert set(coeffs.values()) <= {Fraction(1), Fraction(1, 2)}


def test_unit_cell_translation_invariance():
    op = build_unit_cell(3, heisenberg_star_cell(Fraction(1, 2)))
    geom = LatticeGeometry(2, 3, "torus")
    for axis in (0, 1):
        perm = translation_permutation(geom, axis)
        assert op.mapped_sites(perm).canonical_terms() == op.canonical_terms()


# -- stoquastic conjugation -------------------------------------------------------

def test_stoquastic_heisenberg_open():
    for n in (2, 3):
        geom = LatticeGeometry(2, n, "open")
        op = build_heisenberg(geom, Fraction(5, 4))
        st, a_sites = stoquastic_transform_for_geometry(op, geom)
        entries = st.exact_entries()
        assert all(re <= 0 and im == 0
                   for (r, c), (re, im) in entries.items() if r != c)
        assert np.max(np.abs(full_spectrum(op) - full_spectrum(st))) <= 1e-10


def test_stoquastic_single_edge_matrix():
    geom = LatticeGeometry(1, 2, "open")
    op = build_heisenberg(geom, 1)
    st = stoquastic_transform(op, [0])
    entries = st.exact_entries()
    assert entries[(1, 2)] == (Fraction(-2), Fraction(0))
    assert entries[(2, 1)] == (Fraction(-2), Fraction(0))
    assert np.allclose(np.sort(full_spectrum(st)), np.sort(full_spectrum(op)))


def test_stoquastic_leaves_diagonal_untouched():
    geom = LatticeGeometry(2, 2, "open")
    op = build_ising(geom, 1)
    st = stoquastic_transform(op, geom.checkerboard())
    assert st.canonical_terms() == op.canonical_terms()


def test_stoquastic_expected_sign_pattern():
    geom = LatticeGeometry(2, 2, "open")
    op = build_heisenberg(geom, 1)
    st, _ = stoquastic_transform_for_geometry(op, geom)
    for facs, coeff in st.canonical_terms().items():
        axis = facs[0][1]
        assert coeff == (Fraction(1) if axis == "Z" else Fraction(-1))


def test_stoquastic_rejects_odd_torus():
    geom = LatticeGeometry(2, 3, "torus")
    op = build_heisenberg(geom, 1)
    with pytest.raises(ValueError):
        stoquastic_transform_for_geometry(op, geom)


# -- certified norm bounds -----------------------------------------------------------

def test_norm_bound_heisenberg():
    for n in (2, 3):
        geom = LatticeGeometry(2, n, "open")
        j = Fraction(7, 8)
        bound = norm_bound("heisenberg", geom, {"J": j})
        assert bound == j * 6 * n ** 2
        exact = operator_norm(build_heisenberg(geom, j))
        assert float(bound) >= exact


def test_norm_bound_zero_coupling():
    geom = LatticeGeometry(2, 2, "open")
    assert norm_bound("heisenberg", geom, {"J": Fraction(0)}) == 0


def test_norm_bound_ising():
    geom = LatticeGeometry(2, 3, "open")
    bound = norm_bound("ising", geom, {"J": Fraction(2)})
    exact = operator_norm(build_ising(geom, 2))
    assert float(bound) >= exact


def test_norm_bound_unit_cell():
    spec = heisenberg_star_cell(1)
    assert spec.norm_cap == 3  # row-sum bound of the exchange block
    geom = LatticeGeometry(2, 3, "torus")
    bound = norm_bound("unitcell", geom, {}, spec)
    exact = operator_norm(build_unit_cell(3, spec))
    assert float(bound) >= exact
    # open-boundary assembly stays under the same bound
    exact_open = operator_norm(build_unit_cell(2, spec, boundary="open"))
    small = norm_bound("unitcell", LatticeGeometry(2, 2, "open"), {}, spec)
    assert float(small) >= exact_open


def test_norm_constants_table():
    assert coupling_norm_constants("heisenberg", 2) == [("J", Fraction(6))]
    assert coupling_norm_constants("hubbard", 2) == [
        ("t", Fraction(4)), ("U", Fraction(1))]
    assert coupling_norm_constants("tj", 2) == [
        ("t", Fraction(4)), ("J", Fraction(2))]


def test_hermiticity_of_builders():
    geom = LatticeGeometry(2, 2, "open")
    for op in (build_heisenberg(geom, Fraction(1, 2)),
               build_ising(geom, Fraction(-3, 2), Fraction(1, 4)),
               build_unit_cell(3, heisenberg_star_cell(1))):
        dense = op.dense().astype(complex)
        assert np.allclose(dense, dense.conj().T)
