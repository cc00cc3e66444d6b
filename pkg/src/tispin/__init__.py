"""Translationally-invariant spin-model promise instances: builders,
sparsification with certificates, and an exact-diagonalization oracle."""

__version__ = "0.1.0"

from .fixedpoint import FixedPrecisionReal
from .lattice import LatticeGeometry
from .pauli import PauliTerm, SparseOperator
from .models import (build_heisenberg, build_ising, build_unit_cell,
                     heisenberg_star_cell, stoquastic_transform, norm_bound,
                     UnitCellSpec, UnitCellTerm)
from .fermions import FermionInstance, build_fermi_hubbard, build_tj
from .instances import (ProblemInstance, parse_instance, serialize_instance,
                        build_operator, instance_digest)
from .spectral import (ground_energy, operator_norm, full_spectrum,
                       decide_promise, weyl_check)
from .reduction import (sparsify, verify_reduction, census,
                        reduce_fractional_J, reduce_integer_alpha_beta,
                        reduce_fractional_alpha_beta, ReductionCertificate)

__all__ = [
    "FixedPrecisionReal", "LatticeGeometry", "PauliTerm", "SparseOperator",
    "build_heisenberg", "build_ising", "build_unit_cell",
    "heisenberg_star_cell", "stoquastic_transform", "norm_bound",
    "UnitCellSpec", "UnitCellTerm", "FermionInstance", "build_fermi_hubbard",
    "build_tj", "ProblemInstance", "parse_instance", "serialize_instance",
    "build_operator", "instance_digest", "ground_energy", "operator_norm",
    "full_spectrum", "decide_promise", "weyl_check", "sparsify",
    "verify_reduction", "census", "reduce_fractional_J",
    "reduce_integer_alpha_beta", "reduce_fractional_alpha_beta",
    "ReductionCertificate",
]
