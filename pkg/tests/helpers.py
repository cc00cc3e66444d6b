"""Shared constructors for randomized promise instances.

Thresholds are placed from the oracle ground energy with comfortable
margins, so the intended verdict is known by construction.
"""

from fractions import Fraction

from tispin.fixedpoint import FixedPrecisionReal
from tispin.instances import ProblemInstance, build_operator
from tispin.lattice import LatticeGeometry
from tispin.spectral import ground_energy

from oracles import dyadic_above, dyadic_near, random_signed_digits

_lambda_cache: dict = {}


def long_coupling(rng, frac_len=64) -> FixedPrecisionReal:
    """Coupling in (0, 2): unit integer digit plus a random long fraction."""
    return FixedPrecisionReal((1,), random_signed_digits(rng, frac_len))


def oracle_lambda(geom: LatticeGeometry, j: FixedPrecisionReal) -> float:
    key = (geom, j.value())
    if key not in _lambda_cache:
        probe = ProblemInstance(
            "heisenberg", geom, FixedPrecisionReal.from_int(-1000),
            FixedPrecisionReal.from_int(1000), 1, {"J": j})
        _lambda_cache[key] = ground_energy(build_operator(probe)).value
    return _lambda_cache[key]


def heisenberg_promise_instance(rng, n=3, c=3, yes=True, frac_len=64,
                                long_thresholds=False, boundary="open"):
    """Random antiferromagnetic instance satisfying the promise; returns
    (instance, expected verdict string)."""
    geom = LatticeGeometry(2, n, boundary)
    j = long_coupling(rng, frac_len)
    lam = oracle_lambda(geom, j)
    gap = dyadic_above(Fraction(1, n ** c)) + dyadic_near(
        Fraction(rng.randrange(1, 50), 1000))
    margin = dyadic_near(Fraction(rng.randrange(20, 200), 1000))
    bits = frac_len if long_thresholds else 16
    if yes:
        alpha = dyadic_near(lam, bits) + margin
        beta = alpha + gap
    else:
        beta = dyadic_near(lam, bits) - margin
        alpha = beta - gap
    if long_thresholds:
        # widen the canonical fractional parts to frac_len digits without
        # moving either threshold by more than 2^-12
        alpha += Fraction(rng.getrandbits(frac_len - 12) | 1, 1 << frac_len)
        beta += Fraction(rng.getrandbits(frac_len - 12) | 1, 1 << frac_len)
    inst = ProblemInstance(
        "heisenberg", geom,
        FixedPrecisionReal.from_fraction(alpha),
        FixedPrecisionReal.from_fraction(beta),
        c, {"J": j})
    return inst, ("Yes" if yes else "No")
