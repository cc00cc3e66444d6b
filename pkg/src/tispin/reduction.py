"""Instance sparsification with machine-checkable certificates.

Every step rewrites a promise instance so that one binary argument fits
in O(log N) digits, widening the thresholds by an exactly computed
perturbation bound and doubling the gap exponent; the whole pipeline
composes a constant number of such steps.  Each step emits a
:class:`ReductionCertificate` whose arithmetic can be replayed exactly.

A truncation of a coupling with norm constant ``a`` to
``L = (2c + d) * ceil(log2 N)`` fractional digits moves the operator by
at most ``eps = a * N^d / N^(2c+d)`` in norm, so the eigenvalue moves by
at most ``eps`` and thresholds widened by ``eps`` preserve the answer.
Threshold adjustments round outward to the same digit grid (the exact
``eps`` is rarely dyadic); the certificate stores the exact value and
the produced thresholds.  Steps whose asymptotic gap guarantee needs
``N^c > 2a + 1`` (couplings) or ``N^c > 5`` (thresholds) pass the
instance through unchanged below those sizes.

The census counts, exactly, how many distinct canonical instance
encodings exist per lattice size under a digit budget, certifying the
polynomial sparseness of the reduced family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace as dc_replace
from fractions import Fraction
from itertools import product

from .fixedpoint import FixedPrecisionReal, adjust_down, adjust_up
from .instances import (ProblemInstance, ValidationError, build_operator,
                        fpr_to_hex, hex_to_fpr)
from .models import UnitCellTerm, coupling_norm_constants
from . import spectral

__all__ = [
    "ReductionCertificate",
    "SparsifyResult",
    "reduce_fractional_J",
    "reduce_integer_alpha_beta",
    "reduce_fractional_alpha_beta",
    "reduce_unit_cell_couplings",
    "sparsify",
    "fixed_answer_instance",
    "serialize_certificate",
    "parse_certificates",
    "canonical_value_count",
    "enumerate_canonical_values",
    "census",
    "fitted_exponent",
    "declared_degree",
    "CheckResult",
    "VerifyReport",
    "verify_reduction",
]

REDUCED = "reduced"
FORCED_YES = "forced_yes"
FORCED_NO = "forced_no"
PASS_THROUGH = "pass_through"


def ceil_log2(n: int) -> int:
    return (n - 1).bit_length()


def _ceil_fraction(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


@dataclass(frozen=True)
class ReductionCertificate:
    """Record of one reduction step, exact enough to replay."""

    step: str
    verdict: str
    truncation_width: int
    epsilon: Fraction
    alpha_in: FixedPrecisionReal
    beta_in: FixedPrecisionReal
    alpha_out: FixedPrecisionReal
    beta_out: FixedPrecisionReal
    gap_exponent_in: int
    gap_exponent_out: int
    norm_constant: Fraction | None = None
    k: int | None = None
    note: str = ""

    def gap_out(self) -> Fraction:
        return self.beta_out.value() - self.alpha_out.value()


# -- designated forced-answer instances -----------------------------------

def fixed_answer_instance(inst: ProblemInstance, yes: bool) -> ProblemInstance:
    """The designated trivially decidable instance of the same family.

    All couplings are set to 1 and the thresholds placed strictly beyond
    the certified norm bound P: a Yes instance uses (P+1, P+2), so
    lambda <= ||H|| <= P < alpha always, and a No instance mirrors it.
    """
    one = FixedPrecisionReal.from_int(1)
    kw = dict(couplings={k: one for k in inst.couplings})
    if inst.model == "unitcell":
        cell = inst.unit_cell
        kw["unit_cell"] = dc_replace(
            cell, terms=tuple(
                UnitCellTerm(t.sites, one, t.matrix) for t in cell.terms))
    if inst.model in ("hubbard", "tj"):
        kw["n_electrons"] = 1
    probe = inst.replace(gap_exponent=1, **kw)
    p_int = _ceil_fraction(probe.norm_bound())
    if yes:
        alpha, beta = p_int + 1, p_int + 2
    else:
        alpha, beta = -p_int - 2, -p_int - 1
    return probe.replace(
        alpha=FixedPrecisionReal.from_int(alpha),
        beta=FixedPrecisionReal.from_int(beta))


# -- fractional-coupling steps ---------------------------------------------

def _set_coupling(inst: ProblemInstance, name, value: FixedPrecisionReal,
                  term_index: int | None) -> ProblemInstance:
    if term_index is None:
        new = dict(inst.couplings)
        new[name] = value
        return inst.replace(couplings=new)
    cell = inst.unit_cell
    terms = list(cell.terms)
    old = terms[term_index]
    terms[term_index] = UnitCellTerm(old.sites, value, old.matrix)
    return inst.replace(unit_cell=dc_replace(cell, terms=tuple(terms)))


def _get_coupling(inst: ProblemInstance, name, term_index: int | None) -> FixedPrecisionReal:
    if term_index is None:
        return inst.couplings[name]
    return inst.unit_cell.terms[term_index].coupling


def _fractional_coupling_step(inst: ProblemInstance, name: str,
                              a: Fraction, step: str,
                              term_index: int | None = None):
    """Truncate one coupling's fractional digits and widen the thresholds."""
    c = inst.gap_exponent
    d = inst.geometry.d
    n = inst.geometry.N
    k = 2 * c + d
    width = k * ceil_log2(n)
    eps = Fraction(a) * n ** d / Fraction(n) ** k
    base = dict(step=step, truncation_width=width, epsilon=eps,
                alpha_in=inst.alpha, beta_in=inst.beta,
                gap_exponent_in=c, norm_constant=Fraction(a), k=k)
    if Fraction(n) ** c <= 2 * Fraction(a) + 1:
        cert = ReductionCertificate(
            verdict=PASS_THROUGH, alpha_out=inst.alpha, beta_out=inst.beta,
            gap_exponent_out=c,
            note=f"small-N exemption: N^c = {n ** c} <= 2a + 1 = {2 * Fraction(a) + 1}",
            **base)
        return inst, cert
    value = _get_coupling(inst, name, term_index)
    truncated = value.truncate(width).canonical()
    alpha_out = adjust_up(inst.alpha, eps, width)
    beta_out = adjust_down(inst.beta, eps, width)
    gap_out = beta_out.value() - alpha_out.value()
    if gap_out <= Fraction(1, n ** (2 * c)):
        cert = ReductionCertificate(
            verdict=PASS_THROUGH, alpha_out=inst.alpha, beta_out=inst.beta,
            gap_exponent_out=c,
            note="widened gap fell below 1/N^2c; instance passed through",
            **base)
        return inst, cert
    out = _set_coupling(inst, name, truncated, term_index)
    out = out.replace(alpha=alpha_out, beta=beta_out, gap_exponent=2 * c)
    cert = ReductionCertificate(
        verdict=REDUCED, alpha_out=alpha_out, beta_out=beta_out,
        gap_exponent_out=2 * c, **base)
    return out, cert


def reduce_fractional_J(inst: ProblemInstance):
    """Truncate the fractional part of the single coupling J."""
    constants = dict(coupling_norm_constants(inst.model, inst.geometry.d))
    if "J" not in constants:
        raise ValidationError(f"model {inst.model} has no single J coupling")
    return _fractional_coupling_step(inst, "J", constants["J"], "fractional_J")


def reduce_unit_cell_couplings(inst: ProblemInstance):
    """Truncate each cell coupling in turn; one certificate per term."""
    if inst.model != "unitcell":
        raise ValidationError("instance is not a unit-cell model")
    a = inst.unit_cell.norm_cap
    cur = inst
    certs = []
    for i in range(len(inst.unit_cell.terms)):
        cur, cert = _fractional_coupling_step(
            cur, f"term{i}", a, f"fractional_J_Q{i}", term_index=i)
        certs.append(cert)
    return cur, certs


# -- integer threshold step --------------------------------------------------

def reduce_integer_alpha_beta(inst: ProblemInstance):
    """Forced-answer check against the certified norm bound, then a
    lossless canonical re-encoding of in-range integer parts."""
    p = inst.norm_bound()
    zero = Fraction(0)
    base = dict(step="integer_alpha_beta", truncation_width=0, epsilon=zero,
                alpha_in=inst.alpha, beta_in=inst.beta,
                gap_exponent_in=inst.gap_exponent,
                gap_exponent_out=inst.gap_exponent)
    if inst.alpha.value() <= -p:
        out = fixed_answer_instance(inst, yes=False)
        cert = ReductionCertificate(
            verdict=FORCED_NO, alpha_out=out.alpha, beta_out=out.beta,
            note=f"alpha <= -P with P = {p}; no Yes instance can satisfy lambda < alpha",
            **base)
        return out, cert
    if inst.beta.value() >= p:
        out = fixed_answer_instance(inst, yes=True)
        cert = ReductionCertificate(
            verdict=FORCED_YES, alpha_out=out.alpha, beta_out=out.beta,
            note=f"beta >= P with P = {p}; no No instance can satisfy lambda > beta",
            **base)
        return out, cert
    # |alpha|, |beta| < P already fit in ceil(log2 P) + 1 canonical digits;
    # canonicalization cannot change the values.
    width_cap = max(_ceil_fraction(p) - 1, 0).bit_length() + 1
    alpha_c = inst.alpha.canonical()
    beta_c = inst.beta.canonical()
    assert alpha_c.int_width <= width_cap and beta_c.int_width <= width_cap
    out = inst.replace(alpha=alpha_c, beta=beta_c)
    cert = ReductionCertificate(
        verdict=REDUCED, alpha_out=alpha_c, beta_out=beta_c,
        note=f"integer parts canonical within {width_cap} digits (P = {p})",
        **base)
    return out, cert


# -- fractional threshold step -----------------------------------------------

def reduce_fractional_alpha_beta(inst: ProblemInstance):
    """Truncate both thresholds to 2c*ceil(log2 N) fractional digits and
    pull them inward by one grid step each."""
    c = inst.gap_exponent
    n = inst.geometry.N
    width = 2 * c * ceil_log2(n)
    margin = Fraction(1, 1 << width)
    base = dict(step="fractional_alpha_beta", truncation_width=width,
                epsilon=margin, alpha_in=inst.alpha, beta_in=inst.beta,
                gap_exponent_in=c, k=2 * c)
    if n ** c <= 5:
        cert = ReductionCertificate(
            verdict=PASS_THROUGH, alpha_out=inst.alpha, beta_out=inst.beta,
            gap_exponent_out=c,
            note=f"small-N exemption: N^c = {n ** c} <= 5", **base)
        return inst, cert
    alpha_out = FixedPrecisionReal.from_fraction(
        inst.alpha.truncate(width).value() + margin)
    beta_out = FixedPrecisionReal.from_fraction(
        inst.beta.truncate(width).value() - margin)
    gap_out = beta_out.value() - alpha_out.value()
    if gap_out <= Fraction(1, n ** (2 * c)):
        cert = ReductionCertificate(
            verdict=PASS_THROUGH, alpha_out=inst.alpha, beta_out=inst.beta,
            gap_exponent_out=c,
            note="adjusted gap fell below 1/N^2c; instance passed through",
            **base)
        return inst, cert
    out = inst.replace(alpha=alpha_out, beta=beta_out, gap_exponent=2 * c)
    cert = ReductionCertificate(
        verdict=REDUCED, alpha_out=alpha_out, beta_out=beta_out,
        gap_exponent_out=2 * c,
        note="operator unchanged; epsilon records the one-grid-step margin",
        **base)
    return out, cert


# -- composition ---------------------------------------------------------------

@dataclass(frozen=True)
class SparsifyResult:
    original: ProblemInstance
    instance: ProblemInstance
    steps: tuple  # of (ReductionCertificate, ProblemInstance after the step)
    forced: str | None

    @property
    def chain(self) -> tuple[ReductionCertificate, ...]:
        return tuple(cert for cert, _ in self.steps)

    def field_digit_counts(self) -> dict[str, int]:
        inst = self.instance
        out = {}
        if inst.model == "unitcell":
            for i, t in enumerate(inst.unit_cell.terms):
                c = t.coupling.canonical()
                out[f"term{i}"] = c.int_width + c.frac_width
        else:
            for name, v in inst.couplings.items():
                c = v.canonical()
                out[name] = c.int_width + c.frac_width
        for name in ("alpha", "beta"):
            c = getattr(inst, name).canonical()
            out[name] = c.int_width + c.frac_width
        return out

    def budget_constant(self) -> int:
        """Smallest C with every binary field at most C*ceil(log2 N) digits."""
        unit = ceil_log2(self.instance.geometry.N)
        return max(
            (-(-bits // unit) for bits in self.field_digit_counts().values()),
            default=0)

    def has_exemption(self) -> bool:
        return any(c.verdict == PASS_THROUGH and "exemption" in c.note
                   for c in self.chain)


def _coupling_names(inst: ProblemInstance):
    if inst.model == "unitcell":
        a = inst.unit_cell.norm_cap
        return [(f"term{i}", a, i) for i in range(len(inst.unit_cell.terms))]
    return [(name, a, None)
            for name, a in coupling_norm_constants(inst.model, inst.geometry.d)]


def sparsify(inst: ProblemInstance) -> SparsifyResult:
    """Compose the reductions: integer-coupling check, per-coupling
    fractional truncation, forced-answer threshold check, fractional
    threshold truncation.

    Steps whose target field already fits the step's digit budget pass
    through unchanged, so an already-sparse instance maps to itself.
    """
    steps = []
    cur = inst
    # integer parts of the couplings are bounded by the declared polynomial,
    # which the instance validates at construction; record the widths.
    widths = {}
    for name, _a, idx in _coupling_names(cur):
        v = _get_coupling(cur, name, idx).canonical()
        widths[name] = v.int_width
    zero = Fraction(0)
    steps.append((ReductionCertificate(
        step="integer_couplings", verdict=REDUCED, truncation_width=0,
        epsilon=zero, alpha_in=cur.alpha, beta_in=cur.beta,
        alpha_out=cur.alpha, beta_out=cur.beta,
        gap_exponent_in=cur.gap_exponent, gap_exponent_out=cur.gap_exponent,
        note="integer widths within N^degree bound: " + repr(widths)), cur))

    for name, a, idx in _coupling_names(cur):
        c = cur.gap_exponent
        width = (2 * c + cur.geometry.d) * ceil_log2(cur.geometry.N)
        step_name = "fractional_J" if idx is None and name == "J" else (
            f"fractional_J_Q{idx}" if idx is not None else f"fractional_{name}")
        value = _get_coupling(cur, name, idx).canonical()
        if value.frac_width <= width:
            steps.append((ReductionCertificate(
                step=step_name, verdict=PASS_THROUGH, truncation_width=width,
                epsilon=zero, alpha_in=cur.alpha, beta_in=cur.beta,
                alpha_out=cur.alpha, beta_out=cur.beta,
                gap_exponent_in=c, gap_exponent_out=c,
                note="fractional part already within the digit budget"), cur))
            continue
        cur, cert = _fractional_coupling_step(cur, name, a, step_name, idx)
        steps.append((cert, cur))

    cur, cert = reduce_integer_alpha_beta(cur)
    steps.append((cert, cur))
    if cert.verdict in (FORCED_YES, FORCED_NO):
        return SparsifyResult(inst, cur, tuple(steps), cert.verdict)

    c = cur.gap_exponent
    width = 2 * c * ceil_log2(cur.geometry.N)
    if (cur.alpha.canonical().frac_width <= width
            and cur.beta.canonical().frac_width <= width):
        steps.append((ReductionCertificate(
            step="fractional_alpha_beta", verdict=PASS_THROUGH,
            truncation_width=width, epsilon=zero,
            alpha_in=cur.alpha, beta_in=cur.beta,
            alpha_out=cur.alpha, beta_out=cur.beta,
            gap_exponent_in=c, gap_exponent_out=c,
            note="fractional parts already within the digit budget"), cur))
    else:
        cur, cert = reduce_fractional_alpha_beta(cur)
        steps.append((cert, cur))
    return SparsifyResult(inst, cur, tuple(steps), None)


# -- certificate wire format ---------------------------------------------------

def serialize_certificate(cert: ReductionCertificate) -> str:
    lines = [
        "[certificate]",
        f"step={cert.step}",
        f"verdict={cert.verdict}",
        f"L={cert.truncation_width}",
        f"epsilon={cert.epsilon}",
    ]
    if cert.k is not None:
        lines.append(f"k={cert.k}")
    if cert.norm_constant is not None:
        lines.append(f"a={cert.norm_constant}")
    lines += [
        f"alpha_in={fpr_to_hex(cert.alpha_in)}",
        f"beta_in={fpr_to_hex(cert.beta_in)}",
        f"alpha_out={fpr_to_hex(cert.alpha_out)}",
        f"beta_out={fpr_to_hex(cert.beta_out)}",
        f"gap_exponent_in={cert.gap_exponent_in}",
        f"gap_exponent_out={cert.gap_exponent_out}",
    ]
    if cert.note:
        lines.append(f"note={cert.note}")
    return "\n".join(lines) + "\n"


def parse_certificates(text: str) -> list[ReductionCertificate]:
    blocks: list[dict] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line == "[certificate]":
            blocks.append({})
            continue
        if "=" not in line or not blocks:
            raise ValueError(f"unexpected certificate line {line!r}")
        key, value = line.split("=", 1)
        blocks[-1][key] = value
    out = []
    for b in blocks:
        out.append(ReductionCertificate(
            step=b["step"], verdict=b["verdict"],
            truncation_width=int(b["L"]), epsilon=Fraction(b["epsilon"]),
            alpha_in=hex_to_fpr(b["alpha_in"]), beta_in=hex_to_fpr(b["beta_in"]),
            alpha_out=hex_to_fpr(b["alpha_out"]), beta_out=hex_to_fpr(b["beta_out"]),
            gap_exponent_in=int(b["gap_exponent_in"]),
            gap_exponent_out=int(b["gap_exponent_out"]),
            norm_constant=Fraction(b["a"]) if "a" in b else None,
            k=int(b["k"]) if "k" in b else None,
            note=b.get("note", "")))
    return out


# -- census ---------------------------------------------------------------------

def canonical_value_count(width: int) -> int:
    """Number of distinct values whose canonical form fits ``width``
    signed digits: strings in {-1,0,1}^W with no two adjacent nonzeros,
    counted by t(W) = t(W-1) + 2 t(W-2) = (2^(W+2) + (-1)^(W+1)) / 3."""
    if width < 0:
        raise ValueError("width must be >= 0")
    return ((1 << (width + 2)) + (1 if width % 2 else -1)) // 3


def enumerate_canonical_values(width: int) -> set[Fraction]:
    """Brute-force oracle for :func:`canonical_value_count`: all values
    of non-adjacent digit strings of the given total width (the int/frac
    split does not matter for counting, so all digits sit above the
    point here)."""
    out: set[Fraction] = set()
    for digits in product((-1, 0, 1), repeat=width):
        if any(digits[i] and digits[i + 1] for i in range(width - 1)):
            continue
        out.add(Fraction(sum(d << i for i, d in enumerate(digits))))
    return out


def declared_degree(budget: int, n_fields: int = 3) -> int:
    """Provable polynomial degree for the census: each field carries at
    most budget*ceil(log2 N) digits, hence < N^(budget+1) values."""
    return n_fields * (budget + 1)


def census(n_max: int, budget: int, n_fields: int = 3, n_min: int = 2,
           verify_small: bool = True) -> list[tuple[int, int, float]]:
    """Exact counts of distinct canonical sparse-instance encodings.

    Returns (N, count, log count / log N) rows for n_min <= N <= n_max,
    with count = t(budget * ceil(log2 N)) ** n_fields.  For N <= 8 the
    per-field count is cross-checked against exhaustive enumeration.
    """
    rows = []
    for n in range(n_min, n_max + 1):
        width = budget * ceil_log2(n)
        per_field = canonical_value_count(width)
        if verify_small and n <= 8:
            enumerated = len(enumerate_canonical_values(width))
            if enumerated != per_field:
                raise AssertionError(
                    f"enumeration {enumerated} != formula {per_field} at width {width}")
        count = per_field ** n_fields
        rows.append((n, count, math.log(count) / math.log(n)))
    return rows


def fitted_exponent(rows) -> float:
    """Least-squares slope of log count against log N."""
    xs = [math.log(n) for n, _, _ in rows]
    ys = [math.log(count) for _, count, _ in rows]
    mx = sum(xs) / len(xs)
    my = sum(ys) / len(ys)
    sxx = sum((x - mx) ** 2 for x in xs)
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    return sxy / sxx


# -- verification harness --------------------------------------------------------

@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    skipped: bool
    detail: str


@dataclass(frozen=True)
class VerifyReport:
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed or c.skipped for c in self.checks)


def _expected_epsilon(cert: ReductionCertificate, inst: ProblemInstance) -> Fraction | None:
    n = inst.geometry.N
    if cert.step.startswith("fractional_J") or cert.step.startswith("fractional_t") \
            or cert.step.startswith("fractional_U"):
        if cert.verdict == PASS_THROUGH and "digit budget" in cert.note:
            return Fraction(0)
        a = cert.norm_constant
        return Fraction(a) * n ** inst.geometry.d / Fraction(n) ** cert.k
    if cert.step == "fractional_alpha_beta":
        if cert.verdict == PASS_THROUGH and "digit budget" in cert.note:
            return Fraction(0)
        return Fraction(1, 1 << cert.truncation_width)
    return Fraction(0)


def verify_reduction(inst: ProblemInstance, result: SparsifyResult | None = None,
                     method: str = "auto", *, seed: int = spectral.DEFAULT_SEED,
                     weyl_allowance: float = spectral.ABS_ERROR_FLOOR) -> VerifyReport:
    """Replay a sparsification and check every claimed property.

    Checks: certificate arithmetic (exact), the eigenvalue-perturbation
    inequality per operator-changing step (oracle), exact gap
    preservation per reduced step, end-to-end answer preservation, and
    the output digit budget.  Promise-violating inputs are flagged and
    the soundness check skipped.
    """
    if result is None:
        result = sparsify(inst)
    checks: list[CheckResult] = []

    decision_in = spectral.decide_promise(inst, method, seed=seed)
    violated = decision_in.verdict == spectral.PROMISE_VIOLATED
    checks.append(CheckResult(
        "input_promise", True, False,
        f"oracle verdict {decision_in.verdict}"
        + (" (soundness check will be skipped)" if violated else "")))

    before = result.original
    for i, (cert, after) in enumerate(result.steps):
        label = f"step{i}.{cert.step}"
        expected = _expected_epsilon(cert, before)
        arithmetic_ok = expected is not None and cert.epsilon == expected
        if cert.verdict == REDUCED and cert.step != "integer_couplings":
            gap_ok = cert.gap_out() > Fraction(
                1, before.geometry.N ** cert.gap_exponent_out)
        else:
            gap_ok = True
        checks.append(CheckResult(
            f"{label}.arithmetic", bool(arithmetic_ok), False,
            f"epsilon {cert.epsilon} vs recomputed {expected}"))
        checks.append(CheckResult(
            f"{label}.gap", bool(gap_ok), False,
            f"gap_out {cert.gap_out()} vs 1/N^{cert.gap_exponent_out}"))

        operator_changed = (
            cert.verdict == REDUCED
            and cert.step.startswith("fractional_")
            and cert.step != "fractional_alpha_beta")
        if operator_changed:
            rep = spectral.weyl_check(
                build_operator(before), build_operator(after), method,
                seed=seed, allowance=weyl_allowance)
            eps_ok = rep.norm_difference <= float(cert.epsilon) + weyl_allowance
            checks.append(CheckResult(
                f"{label}.weyl", rep.ok and eps_ok, False,
                f"|dlambda| {rep.delta_lambda:.3e} <= |dH| {rep.norm_difference:.3e}"
                f" <= eps {float(cert.epsilon):.3e}"))
        if cert.verdict in (FORCED_YES, FORCED_NO):
            break
        before = after

    if violated:
        checks.append(CheckResult(
            "answer_preserved", True, True,
            "input violates the promise; soundness not defined"))
    elif result.forced:
        expected = spectral.YES if result.forced == FORCED_YES else spectral.NO
        ok_in = decision_in.verdict == expected
        decision_out = spectral.decide_promise(result.instance, method, seed=seed)
        ok_out = decision_out.verdict == expected
        checks.append(CheckResult(
            "answer_preserved", ok_in and ok_out, False,
            f"forced {expected}: original {decision_in.verdict},"
            f" designated instance {decision_out.verdict}"))
    else:
        decision_out = spectral.decide_promise(result.instance, method, seed=seed)
        checks.append(CheckResult(
            "answer_preserved", decision_out.verdict == decision_in.verdict, False,
            f"original {decision_in.verdict}, reduced {decision_out.verdict}"))

    if result.has_exemption():
        checks.append(CheckResult(
            "output_budget", True, True,
            "small-N exemption active; budget law not asserted"))
    else:
        c_const = result.budget_constant()
        unit = ceil_log2(result.instance.geometry.N)
        bits = result.field_digit_counts()
        checks.append(CheckResult(
            "output_budget", all(b <= c_const * unit for b in bits.values()), False,
            f"C = {c_const}, fields {bits}"))
    return VerifyReport(tuple(checks))
