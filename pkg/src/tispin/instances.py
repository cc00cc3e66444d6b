"""Promise-problem instances and their textual wire format.

An instance file is line-oriented UTF-8: ``key=value`` pairs, full-line
``#`` comments, blank lines allowed.  Keys:

    model=<heisenberg|ising|unitcell|hubbard|tj>
    d=<int>
    N=<unary string of 1s>
    boundary=<open|torus>
    Ne=<int>                     (hubbard / tj)
    c=<int>                      gap exponent: beta - alpha > 1/N^c
    degree=<int>                 declared coupling bound N^degree (default 2)
    J= / t= / U=<hex wire-encoded fixed-precision real>
    alpha= / beta=<hex ...>
    a=<rational>                 unit-cell norm cap override (optional)
    term=<(o1,..),(..)>;<hex J_Q>;<row-major complex matrix literal>

Matrix literals are bracketed, comma-separated exact complex entries
(``1``, ``-1/2``, ``3/4+1/2j``, ``0.25-2j``); the first listed site is
the most significant tensor factor.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .fermions import FermionInstance, build_fermi_hubbard, build_tj
from .fixedpoint import FixedPrecisionReal
from .lattice import LatticeGeometry
from .models import UnitCellSpec, UnitCellTerm, build_heisenberg, build_ising, \
    build_unit_cell, norm_bound
from .pauli import ExactComplex, SparseOperator

__all__ = [
    "ProblemInstance",
    "ParseError",
    "ValidationError",
    "parse_instance",
    "serialize_instance",
    "build_operator",
    "instance_digest",
    "fpr_to_hex",
    "hex_to_fpr",
]

MODELS = ("heisenberg", "ising", "unitcell", "hubbard", "tj")
_COUPLING_KEYS = {
    "heisenberg": ("J",),
    "ising": ("J",),
    "unitcell": (),
    "hubbard": ("t", "U"),
    "tj": ("t", "J"),
}
DEFAULT_COUPLING_DEGREE = 2


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int = 1):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


class ValidationError(ValueError):
    pass


@dataclass(frozen=True)
class ProblemInstance:
    """One promise-problem instance: model, geometry, exact couplings and
    thresholds, and the gap exponent certifying beta - alpha > 1/N^c."""

    model: str
    geometry: LatticeGeometry
    alpha: FixedPrecisionReal
    beta: FixedPrecisionReal
    gap_exponent: int
    couplings: dict = field(default_factory=dict)
    n_electrons: int | None = None
    unit_cell: UnitCellSpec | None = None
    coupling_degree: int = DEFAULT_COUPLING_DEGREE

    def __post_init__(self) -> None:
        if self.model not in MODELS:
            raise ValidationError(f"unknown model {self.model!r}")
        if self.gap_exponent < 1:
            raise ValidationError("gap exponent must be a positive integer")
        if self.promise_gap() <= self.inverse_gap_bound():
            raise ValidationError(
                f"promise gap {self.promise_gap()} is not above 1/N^{self.gap_exponent}")
        needed = _COUPLING_KEYS[self.model]
        if tuple(self.couplings) != needed:
            raise ValidationError(
                f"model {self.model} needs couplings {needed}, got {tuple(self.couplings)}")
        bound = Fraction(self.geometry.N) ** self.coupling_degree
        for name, v in self.couplings.items():
            if abs(v.value()) >= bound:
                raise ValidationError(
                    f"|{name}| = {v.value()} outside the declared bound N^{self.coupling_degree}")
        if self.model == "heisenberg" and self.couplings["J"].value() <= 0:
            raise ValidationError("antiferromagnetic coupling must satisfy J > 0")
        if self.model == "unitcell":
            if self.unit_cell is None:
                raise ValidationError("unitcell model needs a unit-cell spec")
            if self.unit_cell.d != self.geometry.d:
                raise ValidationError("unit-cell dimension mismatch")
            for t in self.unit_cell.terms:
                if abs(t.coupling.value()) >= bound:
                    raise ValidationError("cell coupling outside the declared bound")
        if self.model in ("hubbard", "tj"):
            if self.n_electrons is None:
                raise ValidationError(f"{self.model} needs an electron count")
            # range checks live in FermionInstance
            self.fermion_instance()

    def promise_gap(self) -> Fraction:
        return self.beta.value() - self.alpha.value()

    def inverse_gap_bound(self) -> Fraction:
        return Fraction(1, self.geometry.N ** self.gap_exponent)

    def fermion_instance(self) -> FermionInstance:
        if self.model not in ("hubbard", "tj"):
            raise ValidationError("not a fermionic model")
        key = "U" if self.model == "hubbard" else "J"
        return FermionInstance(
            model=self.model, geom=self.geometry,
            t=self.couplings["t"], coupling=self.couplings[key],
            n_electrons=self.n_electrons)

    def norm_bound(self) -> Fraction:
        return norm_bound(self.model, self.geometry, self.couplings, self.unit_cell)

    def replace(self, **kw) -> "ProblemInstance":
        data = dict(
            model=self.model, geometry=self.geometry, alpha=self.alpha,
            beta=self.beta, gap_exponent=self.gap_exponent,
            couplings=dict(self.couplings), n_electrons=self.n_electrons,
            unit_cell=self.unit_cell, coupling_degree=self.coupling_degree)
        data.update(kw)
        return ProblemInstance(**data)


def build_operator(inst: ProblemInstance) -> SparseOperator:
    if inst.model == "heisenberg":
        return build_heisenberg(inst.geometry, inst.couplings["J"])
    if inst.model == "ising":
        return build_ising(inst.geometry, inst.couplings["J"].value())
    if inst.model == "unitcell":
        return build_unit_cell(inst.geometry.N, inst.unit_cell, inst.geometry.boundary)
    fi = inst.fermion_instance()
    return build_fermi_hubbard(fi) if inst.model == "hubbard" else build_tj(fi)


# -- wire helpers ---------------------------------------------------------

def fpr_to_hex(x: FixedPrecisionReal) -> str:
    return x.encode().hex()


def hex_to_fpr(s: str) -> FixedPrecisionReal:
    return FixedPrecisionReal.decode(bytes.fromhex(s))


def parse_complex(text: str) -> ExactComplex:
    """Exact complex literal: rational or decimal parts, ``j``/``i``
    imaginary suffix (``1``, ``-1/2``, ``0.25``, ``3/4+1/2j``, ``-2j``)."""
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty complex literal")
    try:
        if s[-1] not in "ij":
            return (Fraction(s), Fraction(0))
        body = s[:-1]
        re_txt, im_txt = "", body
        for k in range(len(body) - 1, 0, -1):
            if body[k] in "+-" and body[k - 1] not in "/+-":
                re_txt, im_txt = body[:k], body[k:]
                break
        re_part = Fraction(re_txt) if re_txt else Fraction(0)
        if im_txt in ("", "+"):
            im_part = Fraction(1)
        elif im_txt == "-":
            im_part = Fraction(-1)
        else:
            im_part = Fraction(im_txt)
        return (re_part, im_part)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"bad complex literal {text!r}") from None


def format_complex(z: ExactComplex) -> str:
    re_part, im_part = z
    if im_part == 0:
        return str(re_part)
    if re_part == 0:
        return f"{im_part}j"
    sign = "+" if im_part > 0 else "-"
    return f"{re_part}{sign}{abs(im_part)}j"


_OFFSET_RE = re.compile(r"\((-?\d+(?:,-?\d+)*)\)")


def _parse_term_line(value: str, lineno: int) -> UnitCellTerm:
    parts = value.split(";")
    if len(parts) != 3:
        raise ParseError("term needs <sites>;<hex coupling>;<matrix>", lineno)
    sites = tuple(
        tuple(int(v) for v in m.group(1).split(","))
        for m in _OFFSET_RE.finditer(parts[0])
    )
    if not sites:
        raise ParseError("term has no site offsets", lineno)
    try:
        coupling = hex_to_fpr(parts[1])
    except ValueError as e:
        raise ParseError(f"bad coupling hex: {e}", lineno) from None
    body = parts[2].strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise ParseError("matrix literal must be bracketed", lineno)
    entries = [e for e in body[1:-1].split(",") if e.strip()]
    dim = 1 << len(sites)
    if len(entries) != dim * dim:
        raise ParseError(
            f"matrix needs {dim * dim} entries for {len(sites)} sites, got {len(entries)}",
            lineno)
    try:
        flat = [parse_complex(e) for e in entries]
    except ValueError as e:
        raise ParseError(str(e), lineno) from None
    matrix = tuple(tuple(flat[r * dim + c] for c in range(dim)) for r in range(dim))
    try:
        return UnitCellTerm(sites, coupling, matrix)
    except ValueError as e:
        raise ParseError(str(e), lineno) from None


def _format_term(term: UnitCellTerm) -> str:
    sites = ",".join("(" + ",".join(str(v) for v in off) + ")" for off in term.sites)
    flat = ",".join(format_complex(z) for row in term.matrix for z in row)
    return f"{sites};{fpr_to_hex(term.coupling)};[{flat}]"


def parse_instance(text: str, allow_trailer: bool = False):
    """Parse the textual format; returns the instance, or (instance,
    trailer-lines) when ``allow_trailer`` and a ``[certificate]`` section
    follows."""
    fields: dict[str, tuple[str, int]] = {}
    terms: list[UnitCellTerm] = []
    trailer: list[str] = []
    lines = text.splitlines()
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("["):
            if not allow_trailer:
                raise ParseError(f"unexpected section {line!r}", lineno)
            trailer = lines[lineno - 1:]
            break
        if "=" not in line:
            raise ParseError("expected key=value", lineno)
        key, value = line.split("=", 1)
        key = key.strip()
        value = value.strip()
        if key == "term":
            terms.append(_parse_term_line(value, lineno))
            continue
        if key in fields:
            raise ParseError(f"duplicate key {key!r}", lineno)
        fields[key] = (value, lineno)

    def take(key: str, required: bool = True) -> tuple[str, int] | None:
        if key not in fields:
            if required:
                raise ParseError(f"missing required key {key!r}", len(lines) or 1)
            return None
        return fields.pop(key)

    model, lineno = take("model")
    if model not in MODELS:
        raise ParseError(f"unknown model {model!r}", lineno)
    value, lineno = take("d")
    try:
        d = int(value)
    except ValueError:
        raise ParseError(f"bad dimension {value!r}", lineno) from None
    value, lineno = take("N")
    for col, ch in enumerate(value, start=1):
        if ch != "1":
            raise ParseError(f"unary N must be all 1s, found {ch!r}", lineno, col + 2)
    n_side = len(value)
    value, lineno = take("boundary")
    boundary = value
    value, lineno = take("c")
    try:
        gap_exponent = int(value)
    except ValueError:
        raise ParseError(f"bad gap exponent {value!r}", lineno) from None
    degree = DEFAULT_COUPLING_DEGREE
    got = take("degree", required=False)
    if got:
        try:
            degree = int(got[0])
        except ValueError:
            raise ParseError(f"bad degree {got[0]!r}", got[1]) from None
    n_electrons = None
    got = take("Ne", required=False)
    if got:
        try:
            n_electrons = int(got[0])
        except ValueError:
            raise ParseError(f"bad electron count {got[0]!r}", got[1]) from None

    def take_fpr(key: str, required: bool = True) -> FixedPrecisionReal | None:
        got = take(key, required)
        if got is None:
            return None
        value, lineno = got
        try:
            return hex_to_fpr(value)
        except ValueError as e:
            raise ParseError(f"bad {key} encoding: {e}", lineno) from None

    couplings = {}
    for key in _COUPLING_KEYS[model]:
        couplings[key] = take_fpr(key)
    alpha = take_fpr("alpha")
    beta = take_fpr("beta")

    unit_cell = None
    if model == "unitcell":
        cap = None
        got = take("a", required=False)
        if got:
            try:
                cap = Fraction(got[0])
            except ValueError:
                raise ParseError(f"bad norm cap {got[0]!r}", got[1]) from None
        try:
            unit_cell = UnitCellSpec(d=d, terms=tuple(terms), norm_cap_override=cap)
        except ValueError as e:
            raise ParseError(str(e), len(lines) or 1) from None
    elif terms:
        raise ParseError("term lines only apply to the unitcell model", 1)

    if fields:
        key = next(iter(fields))
        raise ParseError(f"unknown key {key!r}", fields[key][1])

    try:
        geometry = LatticeGeometry(d=d, N=n_side, boundary=boundary)
        inst = ProblemInstance(
            model=model, geometry=geometry, alpha=alpha, beta=beta,
            gap_exponent=gap_exponent, couplings=couplings,
            n_electrons=n_electrons, unit_cell=unit_cell, coupling_degree=degree)
    except (ValueError, ValidationError) as e:
        raise ValidationError(str(e)) from None
    if allow_trailer:
        return inst, trailer
    return inst


def serialize_instance(inst: ProblemInstance) -> str:
    """Canonical text: fixed key order, lowercase hex, newline-terminated."""
    out = [
        f"model={inst.model}",
        f"d={inst.geometry.d}",
        f"N={'1' * inst.geometry.N}",
        f"boundary={inst.geometry.boundary}",
    ]
    if inst.n_electrons is not None:
        out.append(f"Ne={inst.n_electrons}")
    out.append(f"c={inst.gap_exponent}")
    if inst.coupling_degree != DEFAULT_COUPLING_DEGREE:
        out.append(f"degree={inst.coupling_degree}")
    for key in _COUPLING_KEYS[inst.model]:
        out.append(f"{key}={fpr_to_hex(inst.couplings[key])}")
    out.append(f"alpha={fpr_to_hex(inst.alpha)}")
    out.append(f"beta={fpr_to_hex(inst.beta)}")
    if inst.unit_cell is not None:
        if inst.unit_cell.norm_cap_override is not None:
            out.append(f"a={inst.unit_cell.norm_cap_override}")
        for term in inst.unit_cell.terms:
            out.append(f"term={_format_term(term)}")
    return "\n".join(out) + "\n"


def instance_digest(inst: ProblemInstance) -> str:
    """Stable hash of the canonical serialization bytes."""
    return hashlib.sha256(serialize_instance(inst).encode()).hexdigest()
