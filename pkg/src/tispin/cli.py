"""Command-line front end.

Subcommands: build, reduce, solve, verify, census, stoq.  Exit codes:
0 reduced/decided/passed, 10 forced-yes, 11 forced-no, 20 promise
violated, 1 usage, 2 parse or invalid input, 3 capacity, 4 failed
verification check.  ``--format machine`` emits line-delimited
``key=value`` records whose parse/re-emit round trip is byte-stable.
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from . import __version__
from .instances import (ParseError, ValidationError, build_operator,
                        instance_digest, parse_instance, serialize_instance)
from .models import stoquastic_transform_for_geometry
from .pauli import CapacityError
from .reduction import (FORCED_NO, FORCED_YES, census, declared_degree,
                        fitted_exponent, serialize_certificate, sparsify,
                        verify_reduction)
from . import spectral

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_CAPACITY = 3
EXIT_CHECK_FAILED = 4
EXIT_FORCED_YES = 10
EXIT_FORCED_NO = 11
EXIT_PROMISE_VIOLATED = 20


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def emit_report(pairs) -> str:
    """Machine report: one key=value per line, order preserved."""
    return "".join(f"{k}={v}\n" for k, v in pairs)


def parse_report(text: str) -> list[tuple[str, str]]:
    out = []
    for line in text.splitlines():
        if not line:
            continue
        key, value = line.split("=", 1)
        out.append((key, value))
    return out


def _read_instance(path: str):
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


def _report_header(subcommand: str, inst) -> list[tuple[str, str]]:
    return [
        ("subcommand", subcommand),
        ("version", __version__),
        ("digest", instance_digest(inst)),
    ]


def _finish(args, pairs, body: str, started: float, code: int) -> int:
    if args.format == "machine":
        pairs.append(("elapsed_ms", str(int((time.monotonic() - started) * 1000))))
        sys.stdout.write(emit_report(pairs))
    if body:
        sys.stdout.write(body)
    return code


def _dump_operator(op, max_dim: int, norm_bound) -> str:
    m = op.matrix(max_dim=max_dim).tocoo()
    lines = [
        f"dim={op.dim}",
        f"pauli_terms={len(op.terms) if op.terms is not None else 0}",
        f"nnz={m.nnz}",
        f"hermitian={int(op.hermitian)}",
        f"diagonal={int(op.diagonal)}",
        f"norm_bound={norm_bound}",
    ]
    order = np.lexsort((m.col, m.row))
    for i in order:
        v = complex(m.data[i])
        lines.append(f"entry={m.row[i]} {m.col[i]} {v.real!r} {v.imag!r}")
    return "\n".join(lines) + "\n"


def cmd_build(args) -> int:
    started = time.monotonic()
    inst = _read_instance(args.instance)
    op = build_operator(inst)
    dump = _dump_operator(op, args.max_dim, inst.norm_bound())
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(dump)
    pairs = _report_header("build", inst) + [
        ("dim", str(op.dim)),
        ("terms", str(op.term_count())),
        ("out", args.out),
    ]
    body = "" if args.format == "machine" else (
        f"wrote {args.out}: dim={op.dim} terms={op.term_count()}"
        f" norm_bound={inst.norm_bound()}\n")
    return _finish(args, pairs, body, started, EXIT_OK)


def cmd_reduce(args) -> int:
    started = time.monotonic()
    inst = _read_instance(args.instance)
    result = sparsify(inst)
    body = serialize_instance(result.instance)
    for cert in result.chain:
        body += serialize_certificate(cert)
    if result.has_exemption():
        sys.stderr.write("warning: small-N exemption certificates in chain\n")
    pairs = _report_header("reduce", inst) + [
        ("verdict", result.forced or "reduced"),
        ("steps", str(len(result.chain))),
        ("budget_constant", str(result.budget_constant())),
    ]
    code = {FORCED_YES: EXIT_FORCED_YES, FORCED_NO: EXIT_FORCED_NO}.get(
        result.forced, EXIT_OK)
    return _finish(args, pairs, body, started, code)


def cmd_solve(args) -> int:
    started = time.monotonic()
    inst = _read_instance(args.instance)
    decision = spectral.decide_promise(
        inst, args.method, seed=args.seed, res_tol=args.tolerance)
    pairs = _report_header("solve", inst) + [
        ("verdict", decision.verdict),
        ("lambda", repr(decision.value) if decision.value is not None else ""),
        ("error_bound", repr(decision.error_bound)
         if decision.error_bound is not None else ""),
    ]
    body = ""
    if args.format != "machine":
        body = f"{decision.verdict}"
        if decision.value is not None:
            body += f" lambda={decision.value!r} error_bound={decision.error_bound!r}"
        if decision.diagnostic:
            body += f" ({decision.diagnostic})"
        body += "\n"
    code = EXIT_PROMISE_VIOLATED if decision.verdict == spectral.PROMISE_VIOLATED \
        else EXIT_OK
    return _finish(args, pairs, body, started, code)


def cmd_verify(args) -> int:
    started = time.monotonic()
    inst = _read_instance(args.instance)
    report = verify_reduction(inst, method=args.method, seed=args.seed)
    lines = []
    for check in report.checks:
        status = "SKIP" if check.skipped else ("PASS" if check.passed else "FAIL")
        lines.append(f"{status} {check.name}: {check.detail}")
    body = "\n".join(lines) + "\n"
    pairs = _report_header("verify", inst) + [
        ("passed", str(int(report.passed))),
        ("checks", str(len(report.checks))),
    ]
    return _finish(args, pairs, body, started,
                   EXIT_OK if report.passed else EXIT_CHECK_FAILED)


def cmd_census(args) -> int:
    started = time.monotonic()
    rows = census(args.nmax, args.budget, n_fields=args.fields)
    degree = declared_degree(args.budget, args.fields)
    lines = [f"{'N':>4} {'count':>16} {'exponent':>10}"]
    for n, count, expo in rows:
        lines.append(f"{n:>4} {count:>16} {expo:>10.4f}")
    fit = fitted_exponent(rows) if len(rows) > 1 else float("nan")
    lines.append(f"fitted_exponent={fit:.4f}")
    lines.append(f"declared_degree={degree}")
    body = "\n".join(lines) + "\n"
    pairs = [
        ("subcommand", "census"),
        ("version", __version__),
        ("nmax", str(args.nmax)),
        ("budget", str(args.budget)),
        ("fitted_exponent", f"{fit:.6f}"),
        ("declared_degree", str(degree)),
    ]
    if args.format == "machine":
        body = ""
        pairs += [(f"count_{n}", str(count)) for n, count, _ in rows]
    return _finish(args, pairs, body, started, EXIT_OK)


def cmd_stoq(args) -> int:
    started = time.monotonic()
    inst = _read_instance(args.instance)
    op = build_operator(inst)
    transformed, a_sites = stoquastic_transform_for_geometry(op, inst.geometry)
    if transformed.dim <= (1 << 10):
        entries = transformed.exact_entries()
        off_ok = all(v[0] <= 0 and v[1] == 0
                     for (r, c), v in entries.items() if r != c)
    else:
        m = transformed.matrix(max_dim=args.max_dim).tocoo()
        off = m.row != m.col
        off_ok = bool(np.all(m.data[off].real <= 0)
                      and np.all(np.abs(m.data[off].imag) < 1e-12))
    spec_a = spectral.full_spectrum(op)
    spec_b = spectral.full_spectrum(transformed)
    spec_ok = bool(np.max(np.abs(spec_a - spec_b)) <= 1e-10)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(_dump_operator(transformed, args.max_dim, inst.norm_bound()))
    body = (
        f"off-diagonal <= 0: {'PASS' if off_ok else 'FAIL'}\n"
        f"spectrum preserved: {'PASS' if spec_ok else 'FAIL'}\n")
    pairs = _report_header("stoq", inst) + [
        ("off_diagonal_ok", str(int(off_ok))),
        ("spectrum_ok", str(int(spec_ok))),
        ("a_sites", ",".join(str(s) for s in sorted(a_sites))),
    ]
    return _finish(args, pairs, body, started,
                   EXIT_OK if off_ok and spec_ok else EXIT_CHECK_FAILED)


def make_parser() -> _Parser:
    parser = _Parser(prog="tispin", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="cmd", required=True)

    def common(p):
        p.add_argument("--method", choices=("auto", "dense", "iterative"),
                       default="auto")
        p.add_argument("--tolerance", type=float, default=1e-9,
                       help="iterative residual tolerance (relative)")
        p.add_argument("--seed", type=int, default=spectral.DEFAULT_SEED,
                       help="iterative start-vector seed")
        p.add_argument("--max-dim", type=int, default=1 << 12)
        p.add_argument("--format", choices=("text", "machine"), default="text")

    p = sub.add_parser("build", help="write the operator in coordinate form")
    p.add_argument("instance")
    p.add_argument("out")
    common(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("reduce", help="sparsify and print the certificate chain")
    p.add_argument("instance")
    common(p)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("solve", help="decide the promise problem")
    p.add_argument("instance")
    common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check reduction soundness end to end")
    p.add_argument("instance")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("census", help="count canonical sparse encodings")
    p.add_argument("--nmax", type=int, default=8)
    p.add_argument("--budget", type=int, default=2)
    p.add_argument("--fields", type=int, default=3,
                   help="number of free binary arguments")
    common(p)
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("stoq", help="apply the sign-fixing conjugation")
    p.add_argument("instance")
    p.add_argument("out", nargs="?", default="")
    common(p)
    p.set_defaults(func=cmd_stoq)
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as e:
        sys.stderr.write(f"parse error: {e}\n")
        return EXIT_PARSE
    except ValidationError as e:
        sys.stderr.write(f"invalid instance: {e}\n")
        return EXIT_PARSE
    except CapacityError as e:
        sys.stderr.write(f"capacity: {e}\n")
        return EXIT_CAPACITY
    except ValueError as e:
        sys.stderr.write(f"invalid input: {e}\n")
        return EXIT_PARSE
    except OSError as e:
        sys.stderr.write(f"io error: {e}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
