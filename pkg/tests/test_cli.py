import random
from fractions import Fraction

import pytest

from tispin.cli import (EXIT_CAPACITY, EXIT_CHECK_FAILED, EXIT_FORCED_NO,
                        EXIT_FORCED_YES, EXIT_OK, EXIT_PARSE,
                        EXIT_PROMISE_VIOLATED, EXIT_USAGE, emit_report, main,
                        parse_report)
from tispin.fixedpoint import FixedPrecisionReal
from tispin.instances import ProblemInstance, serialize_instance
from tispin.lattice import LatticeGeometry
from tispin.models import heisenberg_star_cell

from helpers import heisenberg_promise_instance

F = FixedPrecisionReal.from_fraction
Fi = FixedPrecisionReal.from_int


def write_instance(tmp_path, inst, name="inst.txt"):
    path = tmp_path / name
    path.write_text(serialize_instance(inst), encoding="utf-8")
    return str(path)


def plaquette(alpha, beta, c=1):
    return ProblemInstance(
        "heisenberg", LatticeGeometry(2, 2, "open"), F(alpha), F(beta), c,
        {"J": Fi(1)})


def test_solve_yes_exit_zero(tmp_path, capsys):
    path = write_instance(tmp_path, plaquette(Fraction(-7), Fraction(-6)))
    assert main(["solve", path]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith("Yes")


def test_solve_single_edge_instance(tmp_path, capsys):
    inst = ProblemInstance(
        "heisenberg", LatticeGeometry(1, 2, "open"), Fi(-2), Fi(-1), 1,
        {"J": Fi(1)})
    path = write_instance(tmp_path, inst)
    assert main(["solve", path]) == EXIT_OK
    assert capsys.readouterr().out.startswith("Yes")


def test_solve_promise_violated_exit(tmp_path, capsys):
    path = write_instance(tmp_path, plaquette(Fraction(-17, 2), Fraction(-15, 2)))
    assert main(["solve", path]) == EXIT_PROMISE_VIOLATED
    assert "PromiseViolated" in capsys.readouterr().out


def test_reduce_exit_codes_and_byte_identity(tmp_path, capsys):
    # already-sparse instance: identity chain, byte-identical instance out
    inst = ProblemInstance("heisenberg", LatticeGeometry(2, 3, "open"),
                           F(Fraction(-30)), F(Fraction(-29)), 3, {"J": Fi(1)})
    path = write_instance(tmp_path, inst)
    assert main(["reduce", path]) == EXIT_OK
    out = capsys.readouterr().out
    original = serialize_instance(inst)
    assert out[:len(original)] == original
    assert "[certificate]" in out


def test_reduce_forced_exit_codes(tmp_path, capsys):
    p = 24  # J=1, a=6, N=2
    no_inst = plaquette(Fraction(-p - 1), Fraction(-p))
    yes_inst = plaquette(Fraction(p), Fraction(p + 1))
    assert main(["reduce", write_instance(tmp_path, no_inst, "no.txt")]) \
        == EXIT_FORCED_NO
    capsys.readouterr()
    assert main(["reduce", write_instance(tmp_path, yes_inst, "yes.txt")]) \
        == EXIT_FORCED_YES


def test_parse_error_exit_and_message(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    text = serialize_instance(plaquette(Fraction(-7), Fraction(-6)))
    path.write_text(text.replace("N=11", "N=101"), encoding="utf-8")
    assert main(["solve", str(path)]) == EXIT_PARSE
    err = capsys.readouterr().err
    assert "line 3" in err and "col 4" in err


def test_capacity_exit(tmp_path, capsys):
    inst = ProblemInstance(
        "heisenberg", LatticeGeometry(2, 4, "open"), Fi(-200), Fi(-199), 1,
        {"J": Fi(1)})
    path = write_instance(tmp_path, inst)
    # 16 qubits = dim 65536 > the 4096 default build cap
    assert main(["build", path, str(tmp_path / "out.txt")]) == EXIT_CAPACITY


def test_usage_error_exit():
    with pytest.raises(SystemExit) as err:
        main(["frobnicate"])
    assert err.value.code == EXIT_USAGE


def test_build_dump_and_unitcell_equivalence(tmp_path, capsys):
    heis = ProblemInstance(
        "heisenberg", LatticeGeometry(2, 3, "torus"), F(Fraction(-40)),
        F(Fraction(-39)), 1, {"J": Fi(1)})
    cell = ProblemInstance(
        "unitcell", LatticeGeometry(2, 3, "torus"), F(Fraction(-40)),
        F(Fraction(-39)), 1, {}, unit_cell=heisenberg_star_cell(1))
    out_a = tmp_path / "heis.dump"
    out_b = tmp_path / "cell.dump"
    assert main(["build", write_instance(tmp_path, heis, "h.txt"),
                 str(out_a)]) == EXIT_OK
    assert main(["build", write_instance(tmp_path, cell, "c.txt"),
                 str(out_b)]) == EXIT_OK
    dump_a = out_a.read_text(encoding="utf-8")
    dump_b = out_b.read_text(encoding="utf-8")
    assert "dim=512" in dump_a and "pauli_terms=54" in dump_a
    # entry-for-entry identical coordinate dumps
    entries_a = [l for l in dump_a.splitlines() if l.startswith("entry=")]
    entries_b = [l for l in dump_b.splitlines() if l.startswith("entry=")]
    assert entries_a == entries_b


def test_build_metadata_2x2(tmp_path):
    inst = plaquette(Fraction(-9), Fraction(-8))
    out = tmp_path / "dump.txt"
    assert main(["build", write_instance(tmp_path, inst), str(out)]) == EXIT_OK
    text = out.read_text(encoding="utf-8")
    assert "dim=16" in text
    assert "pauli_terms=12" in text
    assert "norm_bound=24" in text


def test_verify_cli_passes(tmp_path, capsys):
    rng = random.Random(4)
    inst, _ = heisenberg_promise_instance(rng, n=2, c=4, yes=True)
    path = write_instance(tmp_path, inst)
    assert main(["verify", path]) == EXIT_OK
    out = capsys.readouterr().out
    assert "PASS answer_preserved" in out
    assert "FAIL" not in out


def test_solve_hubbard_instance(tmp_path, capsys):
    # 2x2 half filling at U=4: the ground energy sits near -3.42
    inst = ProblemInstance(
        "hubbard", LatticeGeometry(2, 2, "open"), F(Fraction(-3)),
        F(Fraction(-2)), 1, {"t": Fi(1), "U": F(Fraction(7, 2))},
        n_electrons=2)
    path = write_instance(tmp_path, inst)
    assert main(["solve", path]) == EXIT_OK
    assert capsys.readouterr().out.startswith("Yes")


def test_census_cli(tmp_path, capsys):
    assert main(["census", "--nmax", "8", "--budget", "2", "--fields", "1"]) \
        == EXIT_OK
    out = capsys.readouterr().out
    assert "declared_degree=3" in out
    assert "fitted_exponent=" in out


def test_stoq_cli(tmp_path, capsys):
    inst = plaquette(Fraction(-9), Fraction(-8))
    path = write_instance(tmp_path, inst)
    out_path = tmp_path / "stoq.dump"
    assert main(["stoq", path, str(out_path)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "off-diagonal <= 0: PASS" in out
    assert "spectrum preserved: PASS" in out
    assert out_path.exists()


def test_stoq_rejects_odd_torus(tmp_path, capsys):
    inst = ProblemInstance(
        "heisenberg", LatticeGeometry(2, 3, "torus"), F(Fraction(-40)),
        F(Fraction(-39)), 1, {"J": Fi(1)})
    path = write_instance(tmp_path, inst)
    assert main(["stoq", path]) == EXIT_PARSE


def test_machine_format_roundtrip(tmp_path, capsys):
    path = write_instance(tmp_path, plaquette(Fraction(-7), Fraction(-6)))
    assert main(["solve", path, "--format", "machine"]) == EXIT_OK
    out = capsys.readouterr().out
    pairs = parse_report(out)
    assert emit_report(pairs) == out
    record = dict(pairs)
    assert record["subcommand"] == "solve"
    assert record["verdict"] == "Yes"
    assert "digest" in record


def test_deterministic_reports(tmp_path, capsys):
    path = write_instance(tmp_path, plaquette(Fraction(-7), Fraction(-6)))
    outs = []
    for _ in range(2):
        main(["solve", path, "--format", "machine", "--seed", "5"])
        pairs = [kv for kv in parse_report(capsys.readouterr().out)
                 if kv[0] != "elapsed_ms"]
        outs.append(pairs)
    assert outs[0] == outs[1]
