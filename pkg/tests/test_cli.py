from fractions import Fraction

from formlift import cli
from formlift import polytope as pt


def run(capsys, *argv):
    code = cli.dispatch(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_parse_and_reduce(tmp_path, capsys):
    f = tmp_path / "f.bool"
    f.write_text("!(x1 & !x2)\n")
    code, out, _ = run(capsys, "parse", "--formula", str(f))
    assert code == 0 and out.strip() == "!(x1 & !x2)"
    code, out, _ = run(capsys, "reduce", "--formula", str(f))
    assert code == 0 and out.strip() == "!x1 | x2"


def test_lift_optimize_round_trip(tmp_path, capsys):
    f = tmp_path / "phi.bool"
    f.write_text("(x1 | x2) & (x2 | x3) & (x1 | x3)\n")
    ef = tmp_path / "lift.ef"
    code, out, err = run(capsys, "lift", "--formula", str(f),
                         "--polytope", "cube", "--rounds", "1",
                         "--out", str(ef))
    assert code == 0
    assert "round 1:" in err
    # the written file re-parses to a formulation with identical optima
    Q = pt.from_text(ef.read_text())
    code, out, _ = run(capsys, "optimize", "--ef", str(ef), "--min",
                       "--obj", "1,1,1")
    assert code == 0
    from formlift import lpsolve as lp
    assert Fraction(out.strip()) == lp.optimize(Q, (1, 1, 1), "min").value
    assert Fraction(out.strip()) == Fraction(3, 2)


def test_lift_writes_stdout_without_out(tmp_path, capsys):
    f = tmp_path / "phi.bool"
    f.write_text("x1\n")
    code, out, _ = run(capsys, "lift", "--formula", str(f), "--rounds", "1")
    assert code == 0
    assert out.startswith("ef\n")


def test_optimize_spec_pipeline(tmp_path, capsys):
    f = tmp_path / "bz5.bool"
    code, out, _ = run(capsys, "gen", "bz", "--n", "5", "--out", str(tmp_path))
    assert code == 0 and out.strip() == "instance bz5 n=5"
    ef = tmp_path / "bz5_l2.ef"
    code, _, _ = run(capsys, "lift", "--formula", str(tmp_path / "bz5.bool"),
                     "--polytope", "cube", "--rounds", "2", "--out", str(ef))
    assert code == 0
    code, out, _ = run(capsys, "optimize", "--ef", str(ef), "--min",
                       "--obj", "1,1,1,1,1")
    assert code == 0
    assert out.strip() == "2"


def test_member_exit_codes(tmp_path, capsys):
    f = tmp_path / "phi.bool"
    f.write_text("x1 & x2\n")
    ef = tmp_path / "l.ef"
    run(capsys, "lift", "--formula", str(f), "--out", str(ef))
    code, out, _ = run(capsys, "member", "--ef", str(ef), "--point", "1,1")
    assert code == 0 and out.strip() == "inside"
    code, out, _ = run(capsys, "member", "--ef", str(ef), "--point", "1/2,1")
    assert code == 1 and out.strip() == "outside"


def test_measure_example(capsys):
    code, out, _ = run(capsys, "measure", "--ineq", "x1 + x5 >= 1", "--n", "5")
    assert code == 0 and out.strip() == "pitch=1 notch=4"


def test_measure_with_coefficients(capsys):
    code, out, _ = run(capsys, "measure", "--ineq", "2*x1 - x2 >= 1", "--n", "2")
    assert code == 0
    assert out.strip() == "pitch=2 notch=2"


def test_measure_rejects_bad_input(capsys):
    code, _, err = run(capsys, "measure", "--ineq", "x1 <= 1", "--n", "1")
    assert code == 2 and "formlift:" in err
    code, _, err = run(capsys, "measure", "--ineq", "x9 >= 1", "--n", "2")
    assert code == 2


def test_notchset_from_points_and_formula(tmp_path, capsys):
    pts = tmp_path / "pts.txt"
    pts.write_text("1 1 0\n1 0 1\n0 1 1\n1 1 1\n")
    code, out, _ = run(capsys, "notchset", "--points", str(pts))
    assert code == 0 and out.strip() == "notch=2"
    f = tmp_path / "f.bool"
    f.write_text("x1 & x2 & x3\n")
    code, out, _ = run(capsys, "notchset", "--formula", str(f))
    assert code == 0 and out.strip() == "notch=3"


def test_closure_exit_codes(tmp_path, capsys):
    f = tmp_path / "tri.bool"
    f.write_text("(x1 | x2) & (x2 | x3) & (x1 | x3)\n")
    code, out, _ = run(capsys, "closure", "--mode", "pitch", "--level", "1",
                       "--formula", str(f), "--rounds", "1")
    assert code == 0 and "violation=none" in out
    cube_file = tmp_path / "cube.ef"
    cube_file.write_text(pt.to_text(pt.cube(3)))
    code, out, _ = run(capsys, "closure", "--mode", "pitch", "--level", "1",
                       "--formula", str(f), "--ef", str(cube_file))
    assert code == 1 and "violated at" in out


def test_gen_families(tmp_path, capsys):
    code, out, _ = run(capsys, "gen", "matching-k4", "--out", str(tmp_path))
    assert code == 0 and out.strip() == "instance matching-k4 n=6"
    assert (tmp_path / "matching-k4.bool").exists()
    assert (tmp_path / "matching-k4.ef").exists()
    m = tmp_path / "m.txt"
    m.write_text("1 1 0\n0 1 1\n")
    code, out, _ = run(capsys, "gen", "covering", "--matrix", str(m),
                       "--out", str(tmp_path))
    assert code == 0 and out.strip() == "instance covering n=3"
    code, out, _ = run(capsys, "gen", "bounded", "--matrix", str(m),
                       "--b", "2,1", "--out", str(tmp_path))
    assert code == 0
    code, _, err = run(capsys, "gen", "bz")
    assert code == 2 and "needs --n" in err


def test_verify_subcommand_and_jobs(tmp_path, capsys):
    run(capsys, "gen", "bz", "--n", "4", "--out", str(tmp_path))
    run(capsys, "gen", "matching-k4", "--out", str(tmp_path))
    bz = str(tmp_path / "bz4.bool")
    k4 = str(tmp_path / "matching-k4.bool")
    code, out, _ = run(capsys, "verify", "sandwich", "--formula", bz, k4,
                       "--jobs", "2")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 2
    assert lines[0].startswith("check=sandwich instance=bz4 verdict=pass")
    assert lines[1].startswith("check=sandwich instance=matching-k4 verdict=pass")
    code, out2, _ = run(capsys, "verify", "sandwich", "--formula", bz, k4)
    assert out2.strip().splitlines() == lines  # independent of --jobs


def test_verify_complete_example(tmp_path, capsys):
    f = tmp_path / "any3.bool"
    f.write_text("(x1 & !x2) | (x2 & x3)\n")
    code, out, _ = run(capsys, "verify", "complete", "--formula", str(f),
                       "--rounds", "3")
    assert code == 0
    assert "verdict=pass" in out


def test_verify_failure_exit(tmp_path, capsys):
    # a formula over 21 variables exceeds the enumeration cap: usage error
    f = tmp_path / "big.bool"
    f.write_text(" & ".join(f"x{i}" for i in range(1, 22)) + "\n")
    code, _, err = run(capsys, "verify", "sandwich", "--formula", str(f))
    assert code == 2 and "formlift:" in err


def test_byte_identical_reports(tmp_path, capsys):
    run(capsys, "gen", "bz", "--n", "4", "--out", str(tmp_path))
    bz = str(tmp_path / "bz4.bool")
    code1, out1, _ = run(capsys, "verify", "pitch", "--formula", bz,
                         "--rounds", "2", "--seed", "9")
    code2, out2, _ = run(capsys, "verify", "pitch", "--formula", bz,
                         "--rounds", "2", "--seed", "9")
    assert (code1, out1) == (code2, out2)


def test_usage_errors_exit_two(tmp_path, capsys):
    code, _, err = run(capsys, "optimize", "--ef", str(tmp_path / "no.ef"),
                       "--min", "--obj", "1")
    assert code == 2
    bad = tmp_path / "bad.ef"
    bad.write_text("garbage\n")
    code, _, err = run(capsys, "optimize", "--ef", str(bad), "--min", "--obj", "1")
    assert code == 2 and "formlift:" in err
    f = tmp_path / "f.bool"
    f.write_text("x1 & x2\n")
    code, _, err = run(capsys, "lift", "--formula", str(f), "--rounds", "-1")
    assert code == 2


def test_run_config_validation():
    import pytest
    with pytest.raises(ValueError):
        cli.RunConfig("lift", (), rounds=-1)
    with pytest.raises(ValueError):
        cli.RunConfig("lift", (), jobs=0)
    with pytest.raises(ValueError):
        cli.RunConfig("lift", (), hull_cap=0)
