import json
import shutil

import pytest

from linkweights.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_psi_of_sec5_example(capsys, fixtures):
    code, out, _ = run(capsys, "psi", str(fixtures / "example-sec5.dgm"))
    assert code == 0 and out == "0\n"


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "--degree", "2", "--strings", "2")
    assert code == 0 and out.endswith("# 15 diagrams\n")
    code, out, _ = run(capsys, "enumerate", "--degree", "2", "--strings", "2", "--format", "json")
    assert json.loads(out)["count"] == 15


def test_guard_exit_code(capsys):
    code, _, err = run(capsys, "enumerate", "--degree", "6", "--strings", "2")
    assert code == 2 and "exceed" in err


def test_input_error_exit_code(capsys, tmp_path):
    bad = tmp_path / "bad.dgm"
    bad.write_text("strings 1\nleg a on 1\nvertex v x y\n")
    code, _, err = run(capsys, "canon", str(bad))
    assert code == 1 and "line 3" in err
    code, _, _ = run(capsys, "phi", "--N", "2", str(tmp_path / "missing.dgm"))
    assert code == 1
    code, _, _ = run(capsys, "repro", "no-such-claim")
    assert code == 1


def test_repro_failure_exit_code(capsys, fixtures, tmp_path):
    for f in fixtures.iterdir():
        shutil.copy(f, tmp_path / f.name)
    # swap two colors: the transcription no longer matches the published values
    h = tmp_path / "heptapus.dgm"
    h.write_text(h.read_text().replace("leg l1 color 1", "leg l1 color 2"))
    code, out, _ = run(capsys, "repro", "prop2", "--fixtures", str(tmp_path))
    assert code == 3 and out.startswith("[fail] prop2")
    (tmp_path / "heptapus.dgm").unlink()
    code, _, _ = run(capsys, "repro", "prop2", "--fixtures", str(tmp_path))
    assert code == 3


def test_repro_fast_claims(capsys):
    for claim in ("sec3-example", "sec5-example", "prop2", "necklace-minimal", "sec2-smalldeg"):
        code, out, _ = run(capsys, "repro", claim)
        assert code == 0 and out.startswith(f"[pass] {claim}")
    code, out, _ = run(capsys, "repro", "prop2", "--format", "json")
    assert json.loads(out)[0]["status"] == "pass"


def test_phi_is_deterministic_across_jobs(capsys, fixtures):
    path = str(fixtures / "example-sec3.dgm")
    outs = {run(capsys, "phi", "--N", "3", "--jobs", str(j), path)[1] for j in (1, 2)}
    outs |= {run(capsys, "phi", "--N", "3", path)[1]}
    assert len(outs) == 1


def test_check_invertible_via_psi(capsys, fixtures):
    code, out, _ = run(capsys, "check-invertible", "--via", "psi", str(fixtures / "heptapus.dgm"))
    assert code == 0 and out.startswith("NOT invariant under tau_S")
    code, out, _ = run(capsys, "check-invertible", "--via", "psi", str(fixtures / "example-sec5.dgm"))
    assert out.startswith("invariant")


def test_check_invertible_via_phi_small(capsys, fixtures):
    code, out, _ = run(capsys, "check-invertible", "--N", "2", str(fixtures / "example-sec2-p3.dgm"))
    assert code == 0 and out.startswith("NOT invariant under tau_U")


@pytest.mark.slow
def test_check_invertible_prop1(capsys, fixtures):
    code, out, _ = run(capsys, "check-invertible", "--via", "phi", "--N", "4", str(fixtures / "prop1-left.dgm"))
    assert code == 0 and out.startswith("NOT invariant under tau_U")


def test_stu_tau_chi_canon(capsys, fixtures):
    code, out, _ = run(capsys, "stu", str(fixtures / "example-sec2-stu.dgm"))
    assert code == 0 and out.count("term ") == 2
    code, out, _ = run(capsys, "tau", str(fixtures / "example-sec2-p3.dgm"))
    assert out == "term 1\np=3; s1: A; s2: B A; s3: B\n"
    code, out, _ = run(capsys, "chi", str(fixtures / "example-sec5.dgm"))
    assert code == 0
    code, out, _ = run(capsys, "canon", str(fixtures / "heptapus.dgm"))
    assert out.startswith("term -1\ntype jacobi")


def test_span_check(capsys, tmp_path):
    f = tmp_path / "v.lc"
    f.write_text("term 1\np=2; s1: A B A; s2: B\nterm -1\np=2; s1: A B A; s2: B\n")
    code, out, _ = run(capsys, "span-check", str(f))
    assert code == 0 and out.startswith("in span")
    f.write_text("p=2; s1: A B A B; s2:\n")
    code, out, _ = run(capsys, "span-check", "--relations", "4T,1T", "--format", "json", str(f))
    assert json.loads(out)["in_span"] is False
    code, _, _ = run(capsys, "span-check", "--relations", "5T", str(f))
    assert code == 1
