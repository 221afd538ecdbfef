import io
import json
import subprocess
import sys
from fractions import Fraction as F

import jsonschema
import pytest

from freeprob.cli import main
from freeprob.functionals import cumulants_to_moments, moments_to_cumulants
from freeprob.jsonio import (
    dumps_canonical,
    functional_to_dict,
    load_schema,
    read_functional,
)
from freeprob.models import bernoulli, free_poisson, semicircle


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# -- nc ---------------------------------------------------------------------


def test_nc_enumerate(capsys):
    code, out, _ = run_cli(capsys, "nc", "enumerate", "4")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 15  # 14 partitions plus the summary
    assert lines[-1] == "NC(4): 14 partitions (Catalan number 14)"
    assert "1 2 3 4" in lines

    code, out, _ = run_cli(capsys, "nc", "enumerate", "4", "--count-only")
    assert out.splitlines() == ["NC(4): 14 partitions (Catalan number 14)"]

    code, out, _ = run_cli(capsys, "nc", "enumerate", "3", "--json")
    payload = json.loads(out)
    assert payload["count"] == 5
    assert "1 3|2" in payload["partitions"]


def test_nc_mobius_single_pair(capsys):
    code, out, _ = run_cli(capsys, "nc", "mobius", "3", "--pi", "1|2|3")
    assert code == 0
    assert out.strip() == "mobius(1|2|3, 1 2 3) = 2"

    code, out, _ = run_cli(
        capsys, "nc", "mobius", "4", "--pi", "1 2|3 4", "--sigma", "1 2 3 4"
    )
    assert out.strip() == "mobius(1 2|3 4, 1 2 3 4) = -1"

    code, out, err = run_cli(
        capsys, "nc", "mobius", "3", "--pi", "1 3|2", "--sigma", "1 2|3"
    )
    assert code == 1  # incomparable pair is a domain error
    assert "error" in err


def test_nc_mobius_table(capsys):
    code, out, _ = run_cli(capsys, "nc", "mobius", "3")
    assert code == 0
    assert len(out.splitlines()) == 5
    code, out, _ = run_cli(capsys, "nc", "mobius", "3", "--json")
    payload = json.loads(out)
    assert payload["sigma"] == "1 2 3"
    assert len(payload["values"]) == 5
    total = sum(v["mobius"] for v in payload["values"])
    assert total == 0  # mu sums to zero over a nontrivial interval


def test_bad_partition_text(capsys):
    code, _, err = run_cli(capsys, "nc", "mobius", "3", "--pi", "1 a|2")
    assert code == 2
    assert "non-integer" in err


# -- model and transform ----------------------------------------------------


def test_model_semicircle_text(capsys):
    code, out, _ = run_cli(capsys, "model", "semicircle", "--order", "4")
    assert code == 0
    assert "phi(s s) = 1" in out
    assert "phi(s s s s) = 2" in out


def test_model_free_poisson_json(capsys):
    code, out, _ = run_cli(
        capsys, "model", "free_poisson", "--rate", "1", "--jump", "1",
        "--order", "4", "--json",
    )
    payload = json.loads(out)
    jsonschema.validate(payload, load_schema("functional"))
    assert payload["vars"] == ["x"]
    assert payload["table"]["x x x x"] == "14"


def test_model_family_and_projection(capsys):
    code, out, _ = run_cli(
        capsys, "model", "semicircle_family", "--cov", "1,1/2;1/2,1",
        "--names", "u,v", "--order", "2", "--json",
    )
    payload = json.loads(out)
    assert payload["vars"] == ["u", "v"]
    assert payload["table"]["u v"] == "1/2"

    code, out, _ = run_cli(
        capsys, "model", "projection", "--trace", "1/3", "--order", "3"
    )
    assert "phi(p p p) = 1/3" in out


def test_model_writes_file(tmp_path, capsys):
    out_path = tmp_path / "sc.json"
    code, out, _ = run_cli(
        capsys, "model", "semicircle", "--order", "6", "--out", str(out_path)
    )
    assert code == 0
    assert "wrote 6 entries" in out
    assert read_functional(out_path) == semicircle(2, 6)


def test_transform_roundtrip(tmp_path, capsys):
    m_path = tmp_path / "m.json"
    c_path = tmp_path / "c.json"
    back_path = tmp_path / "back.json"
    run_cli(capsys, "model", "semicircle", "--order", "6", "--out", str(m_path))

    code, _, _ = run_cli(
        capsys, "transform", "m2c", "--in", str(m_path), "--out", str(c_path)
    )
    assert code == 0
    assert read_functional(c_path) == moments_to_cumulants(semicircle(2, 6))

    code, _, _ = run_cli(
        capsys, "transform", "c2m", "--in", str(c_path), "--out", str(back_path)
    )
    assert code == 0
    assert read_functional(back_path) == semicircle(2, 6)

    # direction must match the file kind
    code, _, err = run_cli(capsys, "transform", "c2m", "--in", str(m_path))
    assert code == 2
    assert "kind" in err


def test_compound_model_from_base_file(tmp_path, capsys):
    base_path = tmp_path / "base.json"
    run_cli(
        capsys, "model", "projection", "--trace", "1/2", "--order", "4",
        "--out", str(base_path),
    )
    code, out, _ = run_cli(
        capsys, "model", "compound_free_poisson", "--rate", "2",
        "--base", str(base_path), "--json",
    )
    assert code == 0
    payload = json.loads(out)
    # kappa_n = rate * trace = 1 for every n, so moments count NC(n)
    assert payload["kind"] == "moments"
    assert payload["table"]["p p p"] == "5"


# -- limit ------------------------------------------------------------------


def write_json(path, payload):
    path.write_text(dumps_canonical(payload))


def test_limit_poisson(tmp_path, capsys):
    spec = tmp_path / "spec.json"
    write_json(spec, {"rate": "1", "jump": "1"})
    code, out, _ = run_cli(
        capsys, "limit", "poisson", "--spec", str(spec),
        "--schedule", "10,100", "--order", "3",
    )
    assert code == 0
    assert "poisson convergence" in out

    code, out, _ = run_cli(
        capsys, "limit", "poisson", "--spec", str(spec),
        "--schedule", "10,100", "--order", "3", "--json",
    )
    payload = json.loads(out)
    jsonschema.validate(payload, load_schema("convergence_report"))
    assert payload["schedule"] == ["10", "100"]


def test_limit_multi_and_compound(tmp_path, capsys):
    spec = tmp_path / "multi.json"
    write_json(spec, {"rates": ["1", "2"], "jumps": ["1", "1"], "model": "orthogonal"})
    code, out, _ = run_cli(
        capsys, "limit", "multi", "--spec", str(spec),
        "--schedule", "10,100", "--order", "3",
    )
    assert code == 0

    spec2 = tmp_path / "compound.json"
    write_json(
        spec2,
        {
            "rates": ["2"],  # one rate per base variable
            "model": "equal",
            "base": functional_to_dict(semicircle(2, 3)),
        },
    )
    code, out, _ = run_cli(
        capsys, "limit", "compound", "--spec", str(spec2),
        "--schedule", "10,100", "--order", "3",
    )
    assert code == 0


def test_limit_spec_errors(tmp_path, capsys):
    missing = tmp_path / "nope.json"
    code, _, err = run_cli(capsys, "limit", "poisson", "--spec", str(missing))
    assert code == 2

    bad = tmp_path / "bad.json"
    bad.write_text("[1, 2")
    code, _, _ = run_cli(capsys, "limit", "poisson", "--spec", str(bad))
    assert code == 2

    spec = tmp_path / "nomodel.json"
    write_json(spec, {"rates": ["1"]})
    code, _, err = run_cli(capsys, "limit", "multi", "--spec", str(spec))
    assert code == 2
    assert "model" in err


# -- infdiv and fock --------------------------------------------------------


def test_infdiv_check(tmp_path, capsys):
    ok_path = tmp_path / "sc.json"
    run_cli(capsys, "model", "semicircle", "--order", "4", "--out", str(ok_path))
    code, out, _ = run_cli(
        capsys, "infdiv", "check", "--in", str(ok_path), "--degree", "2"
    )
    assert code == 0
    assert out.startswith("PASS")

    bad_path = tmp_path / "bern.json"
    run_cli(capsys, "model", "bernoulli", "--order", "4", "--out", str(bad_path))
    code, out, _ = run_cli(
        capsys, "infdiv", "check", "--in", str(bad_path), "--degree", "2"
    )
    assert code == 0  # a FAIL verdict is still a successful run
    assert out.startswith("FAIL")
    assert "witness" in out

    code, out, _ = run_cli(
        capsys, "infdiv", "check", "--in", str(bad_path), "--degree", "2", "--json"
    )
    payload = json.loads(out)
    jsonschema.validate(payload, load_schema("infdiv_verdict"))
    assert payload["verdict"] == "FAIL"


def test_fock_verify(tmp_path, capsys):
    path = tmp_path / "sc.json"
    run_cli(capsys, "model", "semicircle", "--order", "5", "--out", str(path))
    code, out, _ = run_cli(capsys, "fock", "verify", "--in", str(path), "--order", "2")
    assert code == 0
    assert "[PASS]" in out
    assert "FAIL" not in out

    code, out, _ = run_cli(
        capsys, "fock", "verify", "--in", str(path), "--order", "2", "--json"
    )
    payload = json.loads(out)
    jsonschema.validate(payload, load_schema("levy_report"))
    assert payload["passed"] is True

    # a table of order 5 cannot support order-3 verification
    code, _, err = run_cli(capsys, "fock", "verify", "--in", str(path), "--order", "3")
    assert code == 1
    assert "order" in err


# -- approx -----------------------------------------------------------------


def test_approx(tmp_path, capsys):
    target = tmp_path / "fp.json"
    run_cli(capsys, "model", "free_poisson", "--order", "4", "--out", str(target))
    code, out, _ = run_cli(
        capsys, "approx", "--target", str(target), "--j", "1,10", "--order", "3"
    )
    assert code == 0
    assert "convergence" in out

    bern = tmp_path / "b.json"
    run_cli(capsys, "model", "bernoulli", "--order", "4", "--out", str(bern))
    code, out, _ = run_cli(
        capsys, "approx", "--target", str(bern), "--j", "1,4", "--order", "4"
    )
    assert code == 0
    assert "not positive at j = 4" in out


# -- run --------------------------------------------------------------------


def test_run_script(tmp_path, capsys):
    script = tmp_path / "session.fp"
    script.write_text(
        "let s = semicircle()\nlet x = free_poisson()\n"
        "free(s, x)\nphi(s*x*s*x)\nkappa(x, x)\n"
    )
    code, out, _ = run_cli(capsys, "run", str(script), "--order", "4")
    assert code == 0
    assert out.splitlines() == ["phi = 1", "kappa = 1"]

    code, out, _ = run_cli(capsys, "run", str(script), "--order", "4", "--json")
    payload = json.loads(out)
    assert [p["kind"] for p in payload] == ["let", "let", "free", "phi", "kappa"]
    assert payload[3]["result"] == "1"


def test_run_stdin(monkeypatch, capsys):
    monkeypatch.setattr(sys, "stdin", io.StringIO("phi(1/2 + 1/3)\n"))
    code, out, _ = run_cli(capsys, "run", "-")
    assert code == 0
    assert out.strip() == "phi = 5/6"


def test_run_error_codes(tmp_path, capsys):
    code, _, _ = run_cli(capsys, "run", str(tmp_path / "absent.fp"))
    assert code == 2

    bad = tmp_path / "bad.fp"
    bad.write_text("phi(s +)\n")
    code, _, err = run_cli(capsys, "run", str(bad))
    assert code == 2
    assert "expected" in err

    unbound = tmp_path / "unbound.fp"
    unbound.write_text("phi(z)\n")
    code, _, err = run_cli(capsys, "run", str(unbound))
    assert code == 1
    assert "unbound" in err

    script = tmp_path / "fine.fp"
    script.write_text("phi(1)\n")
    code, _, _ = run_cli(capsys, "run", str(script), "--order", "99")
    assert code == 1  # session order cap


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["nonsense"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["model", "semicircle", "--radius", "abc"])
    assert info.value.code == 2


def test_json_output_is_deterministic(capsys):
    _, first, _ = run_cli(capsys, "model", "semicircle", "--order", "6", "--json")
    _, second, _ = run_cli(capsys, "model", "semicircle", "--order", "6", "--json")
    assert first == second


def test_console_script_entry_point():
    proc = subprocess.run(
        ["freeprob", "nc", "enumerate", "3", "--count-only"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "5 partitions" in proc.stdout
