import json
import os
import subprocess
import sys

import pytest

from adjtorsion.cli import main as cli_main
from adjtorsion.cli import parse_complex
from adjtorsion.errors import DomainError
from adjtorsion.verify import khovanskii_certify, twisted_index, verify_vanishing
from conftest import random_generic_z

EXPECTED_TOP_KEYS = ["preset", "slope", "z", "x", "precision_bits",
                     "components", "total_sum", "vanishing_metric", "verdict",
                     "khovanskii", "index_values", "elapsed_ms"]


def test_parse_complex_literals():
    assert parse_complex("1.5+0.5i") == complex(1.5, 0.5)
    assert parse_complex("1.5-0.5i") == complex(1.5, -0.5)
    assert parse_complex("2") == complex(2, 0)
    assert parse_complex("-3.25") == complex(-3.25, 0)
    assert parse_complex("2i") == complex(0, 2)
    assert parse_complex("-i") == complex(0, -1)
    assert parse_complex("1e-3+2.5e2i") == complex(0.001, 250.0)
    with pytest.raises(ValueError):
        parse_complex("")


def test_report_schema_and_json(k41, tmp_path):
    report = verify_vanishing(k41, 1, 1, z=complex(1.5, 0.5),
                              genus_list=[0, 1, 2])
    doc = report.json_dict()
    assert list(doc.keys()) == EXPECTED_TOP_KEYS
    assert doc["slope"] == [1, 1]
    assert set(doc["z"].keys()) == {"re", "im"}
    comp = doc["components"][0]
    assert set(comp.keys()) == {"index", "points", "inverse_sum"}
    pt = comp["points"][0]
    assert set(pt.keys()) == {"y", "m", "l", "torsion", "residual"}
    assert set(pt["torsion"].keys()) == {"re", "im"}
    assert doc["verdict"] == "PASS"
    assert set(doc["index_values"].keys()) == {"0", "1", "2"}
    text = report.to_json()
    parsed = json.loads(text)
    assert parsed["preset"] == "4_1"


def test_report_determinism(k41):
    """Byte-identical output for identical inputs, elapsed time aside."""
    r1 = verify_vanishing(k41, 3, 1, z=complex(1.5, 0.5))
    r2 = verify_vanishing(k41, 3, 1, z=complex(1.5, 0.5))
    d1, d2 = r1.json_dict(), r2.json_dict()
    d1["elapsed_ms"] = d2["elapsed_ms"] = 0
    assert json.dumps(d1) == json.dumps(d2)


def test_twisted_index_structure(k41, k52, rng):
    for preset, slope in ((k41, (1, 1)), (k52, (3, 1))):
        counts = set()
        for _ in range(3):
            z = random_generic_z(rng)
            v1 = twisted_index(preset, *slope, z=z, g=1)
            c = complex(float(v1.real), float(v1.imag))
            assert abs(c.imag) < 1e-12
            assert abs(c.real - round(c.real)) < 1e-12
            assert round(c.real) > 0
            counts.add(round(c.real))
        assert len(counts) == 1  # z-independent
        z = random_generic_z(rng)
        v0 = twisted_index(preset, *slope, z=z, g=0)
        report = verify_vanishing(preset, *slope, z=z)
        max_term = max(abs(complex(float(p.torsion_gamma.real),
                                   float(p.torsion_gamma.imag))) ** -1
                       for c in report.components for p in c.points)
        assert abs(complex(float(v0.real), float(v0.imag))) <= 1e-6 * max_term


def test_twisted_index_genus_two(k41, rng):
    z = random_generic_z(rng)
    v2 = twisted_index(k41, 1, 1, z=z, g=2)
    assert abs(complex(float(v2.real), float(v2.imag))) > 0
    with pytest.raises(DomainError):
        twisted_index(k41, 1, 1, z=z, g=-1)


def test_khovanskii_certify_requires_apoly(k52):
    with pytest.raises(DomainError):
        khovanskii_certify(k52, 1, 1, complex(2, 1))


def test_khovanskii_certify_cross_check(k41, rng):
    x = complex(1.4, 0.8)
    cert = khovanskii_certify(k41, 2, 1, x)
    assert cert["checks_pass"]
    assert cert["residue_metric"] <= 1e-7
    assert cert["torsion_cross_check_rel"] <= 1e-8


def test_vanishing_fail_path(k41):
    """An absurdly small tolerance must produce a FAIL verdict, not an error."""
    report = verify_vanishing(k41, 1, 1, z=complex(1.5, 0.5), tol=1e-30)
    assert report.verdict == "FAIL"


# ----------------------------------------------------------------------
# CLI

def test_cli_verify_json_and_exit_code(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = cli_main(["verify", "--knot", "4_1", "--slope", "3,1",
                     "--z", "1.5+0.5i", "--json", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert list(doc.keys()) == EXPECTED_TOP_KEYS
    text = capsys.readouterr().out
    assert "verdict: PASS" in text


def test_cli_requires_z_or_x(capsys):
    code = cli_main(["verify", "--knot", "4_1", "--slope", "1,1"])
    assert code == 2


def test_cli_rejects_noncoprime_slope():
    with pytest.raises(SystemExit):
        cli_main(["verify", "--knot", "4_1", "--slope", "2,4",
                  "--z", "1.5+0.5i"])


def test_cli_torsion_csv(capsys):
    code = cli_main(["torsion", "--knot", "4_1", "--slope", "1,1",
                     "--z", "1.5+0.5i"])
    assert code == 0
    lines = capsys.readouterr().out.strip().splitlines()
    header = lines[0].split(",")
    assert header[0] == "component" and "re_torsion" in header
    assert len(lines) == 1 + 8
    row = lines[1].split(",")
    assert len(row) == len(header)
    float(row[1])  # parses as a number


def test_cli_index(tmp_path, capsys):
    out = tmp_path / "index.json"
    code = cli_main(["index", "--knot", "4_1", "--slope", "1,1",
                     "--z", "1.5+0.5i", "--genus", "1", "--json", str(out)])
    assert code == 0
    assert "twisted index g=1: 8" in capsys.readouterr().out
    doc = json.loads(out.read_text())
    assert doc["genus"] == 1
    assert doc["value"]["re"] == 8.0


def test_cli_certify(tmp_path, capsys):
    out = tmp_path / "cert.json"
    code = cli_main(["certify-grt", "--knot", "4_1", "--slope", "1,1",
                     "--x", "1.3+0.7i", "--json", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["checks_pass"] is True
    assert "certification: PASS" in capsys.readouterr().out


def test_cli_plots(tmp_path, capsys):
    plots = tmp_path / "figs"
    code = cli_main(["verify", "--knot", "4_1", "--slope", "1,1",
                     "--z", "1.5+0.5i", "--plots", str(plots)])
    assert code == 0
    files = sorted(os.listdir(plots))
    assert any(f.startswith("fiber_") for f in files)
    assert any(f.startswith("cancellation_") for f in files)
    assert all(os.path.getsize(plots / f) > 1000 for f in files)
    code = cli_main(["certify-grt", "--knot", "4_1", "--slope", "1,1",
                     "--x", "1.3+0.7i", "--plots", str(plots)])
    assert code == 0
    assert any(f.startswith("polytopes_") for f in os.listdir(plots))


def test_cli_error_reporting(capsys):
    code = cli_main(["verify", "--knot", "4_1", "--slope", "1,1",
                     "--z", "2.0"])  # z = 2 is non-generic
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_cli_entrypoint_subprocess():
    proc = subprocess.run(
        [sys.executable, "-m", "adjtorsion.cli", "verify", "--knot", "4_1",
         "--slope", "1,0", "--z", "1.4+0.3i"],
        capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert "verdict: PASS" in proc.stdout
