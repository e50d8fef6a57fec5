import csv
import io
import json
import math
import subprocess
import sys

import pytest

from immse.cli import EXIT_INFEASIBLE, EXIT_OK, EXIT_USAGE, EXIT_VERIFY, main

TWO_LAYER = ["--snrs", "2,2.5", "--betas", "0.4"]
FOUR_LAYER = ["--snrs", "0.8,1.7,2.2,3", "--betas", "0.6,0.4,0.3"]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_design_two_layer(capsys):
    code, out, _ = run(capsys, "design", *TWO_LAYER)
    doc = json.loads(out)
    assert code == EXIT_OK
    assert doc["total_rate"] == pytest.approx(0.60198640216296789, rel=1e-15)
    assert doc["layer_powers"] == pytest.approx([0.6, 0.4])


def test_design_vacuous_beta(capsys):
    code, out, _ = run(capsys, "design", "--snrs", "2,2.5", "--betas", "1.0")
    assert code == EXIT_OK
    assert json.loads(out)["total_rate"] == pytest.approx(0.5 * math.log(3.5), rel=1e-15)


def test_design_four_layer_csv(capsys):
    code, out, _ = run(capsys, "design", *FOUR_LAYER, "--format", "csv")
    table = rows(out)
    assert code == EXIT_OK and len(table) == 4
    assert [float(r["decode_snr"]) for r in table] == [0.8, 1.7, 2.2, 3.0]
    assert math.fsum(float(r["rate"]) for r in table) == pytest.approx(0.573178177884921)


def test_design_from_alpha(capsys):
    code, out, _ = run(capsys, "design", "--snrs", "2,2.5", "--alpha", repr(14 / 15))
    assert code == EXIT_OK
    assert json.loads(out)["betas"][0] == pytest.approx(0.4, rel=1e-14)


@pytest.mark.parametrize("argv, expected", [
    (["design", "--snrs", "2.5,2", "--betas", "0.4"], EXIT_USAGE),
    (["design", "--snrs", "2,2.5", "--betas", "0.4,0.3"], EXIT_USAGE),
    (["design", "--snrs", "2,2.5", "--betas", "1.4"], EXIT_USAGE),
    (["design", "--snrs", "1,2,3", "--betas", "0.7,0.4", "--strict-sum"], EXIT_INFEASIBLE),
    (["bound", "--snr1", "2.5179", "--alpha", "0.397", "--grid", "0:2"], EXIT_INFEASIBLE),
    (["bound", "--alpha", "0.397"], EXIT_USAGE),
])
def test_exit_codes(capsys, argv, expected):
    code, _, err = run(capsys, *argv)
    assert code == expected and err


def test_parse_error_is_usage():
    with pytest.raises(SystemExit) as exc:
        main(["design", "--snrs", "a,b"])
    assert exc.value.code == EXIT_USAGE


def test_curve_two_layer(capsys):
    code, out, _ = run(capsys, "curve", *TWO_LAYER, "--grid", "0:3:0.01")
    table = [{k: float(v) for k, v in r.items()} for r in rows(out)]
    assert code == EXIT_OK
    at2 = [r["mmse"] for r in table if r["gamma"] == 2.0]
    assert at2 == pytest.approx([1 / 3, 0.4 / 1.8])
    assert any(r["gamma"] == 2.5 for r in table)
    assert table[-1]["mmse"] == 0.0
    assert table[-1]["mi"] == pytest.approx(0.60198640216296789, rel=1e-15)


def test_curve_single_point(capsys):
    code, out, _ = run(capsys, "curve", *TWO_LAYER, "--grid", "0:0")
    assert code == EXIT_OK
    assert rows(out) == [{"gamma": "0", "mmse": "1", "mi": "0"}]


def test_curve_four_layer_steps(capsys):
    _, out, _ = run(capsys, "curve", *FOUR_LAYER, "--grid", "0:4:0.05")
    table = [(float(r["gamma"]), float(r["mmse"])) for r in rows(out)]
    drops = sorted({g for (g, m), (g2, m2) in zip(table, table[1:]) if g == g2 and m2 < m})
    assert drops == [0.8, 1.7, 2.2, 3.0]


def test_design_json_round_trip(capsys, tmp_path):
    path = tmp_path / "d.json"
    run(capsys, "design", *FOUR_LAYER, "--out", str(path))
    _, from_file, _ = run(capsys, "curve", "--design", str(path), "--grid", "0:4:0.1")
    _, direct, _ = run(capsys, "curve", *FOUR_LAYER, "--grid", "0:4:0.1")
    assert from_file == direct


def test_bits_are_scaled_nats(capsys):
    _, nats, _ = run(capsys, "curve", *TWO_LAYER, "--grid", "0:3:0.25")
    _, bits, _ = run(capsys, "curve", *TWO_LAYER, "--grid", "0:3:0.25", "--units", "bits")
    for a, b in zip(rows(nats), rows(bits)):
        assert float(b["mi"]) == float(a["mi"]) / math.log(2.0)
        assert a["mmse"] == b["mmse"]


def test_db_flag(capsys):
    _, lin, _ = run(capsys, "design", "--snrs", "1,10", "--betas", "0.5")
    _, db, _ = run(capsys, "design", "--snrs", "0,10", "--betas", "0.5", "--db")
    assert json.loads(lin)["total_rate"] == json.loads(db)["total_rate"]


def test_output_files_byte_identical(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["verify", "--codebook", "random", "--size", "8", "--length", "2",
            "--check", "identity", "--snr", "1.5", "--samples", "5000", "--seed", "9"]
    run(capsys, *args, "--out", str(a))
    run(capsys, *args, "--out", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_display_digits_only_on_stdout(capsys, tmp_path):
    _, shown, _ = run(capsys, "design", *TWO_LAYER, "--display-digits", "5")
    assert json.loads(shown)["total_rate"] == 0.60199
    path = tmp_path / "full.json"
    run(capsys, "design", *TWO_LAYER, "--display-digits", "5", "--out", str(path))
    assert json.loads(path.read_text())["total_rate"] == pytest.approx(0.60198640216296789,
                                                                       rel=1e-15)


def test_bound_table(capsys):
    code, out, _ = run(capsys, "bound", "--snr1", "2.5179", "--rate", "0.5", "--units", "bits",
                       "--pe", "1e-5", "--points", "9")
    table = rows(out)
    assert code == EXIT_OK and len(table) == 9
    for r in table:
        assert 0 < float(r["bound"]) <= float(r["uncoded"])
        assert r["vacuous"] == "0"


def test_bound_zero_pe_is_asymptotic(capsys):
    from immse.superposition import mmse_lower_bound_asymptotic
    _, out, _ = run(capsys, "bound", "--snr1", "2.5179", "--alpha", repr(1 / 2.5179),
                    "--grid", "0.1:0.9:0.2")
    for r in rows(out):
        s0 = float(r["snr0"])
        assert float(r["bound"]) == mmse_lower_bound_asymptotic(s0, 2.5179, 1 / 2.5179)


def test_bound_vacuous(capsys):
    _, out, _ = run(capsys, "bound", "--snr1", "2.5179", "--alpha", repr(1 / 2.5179),
                    "--pe", "0.5", "--points", "5")
    assert all(r["bound"] == "0" and r["vacuous"] == "1" for r in rows(out))


def test_disturbance(capsys):
    _, out, _ = run(capsys, "disturbance", "--snrs", "1,3", "--alphas", "0.7")
    doc = json.loads(out)
    assert doc["effective_alpha"] == 0.7
    assert doc["rate"] == pytest.approx(0.5 * math.log1p(2.1))
    _, out, _ = run(capsys, "disturbance", "--snrs", "1,2,4", "--alphas", "0.7,0.3")
    assert json.loads(out)["effective_alpha"] == 0.3
    _, out, _ = run(capsys, "disturbance", "--snrs", "2,2.5", "--alphas", "1")
    doc = json.loads(out)
    assert (doc["rate"], doc["disturbance"]) == pytest.approx(
        (0.5 * math.log(3.5), 0.5 * math.log(3.0)))


def test_disturbance_compare(capsys):
    _, out, _ = run(capsys, "disturbance", "--snrs", "2,2.5", "--alphas", "1",
                    "--compare-beta", "1")
    cmp = json.loads(out)["comparison"]
    assert cmp["larger"] == "equal" and cmp["strategies_coincide"]


def test_verify_bpsk_crossing(capsys):
    code, out, _ = run(capsys, "verify", "--codebook", "bpsk", "--check", "crossing")
    doc = json.loads(out)
    assert code == EXIT_OK and doc["status"] == "pass"
    assert doc["checks"][0]["method"] == "quadrature"


def test_verify_single_codeword_identity(capsys):
    code, out, _ = run(capsys, "verify", "--codebook", "single", "--length", "2",
                       "--check", "identity", "--samples", "1000")
    check = json.loads(out)["checks"][0]
    assert code == EXIT_OK and check["residual"] == 0.0


def test_verify_failure_exit(capsys, monkeypatch):
    # no genuine codebook violates the crossing property, so fake a report
    from immse import oracle

    def failing(*args, **kwargs):
        return oracle.CrossingReport((0.0, 1.0), (0.1, -0.5), (0.01, 0.01), False, 0, ((0, 1),))

    monkeypatch.setattr(oracle, "verify_single_crossing", failing)
    code, out, _ = run(capsys, "verify", "--check", "crossing")
    assert code == EXIT_VERIFY
    assert json.loads(out)["status"] == "fail"


def test_verify_infeasible(capsys):
    code, out, _ = run(capsys, "verify", "--codebook", "random", "--size", "16", "--length",
                       "4", "--check", "identity", "--samples", "100000000")
    assert code == EXIT_INFEASIBLE
    assert json.loads(out)["checks"][0]["verdict"] == "infeasible"


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# two-layer design\nsnrs = 2,2.5\nbetas = 0.4\nunits = bits\n")
    _, out, _ = run(capsys, "design", "--config", str(cfg))
    assert json.loads(out)["total_rate"] == pytest.approx(0.60198640216296789 / math.log(2))
    # flags win over the file
    _, out, _ = run(capsys, "design", "--config", str(cfg), "--units", "nats")
    assert json.loads(out)["total_rate"] == pytest.approx(0.60198640216296789)
    cfg.write_text("bogus = 1\n")
    code, _, err = run(capsys, "design", "--config", str(cfg))
    assert code == EXIT_USAGE and "bogus" in err


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "immse", "design", *TWO_LAYER],
                         capture_output=True, text=True, check=True)
    assert json.loads(res.stdout)["total_rate"] == pytest.approx(0.60198640216296789)
