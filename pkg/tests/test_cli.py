"""End-to-end command tests, run in process through main()."""

import json

import numpy as np
import pytest

from frozen_spectral import PI
from frozen_spectral.cli import main
from frozen_spectral.instability import CALIBRATION_MARGIN


def write_config(tmp_path, potentials, frozen=(1.0, 2.0), alpha=0, beta=0,
                 numeric=None, output=None, name="cfg.json"):
    obj = {"problem": {"frozen": list(frozen), "alpha": alpha, "beta": beta},
           "potentials": potentials}
    if numeric is not None:
        obj["numeric"] = numeric
    if output is not None:
        obj["output"] = output
    path = tmp_path / name
    path.write_text(json.dumps(obj), encoding="utf-8")
    return str(path)


def samples_entry(fn, M=32):
    xs = np.linspace(0.0, PI, M + 1)
    return {"kind": "samples", "M": M,
            "values": [float(v) for v in fn(xs)]}


ZERO = samples_entry(np.zeros_like, 16)
COS = samples_entry(np.cos)
ONE64 = samples_entry(np.ones_like, 64)
PERT64 = samples_entry(lambda x: 1.0 + 0.03 * np.cos(x), 64)


def read_csv(path):
    header, names, rows = {}, None, []
    with open(path, "r", encoding="utf-8") as fh:
        for ln in fh:
            ln = ln.rstrip("\n")
            if ln.startswith("# "):
                key, _, val = ln[2:].partition("=")
                header[key] = val
            elif names is None:
                names = ln.split(",")
            elif ln:
                rows.append([float(c) for c in ln.split(",")])
    cols = {n: np.array([r[i] for r in rows]) for i, n in enumerate(names)}
    return header, cols


# ---------------------------------------------------------------------------
# charfn / ghat


def test_charfn_eval_writes_deterministic_csv(tmp_path):
    cfg = write_config(tmp_path, [COS])
    out1, out2 = str(tmp_path / "a.csv"), str(tmp_path / "b.csv")
    base = ["--validate", "charfn", "eval", "--config", cfg,
            "--rho-grid", "0:5:33"]
    assert main(base + ["--out", out1]) == 0
    assert main(base + ["--out", out2]) == 0
    b1, b2 = open(out1, "rb").read(), open(out2, "rb").read()
    assert b1 == b2
    header, cols = read_csv(out1)
    assert header["subcommand"] == "charfn-eval"
    assert header["method"] == "closed"
    assert len(cols["re_rho"]) == 33
    assert np.all(np.isfinite(cols["re_value"]))
    assert not (tmp_path / "a.csv.tmp").exists()


def test_charfn_det_method_agrees(tmp_path):
    cfg = write_config(tmp_path, [COS])
    outs = {}
    for method in ("closed", "det"):
        out = str(tmp_path / f"{method}.csv")
        rc = main(["charfn", "eval", "--config", cfg, "--rho-grid", "0.3:4:8",
                   "--imag", "0.25", "--method", method, "--out", out])
        assert rc == 0
        outs[method] = read_csv(out)[1]
    for col in ("re_value", "im_value"):
        assert np.max(np.abs(outs["closed"][col] - outs["det"][col])) < 1e-8


def test_ghat_is_real_on_real_axis(tmp_path):
    cfg = write_config(tmp_path, [COS, ZERO], frozen=(1.0,))
    out = str(tmp_path / "g.csv")
    assert main(["ghat", "--config", cfg, "--rho-grid", "0.3:6:12",
                 "--out", out]) == 0
    _, cols = read_csv(out)
    scale = np.max(np.abs(cols["re_value"]))
    assert scale > 0
    assert np.max(np.abs(cols["im_value"])) < 1e-12 * scale


def test_negative_grid_start_spelling(tmp_path):
    cfg = write_config(tmp_path, [COS, ZERO], frozen=(1.0,))
    out = str(tmp_path / "g.csv")
    assert main(["ghat", "--config", cfg, "--rho-grid=-3:3:7",
                 "--out", out]) == 0
    _, cols = read_csv(out)
    assert cols["re_rho"][0] == -3.0


# ---------------------------------------------------------------------------
# spectrum / oracle-compare


def test_spectrum_free_potential_both_methods(tmp_path):
    cfg = write_config(tmp_path, [ZERO], frozen=(1.5,))
    out = str(tmp_path / "spec.json")
    rc = main(["--validate", "spectrum", "--config", cfg, "--count", "5",
               "--method", "both", "--out", out])
    assert rc == 0
    obj = json.load(open(out))
    assert obj["method"] == "both"
    assert np.allclose(obj["lambdas"], [1.0, 4.0, 9.0, 16.0, 25.0],
                       atol=1e-8)
    assert np.allclose(obj["shooting"]["lambdas"], obj["lambdas"], atol=1e-6)
    assert obj["match"]["paired"] == 5
    assert obj["match"]["max_gap"] < 1e-6


def test_oracle_compare(tmp_path):
    cfg = write_config(tmp_path, [COS], frozen=(1.0,))
    out = str(tmp_path / "cmp.json")
    rc = main(["oracle-compare", "--config", cfg, "--count", "3",
               "--out", out])
    assert rc == 0
    obj = json.load(open(out))
    assert obj["match"]["paired"] == 3
    assert obj["match"]["max_gap"] < 1e-6
    assert obj["scan"]["method"] == "scan" and obj["shoot"]["method"] == "shoot"


# ---------------------------------------------------------------------------
# entire


def test_entire_indicator_finds_growth_rate(tmp_path):
    cfg = write_config(tmp_path, [COS, ZERO], frozen=(1.0,))
    out = str(tmp_path / "ind.csv")
    rc = main(["entire", "indicator", "--config", cfg, "--r-max", "30",
               "--out", out])
    assert rc == 0
    _, cols = read_csv(out)
    assert len(cols["theta"]) == 16
    # growth rate of the difference collapses to pi: the frequencies the
    # frozen term adds past pi cancel between its two assembly pieces
    assert 0.9 * PI < np.max(cols["h"]) < 1.05 * PI


def test_entire_density_counts_grow(tmp_path):
    cfg = write_config(tmp_path, [COS, ZERO], frozen=(1.0,))
    out = str(tmp_path / "den.csv")
    rc = main(["entire", "density", "--config", cfg, "--radius", "4.3",
               "--out", out])
    assert rc == 0
    _, cols = read_csv(out)
    counts = cols["count"]
    assert np.all(np.diff(counts) >= 0)
    assert counts[-1] >= 2 and counts[-1] % 2 == 0


def test_entire_support_width(tmp_path):
    cfg = write_config(tmp_path, [samples_entry(np.ones_like, 16)],
                       frozen=(1.0,))
    out = str(tmp_path / "sup.csv")
    # zeros of a characteristic function come in +/- pairs, so the count
    # slope is 2 per unit radius and the fitted width is 2 pi; contours
    # past r ~ 30 drown in e^(a*r) rounding noise and must be avoided
    rc = main(["entire", "support", "--config", cfg, "--r-max", "30",
               "--out", out])
    assert rc == 0
    header, cols = read_csv(out)
    assert len(cols["r"]) == 3
    assert abs(float(header["fitted_width"]) - 2.0 * PI) < 0.2 * PI


def test_entire_cartwright_writes_product(tmp_path):
    cfg = write_config(tmp_path, [COS, ZERO], frozen=(1.0,))
    out = str(tmp_path / "cart.csv")
    rc = main(["--validate", "entire", "cartwright", "--config", cfg,
               "--radius", "5.9", "--grid=-2:2:11", "--out", out])
    assert rc == 0
    header, cols = read_csv(out)
    assert float(header["origin_value"]) != 0.0
    assert np.all(np.isfinite(cols["re_prod"]))


# ---------------------------------------------------------------------------
# bounds


def test_bound_instability_json_shape(tmp_path):
    cfg = write_config(tmp_path, [COS, ZERO])
    out = str(tmp_path / "b.json")
    rc = main(["--validate", "bound", "instability", "--config", cfg,
               "--out", out])
    assert rc == 0
    obj = json.load(open(out))
    assert set(obj) == {"lhs", "rhs", "C", "h", "x", "holds"}
    assert obj["holds"] is True
    assert abs(obj["lhs"] - 5.0 * (2.0 + PI)) < 1e-9


def test_bound_zero_set(tmp_path):
    cfg = write_config(tmp_path, [ONE64, PERT64], frozen=(1.0,))
    out = str(tmp_path / "z.json")
    rc = main(["bound", "zero-set", "--config", cfg, "--window", "13.3",
               "--strip", "4.0", "--out", out])
    assert rc == 0
    obj = json.load(open(out))
    assert obj["holds"] is True
    assert obj["paired"] == 12
    assert abs(obj["rhs"] - (obj["lhs"] - CALIBRATION_MARGIN)) < 1e-9
    assert obj["zero_distance"] > 0


# ---------------------------------------------------------------------------
# interp


def test_interp_reconstruction_accuracy(tmp_path):
    out = str(tmp_path / "interp.csv")
    rc = main(["--validate", "interp", "--band", "0.9", "--halfwidth", "60",
               "--grid=-5:5:101", "--out", out])
    assert rc == 0
    _, cols = read_csv(out)
    assert len(cols["x"]) == 101
    assert float(np.max(cols["abs_err"])) < 1e-4
    assert np.max(np.abs(cols["re_recon"] - cols["re_ref"])) < 1e-4


# ---------------------------------------------------------------------------
# output resolution, threading, failure modes


def test_output_path_from_config(tmp_path):
    dest = tmp_path / "from_config.csv"
    cfg = write_config(tmp_path, [COS],
                       output={"path": str(dest), "format": "csv"})
    rc = main(["charfn", "eval", "--config", cfg, "--rho-grid", "0:2:5"])
    assert rc == 0 and dest.exists()


def test_missing_output_path_is_config_error(tmp_path, capsys):
    cfg = write_config(tmp_path, [COS])
    rc = main(["charfn", "eval", "--config", cfg, "--rho-grid", "0:2:5"])
    assert rc == 1
    assert "output path" in capsys.readouterr().err


def test_thread_pool_matches_serial(tmp_path, monkeypatch):
    cfg = write_config(tmp_path, [COS], frozen=(1.0,))
    serial, pooled = str(tmp_path / "s.csv"), str(tmp_path / "p.csv")
    repeat = str(tmp_path / "p2.csv")
    args = ["charfn", "eval", "--config", cfg, "--rho-grid", "0:9:96"]
    assert main(args + ["--out", serial]) == 0
    monkeypatch.setenv("FROZEN_SPECTRAL_THREADS", "2")
    assert main(args + ["--out", pooled]) == 0
    assert main(args + ["--out", repeat]) == 0
    # chunking changes BLAS summation order, so serial and pooled runs may
    # disagree in the last bit; same thread count must stay byte-identical
    assert open(pooled, "rb").read() == open(repeat, "rb").read()
    _, cs = read_csv(serial)
    _, cp = read_csv(pooled)
    for key in cs:
        np.testing.assert_allclose(cp[key], cs[key], rtol=1e-12, atol=1e-300)


def test_invalid_thread_env(tmp_path, monkeypatch, capsys):
    cfg = write_config(tmp_path, [COS])
    monkeypatch.setenv("FROZEN_SPECTRAL_THREADS", "many")
    rc = main(["charfn", "eval", "--config", cfg, "--rho-grid", "0:2:5",
               "--out", str(tmp_path / "t.csv")])
    assert rc == 1
    assert "FROZEN_SPECTRAL_THREADS" in capsys.readouterr().err


def test_overflow_is_numerical_failure(tmp_path, capsys):
    cfg = write_config(tmp_path, [COS])
    rc = main(["charfn", "eval", "--config", cfg, "--rho-grid", "0:1:5",
               "--imag", "1000", "--out", str(tmp_path / "o.csv")])
    assert rc == 2
    assert "numerical error" in capsys.readouterr().err
    assert not (tmp_path / "o.csv").exists()


@pytest.mark.parametrize("mutate, needle", [
    (lambda obj: obj["problem"].pop("beta"), "problem.beta"),
    (lambda obj: obj["problem"].update(frozen=[4.0]), "problem.frozen"),
    (lambda obj: obj["problem"].update(alpha=2), "problem.alpha"),
    (lambda obj: obj["potentials"][0].update(M=8), "M"),
    (lambda obj: obj.update(numeric={"scan_step": -1.0}), "numeric.scan_step"),
    (lambda obj: obj.update(numeric={"panels": 3}), "numeric.panels"),
])
def test_config_field_errors(tmp_path, capsys, mutate, needle):
    obj = {"problem": {"frozen": [1.0], "alpha": 0, "beta": 0},
           "potentials": [dict(COS)]}
    mutate(obj)
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(obj), encoding="utf-8")
    rc = main(["charfn", "eval", "--config", str(path), "--rho-grid", "0:2:5",
               "--out", str(tmp_path / "x.csv")])
    assert rc == 1
    assert needle in capsys.readouterr().err


def test_unreadable_config(tmp_path, capsys):
    missing = str(tmp_path / "nope.json")
    rc = main(["charfn", "eval", "--config", missing, "--rho-grid", "0:2:5",
               "--out", str(tmp_path / "x.csv")])
    assert rc == 1
    assert "nope.json" in capsys.readouterr().err


def test_malformed_json_config(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    rc = main(["charfn", "eval", "--config", str(path), "--rho-grid", "0:2:5",
               "--out", str(tmp_path / "x.csv")])
    assert rc == 1
    assert "not valid JSON" in capsys.readouterr().err


def test_ghat_requires_two_potentials(tmp_path, capsys):
    cfg = write_config(tmp_path, [COS])
    rc = main(["ghat", "--config", cfg, "--rho-grid", "0:2:5",
               "--out", str(tmp_path / "x.csv")])
    assert rc == 1
    assert "exactly 2" in capsys.readouterr().err


@pytest.mark.parametrize("spec", ["1:2", "0:2:0", "a:b:c"])
def test_bad_grid_specs(tmp_path, capsys, spec, monkeypatch):
    cfg = write_config(tmp_path, [COS])
    rc = main(["charfn", "eval", "--config", cfg, f"--rho-grid={spec}",
               "--out", str(tmp_path / "x.csv")])
    assert rc == 1
    assert "grid" in capsys.readouterr().err


def test_no_temp_files_left(tmp_path):
    cfg = write_config(tmp_path, [COS, ZERO], frozen=(1.0,))
    main(["ghat", "--config", cfg, "--rho-grid", "0:2:5",
          "--out", str(tmp_path / "ok.csv")])
    main(["ghat", "--config", cfg, "--rho-grid", "0:2:5", "--imag", "1000",
          "--out", str(tmp_path / "fail.csv")])
    assert not list(tmp_path.glob("*.tmp"))
    assert (tmp_path / "ok.csv").exists()
    assert not (tmp_path / "fail.csv").exists()
