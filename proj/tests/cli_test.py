#!/usr/bin/env python3
"""End-to-end checks for the supermix command-line driver."""
import json
import os
import subprocess
import sys
import tempfile

BIN = os.environ["SUPERMIX_BIN"]

CONFIG = {
    "truth": {
        "dim": 1,
        "atoms": [
            {"w": 0.36, "t": [-13.1]},
            {"w": 0.52, "t": [-0.9]},
            {"w": 0.12, "t": [14.0]},
        ],
    },
    "mixing": {"family": "gaussian", "dim": 1},
    "tau": 0.25,
    "kappa": 0.05,
    "n": 50,
    "seed": 3,
}

failures = 0


def check(name, ok):
    global failures
    print(("ok  " if ok else "FAIL") + " " + name)
    if not ok:
        failures += 1


def run(*args):
    return subprocess.run([BIN, *args], capture_output=True, text=True)


def write_config(directory, payload, name="config.json"):
    path = os.path.join(directory, name)
    with open(path, "w") as f:
        json.dump(payload, f)
    return path


with tempfile.TemporaryDirectory() as tmp:
    cfg = write_config(tmp, CONFIG)

    # simulate writes one CSV per seed plus a manifest
    out = os.path.join(tmp, "sim")
    r = run("simulate", "--config", cfg, "--out", out)
    check("simulate exits 0", r.returncode == 0)
    check("simulate sample file", os.path.exists(os.path.join(out, "sample_3.csv")))
    manifest = json.load(open(os.path.join(out, "manifest_simulate.json")))
    check("simulate manifest hash", len(manifest["config_hash"]) == 16)

    # rerunning with the same config is idempotent
    r = run("simulate", "--config", cfg, "--out", out)
    check("simulate rerun exits 0", r.returncode == 0)

    # a different config into the same directory is refused without --force
    other = write_config(tmp, {**CONFIG, "n": 51}, "other.json")
    r = run("simulate", "--config", other, "--out", out)
    check("hash mismatch exits 2", r.returncode == 2)
    r = run("simulate", "--config", other, "--out", out, "--force")
    check("--force overrides the mismatch", r.returncode == 0)

    # sfw solve produces result JSON, trace CSV, and the measure CSV
    out = os.path.join(tmp, "sfw")
    r = run("sfw", "--config", cfg, "--out", out)
    check("sfw exits 0", r.returncode == 0)
    result = json.load(open(os.path.join(out, "sfw_3.json")))
    check("sfw converged", result["converged"] is True)
    check("sfw trace file", os.path.exists(os.path.join(out, "sfw_3_trace.csv")))
    check("sfw measure file", os.path.exists(os.path.join(out, "sfw_3_measure.csv")))

    # --seed overrides the config seed
    r = run("sfw", "--config", cfg, "--out", out, "--seed", "7", "--force")
    check("sfw seed override", r.returncode == 0 and os.path.exists(os.path.join(out, "sfw_7.json")))

    # certify audits a hand-picked support
    out = os.path.join(tmp, "cert")
    cert_cfg = write_config(
        tmp,
        {"support": [[-13.1], [-0.9], [14.0]], "m": 2.0,
         "grid": {"lo": [-25.0], "hi": [25.0], "points_per_dim": 501}},
        "cert.json",
    )
    r = run("certify", "--config", cert_cfg, "--out", out)
    check("certify exits 0", r.returncode == 0)
    audit = json.load(open(os.path.join(out, "audit.json")))
    check("certified grid max", audit["grid_max"] <= 1.0 + 1e-9)
    check("certificate grid CSV", os.path.exists(os.path.join(out, "certificate_grid.csv")))

    # figure1 with zero steps just echoes the initial particles
    out = os.path.join(tmp, "fig")
    r = run("figure1", "--out", out, "--steps", "0", "--particles", "4")
    check("figure1 exits 0", r.returncode == 0)
    fig = json.load(open(os.path.join(out, "cpgd_1.json")))
    check("figure1 particle count", len(fig["estimate"]["atoms"]) == 4)
    check("figure1 trajectory", os.path.exists(os.path.join(out, "cpgd_1_trajectory.csv")))

    # usage errors exit 2
    check("missing config exits 2", run("sfw").returncode == 2)
    check("unknown subcommand exits 2", run("frobnicate").returncode == 2)
    check("unreadable config exits 2",
          run("sfw", "--config", os.path.join(tmp, "nope.json")).returncode == 2)
    bad = write_config(tmp, {**CONFIG, "m": 1.0}, "bad.json")  # both tau and m
    check("tau and m together exit 2", run("sfw", "--config", bad).returncode == 2)
    check("help exits 0", run("--help").returncode == 0)

print("cli_test:", "all passed" if failures == 0 else f"{failures} failures")
sys.exit(1 if failures else 0)
