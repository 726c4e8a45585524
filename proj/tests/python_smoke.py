#!/usr/bin/env python3
"""Smoke test for the _supermix extension module."""
import os
import sys

sys.path.insert(0, os.environ["SUPERMIX_PYDIR"])

import numpy as np

import _supermix as sm

failures = 0


def check(name, ok):
    global failures
    print(("ok  " if ok else "FAIL") + " " + name)
    if not ok:
        failures += 1


truth = sm.DiscreteMeasure([0.6, 0.4], [np.array([-1.5]), np.array([2.0])])
check("total variation", abs(sm.total_variation(truth) - 1.0) < 1e-15)
check("min separation", abs(sm.min_separation(truth) - 3.5) < 1e-15)

mixing = sm.MixingKernel("gaussian", 1)
fid = sm.Fidelity(0.25, 1)
corr = sm.Correlations(mixing, fid)

sample = sm.sample_mixture(truth, mixing, 200, 5)
check("sample size", len(sample) == 200 and sample.dim == 1)

data = sm.DataFit.exact_moments(corr, truth)
cfg = sm.SfwConfig()
cfg.kappa = 1e-6
cfg.dual_tol = 1e-6
result = sm.solve_sfw(data, cfg)
check("sfw converged", result.converged)
check("sfw atom count", len(result.estimate) == 2)
locs = sorted(t[0] for t in result.estimate.locations)
check("sfw locations", abs(locs[0] + 1.5) < 1e-4 and abs(locs[1] - 2.0) < 1e-4)

err = sm.support_error(result.estimate, truth)
check("support error", err.hausdorff < 1e-4 and err.matched_weight_l1 < 1e-3)

cert = sm.build_certificate([np.array([-1.5]), np.array([2.0])], 2.0)
check("certificate interpolation", abs(cert(np.array([-1.5])) - 1.0) < 1e-10)
report = sm.audit_certificate(cert, np.array([-10.0]), np.array([10.0]), 1001)
check("certificate audit", report.grid_max <= 1.0 + 1e-9)
check("bregman at truth", abs(sm.bregman_divergence(truth, truth, cert)) < 1e-12)

ccfg = sm.CpgdConfig()
ccfg.kappa = 0.01
ccfg.num_particles = 8
ccfg.num_steps = 50
ccfg.init_seed = 3
empirical = sm.DataFit.empirical(corr, sample)
cpgd = sm.solve_cpgd(empirical, ccfg)
check("cpgd estimate mass", sm.total_variation(cpgd.estimate) > 0.0)

rq = sm.rate_quantities(2, 1, 1.0, 400, mixing)
check("rho_n", abs(rq.rho_n - 2.0 / 20.0) < 1e-15)

print("python_smoke:", "all passed" if failures == 0 else f"{failures} failures")
sys.exit(1 if failures else 0)
