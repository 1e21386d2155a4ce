"""Smoke tests for the python bindings."""

import json
import math

import numpy as np
import pytest

try:
    import torsionlab as tl
except ImportError:
    import _torsionlab as tl


def two_term(weight):
    grams = [np.eye(1), np.eye(1)]
    diffs = [np.array([[weight]])]
    return tl.GradedMetricComplex(0, grams, diffs)


def test_adjoint_scalar():
    got = tl.adjoint(np.array([[1.0]]), np.array([[4.0]]), np.array([[2.0]]))
    assert abs(got[0, 0] - 8.0) < 1e-12


def test_vol_restricted():
    v = tl.vol_restricted(np.eye(1), np.eye(1), np.array([[3.0]]))
    assert abs(v - 3.0) < 1e-12


def test_log_det_prime_discards_zero_modes():
    g = np.eye(3)
    endo = np.diag([2.0, 0.0, 8.0])
    assert abs(tl.log_det_prime(g, endo) - math.log(16.0)) < 1e-12


def test_torsion_of_two_term_complex():
    c = two_term(2.0)
    assert abs(tl.torsion_tc(c) - math.log(2.0)) < 1e-12
    assert abs(tl.torsion_log_sum(c) - math.log(2.0)) < 1e-12
    assert abs(tl.det_iso_c_hc(c) - math.log(2.0)) < 1e-10
    assert tl.betti_numbers(c) == [0, 0]
    assert tl.euler_characteristic(c) == 0


def test_invalid_complex_rejected():
    grams = [np.eye(1)] * 3
    diffs = [np.array([[1.0]]), np.array([[1.0]])]
    with pytest.raises(tl.ValidationError):
        tl.GradedMetricComplex(0, grams, diffs)


def test_generate_ingest_roundtrip():
    text = tl.generate("complex", seed=5, size=12)
    doc = json.loads(text)
    assert doc["schema_version"] == "1"
    c = tl.ingest_complex(text)
    a = tl.torsion_tc(c)
    b = tl.torsion_log_sum(c)
    assert abs(a - b) < 1e-8


def test_generate_deterministic():
    assert tl.generate("filtered", seed=9) == tl.generate("filtered", seed=9)
    assert tl.generate("filtered", seed=9) != tl.generate("filtered", seed=10)


def test_filtered_pipeline():
    text = tl.generate("filtered", seed=3, size=14)
    f = tl.ingest_filtered(text)
    res = tl.log_t_comb(f)
    assert len(res["rho"]) >= 1
    mau = tl.maumary_check(f)
    assert mau["pass"]
    assert abs(mau["residual"]) < 1e-6


def test_mini_suite():
    ok, report = tl.run_suite(seeds=2)
    assert ok, report
