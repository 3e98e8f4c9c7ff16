"""Tests for the grid-scan verification engine.

Full default-grid sweeps live in the acceptance suite; these tests exercise
the machinery on small grids.
"""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from besselbounds import nullclines as nc
from besselbounds import verify as vf
from besselbounds.errors import DomainError, UnfittableError
from besselbounds.verify import (
    Grid,
    OracleTable,
    bound_claims,
    conjecture_scan,
    corrupt_claim,
    default_grid,
    fit_error_order,
    get_claim,
    monotone_claims,
    scan_bound,
    scan_monotone,
    sharpness_battery,
    write_report_csv,
)


# ---------------------------------------------------------------------------
# grids


def test_grid_validation():
    with pytest.raises(DomainError):
        Grid(nu_values=(1.0,), x_values=(0.0, 1.0))
    with pytest.raises(DomainError):
        Grid(nu_values=(1.0,), x_values=(2.0, 1.0))
    with pytest.raises(DomainError):
        Grid(nu_values=(), x_values=(1.0,))


def test_default_grid_shape():
    g = default_grid()
    nus = list(g.nu_values)
    assert nus[0] == -1.0 and nus[-1] == 19.75
    assert len(nus) == 64
    # non-negative integers excluded (log terms in the K series), -1 kept
    assert 0.0 not in nus and 5.0 not in nus and -1.0 in nus
    xs = np.asarray(g.x_values)
    assert len(xs) == 121
    assert_allclose(xs[0], 1e-3, rtol=1e-12)
    assert_allclose(xs[-1], 1e3, rtol=1e-12)
    assert np.all(np.diff(np.log(xs)) > 0.0)


# ---------------------------------------------------------------------------
# claim catalog


def test_catalog_covers_every_bound_producer():
    missing = set(nc.bound_producers()) - set(bound_claims())
    assert missing == set()


def test_get_claim_and_corrupt():
    claim = get_claim("trig-upper-I")
    assert claim.target == "Phi0"
    bad = corrupt_claim(claim, factor=1.001)
    assert bad.claim_id == "trig-upper-I[corrupted]"
    with pytest.raises(DomainError):
        get_claim("no-such-claim")


# ---------------------------------------------------------------------------
# bound scans


def test_scan_bound_zero_violations_small_grid(small_table):
    for claim_id in bound_claims():
        rep = scan_bound(claim_id, table=small_table)
        assert rep.violations == [], claim_id
        assert rep.ok(), claim_id


def test_scan_bound_half_order_row_matches_closed_form():
    g = Grid(nu_values=(0.5,), x_values=(0.25, 1.0, 4.0))
    rep = scan_bound("trig-upper-I", grid=g)
    assert rep.points_checked == 3
    for nu, x, bound, orc, margin in rep.rows:
        assert_allclose(orc, 1.0 / math.tanh(x), rtol=1e-12)
        assert_allclose(margin, (bound - orc) / orc, rtol=1e-12)
        assert margin >= 0.0


def test_scan_bound_respects_validity_ranges(small_table):
    # product-upper is stated for nu >= 1/2: the nu = -1 and -1/2 rows are
    # skipped (2 rows x 5 points), the rest checked
    rep = scan_bound("product-upper", table=small_table)
    assert rep.skipped == 10
    assert rep.points_checked == 15


def test_scan_bound_flags_corruption(small_table):
    # 5% corruption lands inside the sharp-regime gap of each claim; this
    # covers negative-valued bounds (K side) as well as positive ones
    for claim_id in ("trig-upper-I", "amos-K-a0", "product-upper", "psi-I-lower"):
        rep = scan_bound(corrupt_claim(claim_id, factor=1.05), table=small_table)
        assert len(rep.violations) > 0, claim_id
        assert rep.worst_margin < 0.0
        assert not rep.ok()


def test_scan_bound_deterministic(small_table):
    a = scan_bound("product-lower-trig", table=small_table)
    b = scan_bound("product-lower-trig", table=small_table)
    assert a.rows == b.rows
    assert a.worst_margin == b.worst_margin


def test_unverified_negative_orders_counted():
    # K-targeted claims at nu < 0 (non half-integer) lack an oracle path:
    # counted as unverified, not treated as violations
    g = Grid(nu_values=(-0.75,), x_values=(0.5, 1.0))
    rep = scan_bound("amos-K-a1", grid=g)
    assert len(rep.unverified) == 2
    assert all(len(entry) == 3 for entry in rep.unverified)
    assert rep.violations == []


# ---------------------------------------------------------------------------
# monotonicity scans


def test_scan_monotone_registry_runs(small_table):
    assert len(monotone_claims()) == 21
    for qid in ("P", "xP", "Phi0", "xPhi0", "W_I", "W_K"):
        rep = scan_monotone(qid, table=small_table)
        assert rep.violations == [], qid


def test_scan_monotone_closed_form_rows():
    g = Grid(nu_values=(2.0,), x_values=tuple(np.geomspace(0.01, 100.0, 41)))
    for qid, expected in (("w_K", "decreasing"), ("w_I", "increasing"),
                          ("lambda_K", "decreasing"), ("gamma-hat-plus[a=1]", "decreasing")):
        rep = scan_monotone(qid, grid=g)
        assert rep.violations == [], qid
        assert rep.claim_id == f"monotone-{qid}-{expected}"


def test_scan_monotone_detects_wrong_direction():
    g = Grid(nu_values=(2.0,), x_values=tuple(np.geomspace(0.01, 100.0, 21)))
    rep = scan_monotone("w_K", grid=g, expected="increasing")
    assert len(rep.violations) > 0


def test_scan_monotone_unknown_quantity():
    with pytest.raises(DomainError):
        scan_monotone("no-such-quantity")


# ---------------------------------------------------------------------------
# order fitting


def test_fit_error_order_exact_power_law():
    fit = fit_error_order([(s, 0.25 / (s * s)) for s in (25.0, 50.0, 100.0, 200.0)], "large-x")
    assert_allclose(fit, (-2.0, 0.25), rtol=1e-10)
    fit = fit_error_order([(s, s ** 4 / 192.0) for s in (0.02, 0.04, 0.08, 0.16)], "small-x")
    assert_allclose(fit, (4.0, 1.0 / 192.0), rtol=1e-10)


def test_fit_error_order_unfittable():
    with pytest.raises(UnfittableError):
        fit_error_order([(10.0, 1e-3), (20.0, 2e-4)], "large-nu")
    with pytest.raises(UnfittableError):
        fit_error_order([(10.0, 1e-3), (12.0, 9e-4), (13.0, 8e-4)], "large-nu")
    with pytest.raises(UnfittableError):
        fit_error_order([(10.0, 1e-3), (20.0, 2e-4), (40.0, 5e-5)], "large-nu",
                        noise_floor=1e-2)
    with pytest.raises(UnfittableError):
        fit_error_order([(10.0, 0.0), (20.0, 2e-4), (40.0, 5e-5)], "large-nu")


def test_fit_error_order_measured_ratio_gap():
    # gap of the cubic-root bound on the I-ratio at nu=1, sampled over x
    from besselbounds import oracle
    from besselbounds.expansions import relative_error
    from besselbounds.nullclines import EvalPoint, trig_bound_I

    samples = []
    for x in (25.0, 50.0, 100.0, 200.0):
        p = EvalPoint(1.0, x)
        samples.append((x, relative_error(trig_bound_I(p).value,
                                          oracle.i_ratio(p).value, "upper")))
    k, c = fit_error_order(samples, "large-x")
    assert abs(k - (-2.0)) <= 0.1
    assert abs(c - 0.25) <= 0.025


# ---------------------------------------------------------------------------
# sharpness battery (gate checks live in the acceptance suite)


def test_sharpness_battery_structure():
    reports = sharpness_battery()
    assert len(reports) == 7
    ids = {r.claim_id for r in reports}
    assert len(ids) == 7
    for r in reports:
        assert r.fitted is not None
        assert {"expected_exponent", "expected_coefficient",
                "exponent_ok", "coefficient_ok"} <= set(r.stats)


# ---------------------------------------------------------------------------
# conjecture scan


def test_conjecture_scan_small_grid():
    g = Grid(nu_values=(-1.0, -0.5, 0.5, 1.5),
             x_values=tuple(np.geomspace(0.05, 50.0, 25)))
    rep = conjecture_scan(grid=g)
    assert rep.violations == []
    assert rep.stats["sup_s"] < 1.0 / 3.0
    assert rep.stats["proved_cap"] == pytest.approx(1.0 / 3.0)
    assert rep.stats["conjectured_cap"] == 0.2
    # negative non-half-integer rows are flagged, not silently dropped
    assert len(rep.unverified) > 0


def test_conjecture_scan_half_order_row_closed_form():
    xs = tuple(np.geomspace(0.1, 10.0, 13))
    g = Grid(nu_values=(0.5,), x_values=xs)
    rep = conjecture_scan(grid=g)
    for (nu, x, cap, s, margin), xg in zip(rep.rows, xs):
        ref = (x / (1.0 - math.exp(-2.0 * x))) ** 2 - x * x - 0.25
        assert_allclose(s, ref, rtol=1e-8, atol=1e-12)
        assert s < 1.0 / 3.0


# ---------------------------------------------------------------------------
# CSV emission


def test_write_report_csv(tmp_path):
    g = Grid(nu_values=(0.5,), x_values=(1.0, 2.0))
    rep = scan_bound("trig-upper-K", grid=g)
    out = tmp_path / "report.csv"
    write_report_csv(rep, out)
    text = out.read_text()
    lines = text.split("\n")
    assert lines[0] == "claim_id,nu,x,bound,oracle,margin"
    assert len(lines) == 4 and lines[-1] == ""
    first = lines[1].split(",")
    assert first[0] == "trig-upper-K"
    assert first[1] == "0.5" and first[2] == "1"
    assert_allclose(float(first[3]), 1.1617021380432389, rtol=1e-16)
    assert "\r" not in text
