"""Smoke tests of the python module: one pass over every exposed operation,
checking closed-form values where they exist."""

import math

import numpy as np
import pytest

import magma


@pytest.fixture(scope="module")
def interval():
    return magma.make_grid("interval:-1,1", 129)


@pytest.fixture(scope="module")
def disk():
    return magma.make_grid("ball:1", 65)


def test_grid_and_field_basics(interval, disk):
    assert interval.dim == 1 and disk.dim == 2
    assert interval.n == 129
    pts = disk.points()
    assert pts.shape == (disk.size, 2)
    assert np.max(np.hypot(pts[:, 0], pts[:, 1])) < 1.0

    u = magma.test_field(interval, "quadratic:1")
    assert u.size == interval.size
    assert u.min() == pytest.approx(-0.5, abs=1e-12)
    assert u.value_at(0.0) == pytest.approx(-0.5, abs=1e-12)

    v = magma.field_from_values(interval, np.asarray(u.values))
    assert np.array_equal(np.asarray(v.values), np.asarray(u.values))
    with pytest.raises(ValueError):
        magma.field_from_values(interval, np.zeros(3))


def test_functionals_closed_forms(interval, disk):
    # u = (x^2 - 1) / 2 on the interval: H_1 = 1/3, energy at unit power
    # source J = -1/3, invariant = polar length 2.
    u = magma.test_field(interval, "quadratic:1")
    assert magma.eval_H(u, 0.0) == pytest.approx(1.0 / 3.0, abs=2e-4)
    assert magma.eval_J(u, 0.0, family="power", lam=1.0, p=1.0) == (
        pytest.approx(-1.0 / 3.0, abs=2e-4)
    )
    assert magma.scale_invariant(u) == pytest.approx(2.0, rel=1e-3)
    assert magma.eval_Hnorm(u, 0.0) > 0.0
    assert magma.rayleigh(u, 0.0) > 0.0

    # Same field on the disk: H_2 = pi/12, invariant = polar area pi.
    w = magma.test_field(disk, "quadratic:1")
    assert magma.eval_H(w, 0.0) == pytest.approx(math.pi / 12.0, rel=1e-3)
    assert magma.scale_invariant(w) == pytest.approx(math.pi, rel=1e-2)

    rep = magma.sobolev_check(u, 0.0)
    assert rep["ok"] and rep["H"] >= rep["bound"] - 1e-8


def test_fixed_rhs_exact_quadratic(interval):
    rep = magma.solve_fixed_rhs(interval, lambda x, y: 2.0)
    exact = magma.test_field(interval, "quadratic:2")
    err = np.max(np.abs(np.asarray(rep["field"].values)
                        - np.asarray(exact.values)))
    assert err < 1e-10
    assert rep["residual"] < 1e-9


def test_semilinear_matches_oracle(interval):
    rep = magma.solve_semilinear(interval, 0.0, "shifted_power",
                                 lam=1.0, p=0.5, eps=0.1)
    ref = magma.oracle_shoot(0.0, 0.5, lam=1.0, eps=0.1)
    u = rep["field"]
    x = np.asarray(ref["x"])
    uo = np.asarray(ref["u"])
    worst = max(
        abs(u.value_at(float(xi)) - float(ui))
        for xi, ui in zip(x[::4], uo[::4])
    )
    assert worst < 1e-4


def test_stationary_and_eigen(interval):
    sub = magma.solve_subcritical(interval, 0.0, 0.5, lam=1.0)
    assert sub["J"] < 0.0 and sub["residual"] < 1e-4
    assert not sub["warnings"]

    eig = magma.solve_eigen(interval, 0.0)
    assert eig["lam"] == pytest.approx(math.pi**2 / 4.0, abs=1e-3)
    phi = eig["eigenfunction"]
    assert phi.min() == pytest.approx(-1.0, abs=1e-10)
    assert eig["residual"] < 1e-4


def test_flow_descends(interval):
    u0 = magma.test_field(interval, "quadratic:0.8")
    out = magma.flow_run(u0, 0.0, "shifted_power", lam=1.0, p=1.0, eps=0.1,
                         tol=1e-6)
    assert out["termination"] == "converged"
    J = [j for _, j in out["J_history"]]
    assert all(b <= a + 1e-8 * (1 + abs(a)) for a, b in zip(J, J[1:]))


def test_duality_and_pushforward(interval):
    u = magma.test_field(interval, "quadratic:1")
    tr = magma.radial_transform(u)
    assert tr["n_dropped"] > 0
    assert tr["legendre_defect"] < 1e-10
    assert np.all(np.asarray(tr["phi"]) > 0)

    dual = magma.verify_duality(u)
    assert dual["max_identity_residual"] < 1e-12
    assert dual["n_samples"] > 0

    # The cosine profile is the critical-exponent eigenfunction, so its
    # gradient pushforward matches the eigen target measure.
    lam = math.pi**2 / 4.0
    w = magma.test_field(magma.make_grid("interval:-1,1", 513), "cosine:1")
    push = magma.verify_pushforward(w, k=0.0, p=1.0, lam=lam, bins=32)
    assert push["max_bin_discrepancy"] < 1e-3
    assert push["bins_flagged"] == 0

    wrong = magma.verify_pushforward(w, k=0.0, p=1.0, lam=1.0, bins=32)
    assert wrong["max_bin_discrepancy"] > 0.3


def test_field_io_roundtrip(tmp_path, disk):
    u = magma.test_field(disk, "random:3")
    path = str(tmp_path / "u.csv")
    magma.save_field(u, path)
    v = magma.load_field(path)
    assert np.array_equal(np.asarray(u.values), np.asarray(v.values))


def test_error_types(interval):
    with pytest.raises(ValueError):
        magma.make_grid("interval:-1,1", 3)  # too coarse to stencil
    with pytest.raises(ValueError):
        magma.solve_subcritical(interval, 0.0, 1.0)  # p at the exponent
    with pytest.raises(RuntimeError):
        # At the critical exponent an off-eigenvalue intensity admits no
        # solution, so the Newton iteration must report failure.
        magma.solve_semilinear(interval, 0.0, "power", lam=1.0, p=1.0)
