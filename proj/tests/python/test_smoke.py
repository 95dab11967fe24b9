"""Smoke tests for the Python bindings: exercises each exposed operation once."""

import math
import os
import sys
import tempfile

import numpy as np

import _sfnls as m


def test_grid():
    g = m.Grid(dim=1, extent=40.0, points=256, alpha=0.5)
    assert g.dim == 1
    assert g.points == 256
    assert abs(g.cell - 40.0 / 256) < 1e-15
    x = np.array(g.coords())
    assert x.shape == (256,)
    assert abs(x[0] + 20.0) < 1e-12
    return g, x


def test_norms_and_laplacian(g, x):
    u = np.exp(-(x ** 2)).astype(np.complex128)
    mass = m.mass(g, u)
    # closed form: integral of e^{-2x^2} = sqrt(pi/2)
    assert abs(mass - math.sqrt(math.pi / 2.0)) < 1e-6, mass

    l2, hdot, halpha = m.h_alpha_norms(g, u)
    assert abs(l2 - mass) < 1e-12
    assert hdot > 0.0
    assert halpha > l2

    c = m.frac_laplacian_constant(1, 0.5)
    assert c > 0.0
    lu = m.frac_laplacian(g, u, 0.5)
    assert lu.shape == u.shape
    # annihilates constants
    const = np.ones(256, dtype=np.complex128)
    lc = m.frac_laplacian(g, const, 0.5)
    assert np.max(np.abs(lc)) < 1e-12


def test_noise():
    p = m.sample_path(7, 0.0, 0.01, 100)
    q = m.sample_path(7, 0.0, 0.01, 100)
    assert p.w_increments == q.w_increments
    assert len(p.z_samples) == 101
    s = m.shift_path(p, 50)
    assert s.z_samples[0] == p.z_samples[50]
    e = m.extend_path_backward(p, 10)
    assert abs(e.t0 - (-0.1)) < 1e-12
    c = m.coarsen_path(p)
    assert c.steps == 50
    assert abs(c.dt - 0.02) < 1e-15


def test_evolve(g, x):
    params = m.ModelParams()
    params.alpha = 0.5
    params.sigma = 1.0
    params.gamma = 0.5
    params.dim = 1
    u0 = np.exp(-(x ** 2) / 4.0).astype(np.complex128)
    path = m.sample_path(42, 0.0, 1e-3, 1000)
    out, diverged = m.evolve(g, u0, 0.0, 1.0, params, "zero", 0.0,
                             np.zeros(256, dtype=np.complex128), path, 1e-3)
    assert not diverged
    ratio = m.mass(g, out) / m.mass(g, u0)
    assert abs(ratio - math.exp(-2.0 * 0.5 * 1.0)) < 1e-9, ratio


def test_ground_state(g):
    params = m.ModelParams()
    params.alpha = 0.5
    params.sigma = 1.0
    params.dim = 1
    profile, residual, c_opt, iters, converged = m.solve_ground_state(g, params)
    assert converged
    assert residual < 1e-8
    assert c_opt > 0.0
    # the optimizer saturates the inequality; the finite box biases the
    # ratio above one by O(1/L^2) (the profile has |x|^{-2} tails)
    r = m.gn_ratio(g, profile, params, c_opt)
    assert 0.999 <= r <= 1.0 + 5e-3, r


def test_experiments():
    catalog = m.list_experiments()
    assert "pullback" in catalog and "mass_check" in catalog
    with tempfile.TemporaryDirectory() as d:
        cfg = os.path.join(d, "cfg.ini")
        with open(cfg, "w") as f:
            f.write("[experiment]\nname = simulate\n"
                    "[grid]\npoints = 128\n"
                    "[time]\ndt = 0.01\nt_end = 0.2\nstride = 5\n"
                    f"[output]\ndirectory = {d}/out\n")
        code = m.run_config(cfg)
        assert code == 0
        assert os.path.exists(os.path.join(d, "out", "summary.json"))


def main():
    g, x = test_grid()
    test_norms_and_laplacian(g, x)
    test_noise()
    test_evolve(g, x)
    test_ground_state(g)
    test_experiments()
    print("python smoke tests passed")


if __name__ == "__main__":
    sys.exit(main())
