import numpy as np
import pytest

from tribvp import Grid, GridFunction, integrate, norm_c1, norm_l1, norm_sup


def test_grid_basics():
    g = Grid(2.0, 8)
    assert g.h == 0.25
    assert len(g.nodes) == 9
    assert g.nodes[0] == 0.0 and g.nodes[-1] == 2.0


def test_grid_rejects_bad_arguments():
    with pytest.raises(ValueError):
        Grid(0.0, 10)
    with pytest.raises(ValueError):
        Grid(-1.0, 10)
    with pytest.raises(ValueError):
        Grid(float("inf"), 10)
    with pytest.raises(ValueError):
        Grid(1.0, 1)
    with pytest.raises(ValueError):
        Grid(1.0, 2.5)


def test_nodes_are_read_only():
    g = Grid(1.0, 4)
    with pytest.raises(ValueError):
        g.nodes[0] = 3.0


def test_gridfunction_shape_and_finiteness():
    g = Grid(1.0, 4)
    ok = np.zeros(5)
    with pytest.raises(ValueError):
        GridFunction(g, np.zeros(4), ok)
    with pytest.raises(ValueError):
        GridFunction(g, ok, np.zeros(6))
    bad = ok.copy()
    bad[2] = np.nan
    with pytest.raises(ValueError):
        GridFunction(g, bad, ok)


def test_gridfunction_locks_copies():
    g = Grid(1.0, 3)
    vals = np.ones(4)
    u = GridFunction(g, vals, vals)
    vals[0] = 99.0  # caller's array, not ours
    assert u.values[0] == 1.0
    with pytest.raises(ValueError):
        u.values[0] = 5.0


def test_from_callables():
    g = Grid(1.0, 10)
    u = GridFunction.from_callables(g, lambda t: t**2, lambda t: 2 * t)
    assert np.allclose(u.values, g.nodes**2)
    assert np.allclose(u.derivs, 2 * g.nodes)


def test_integrate_exact_on_cubics_even_n():
    # composite Simpson is exact through degree 3
    g = Grid(2.0, 16)
    vals = g.nodes**3 - 2 * g.nodes
    assert integrate(g, vals) == pytest.approx(2.0**4 / 4 - 4.0, abs=1e-13)


def test_integrate_odd_n_falls_back_to_trapezoid():
    g = Grid(1.0, 9)
    vals = np.ones(10)
    assert integrate(g, vals) == pytest.approx(1.0, abs=1e-15)
    # linear is still exact for trapezoid
    assert integrate(g, g.nodes) == pytest.approx(0.5, abs=1e-15)


def test_integrate_convergence_rate():
    """Simpson error should drop ~16x per mesh halving on smooth data."""
    exact = 1.0 - np.cos(1.0)
    errs = []
    for n in (8, 16, 32):
        g = Grid(1.0, n)
        errs.append(abs(integrate(g, np.sin(g.nodes)) - exact))
    assert errs[0] / errs[1] > 12.0
    assert errs[1] / errs[2] > 12.0


def test_norms():
    g = Grid(1.0, 4)
    u = GridFunction(g, np.array([0.0, -3.0, 1.0, 0.5, 2.0]),
                     np.array([1.0, 1.0, -4.0, 0.0, 0.0]))
    assert norm_sup(u.values) == 3.0
    assert norm_c1(u) == 7.0
    rng = np.random.default_rng(11)
    vals = rng.normal(size=33)
    g2 = Grid(3.0, 32)
    w = GridFunction(g2, vals, vals)
    assert norm_l1(w) == pytest.approx(integrate(g2, np.abs(vals)))
