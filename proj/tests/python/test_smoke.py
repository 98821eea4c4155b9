import cmath
import math

import numpy as np
import pytest
import sympy as sp

import rdmgen


def a1_spec(phi_im=0.05):
    s = rdmgen.SystemSpec()
    s.phi = complex(0.0, phi_im)
    s.beta = 1.0
    s.set_sinusoidal_drive(0.05, 0.95)
    s.set_discrete_bath([(1.1, 0.1)])
    return s.validate()


def test_propagate_shapes():
    cs = rdmgen.propagate(a1_spec(), [0.0, 1.0, 2.0])
    assert len(cs) == 3
    assert cs.alpha1[0] == 1.0
    assert cs.m_coef.shape == (3, 1)
    assert max(cs.commutator_defect(i) for i in range(3)) < 1e-9


def test_rho_matrix_is_a_state():
    cs = rdmgen.propagate(a1_spec(), [0.0, 5.0])
    r = rdmgen.rho_matrix(cs, 1, 0.5, min_n_cut=8)
    rho = np.asarray(r.rho)
    assert rho.shape == (r.n_cut + 1, r.n_cut + 1)
    assert np.abs(rho - rho.conj().T).max() < 1e-10
    assert 0.0 <= r.trace_deficit < 1e-6
    assert np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min() > -1e-8
    assert r.method in ("contraction", "resummed")


def test_laguerre_diagonal_against_exact_generating_function():
    # Displaced thermal state: sum_n P_n x^n = exp(-|Z|^2 (1-x) / (1 + eta (1-x))) / (1 + eta (1-x)).
    cs = rdmgen.propagate(a1_spec(0.0), [0.0, 4.0])
    gamma = 0.5
    z2 = abs(cs.big_z(1, gamma)) ** 2
    eta = cs.eta(1, 1.0)
    r = rdmgen.rho_matrix(cs, 1, gamma, min_n_cut=4)

    x, zz, ee = sp.symbols("x zz ee", nonnegative=True)
    u = 1 + ee * (1 - x)
    gen = sp.exp(-zz * (1 - x) / u) / u
    for n in range(4):
        exact = sp.diff(gen, x, n).subs(x, 0) / sp.factorial(n)
        value = float(exact.subs({zz: z2, ee: eta}))
        assert r.rho[n, n].real == pytest.approx(value, abs=1e-10)
        assert rdmgen.pn_laguerre(cs.big_z(1, gamma), eta, n).p == pytest.approx(value, abs=1e-12)


def test_closed_forms():
    assert rdmgen.pn_laguerre(0.0, 1.0, 0).p == pytest.approx(0.5)
    assert rdmgen.pn_poisson(1.0, 1).p == pytest.approx(math.exp(-1.0))
    assert rdmgen.pn_laguerre(0.5, 1e-10, 2).branch == "poisson_limit"
    z2, eta_inf = rdmgen.large_time_limits(0.02, 0.99, 1.0, 0.1)
    assert z2 == pytest.approx(0.0385, rel=1e-3)
    assert eta_inf == 0.0
    z1, z2_, z = rdmgen.zeta_sinusoidal(1.0, 0.9, 1.0, 0.1, 0.0)
    assert abs(z1) + abs(z2_) + abs(z) < 1e-15
    p = rdmgen.pn_hermite(cmath.exp(-1j * math.pi), 0.0, 0.1, 1.2, 2)
    assert p.branch == "resonant_poisson"
    assert rdmgen.laguerre(2, 1.0) == pytest.approx(-0.5)
    assert rdmgen.hermite(2, 1.0) == pytest.approx(2.0)


def test_errors_are_raised():
    s = rdmgen.SystemSpec()
    s.phi = complex(0.0, 0.7)
    with pytest.raises(rdmgen.RdmError, match="UnstableTwoPhoton|InvalidSpec"):
        s.validate()
    with pytest.raises(rdmgen.RdmError):
        rdmgen.zeta_sinusoidal(1.0, 1.0, 1.0, 0.1, 2.0)
    with pytest.raises(rdmgen.RdmError, match="ConfigError"):
        rdmgen.parse_config("[sytem]\nbeta = 1\n")


def test_config_and_oracle():
    cfg = rdmgen.parse_config(
        "[system]\nphi_im = 0.05\n[drive]\ntype = zero\n[initial]\ngamma_re = 0.3\n[run]\nt_grid = 0, 1\n",
        ["run.n_cut=5"],
    )
    assert cfg.t_grid == [0.0, 1.0]
    assert cfg.n_cut == 5
    spec = cfg.spec.validate()
    cs = rdmgen.propagate(spec, cfg.t_grid)
    oracle = rdmgen.oracle_reduced(spec, cfg.gamma, cfg.t_grid, 16, [])
    analytic = rdmgen.rho_matrix(cs, 1, cfg.gamma, n_cut=5)
    diff = np.abs(np.asarray(analytic.rho) - np.asarray(oracle[1].rho)[:6, :6]).max()
    assert diff < 1e-9
