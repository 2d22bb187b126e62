"""Quadrature against integrals with closed forms."""

import mpmath
import pytest
from mpmath import mp, mpc, mpf

from exact_stirling.errors import DivergentTail
from exact_stirling.precision import PrecisionPolicy, working_precision
from exact_stirling.quadrature import (PanelScheme, gauss_legendre_nodes, integrate,
                                       integrate_mp, integrate_principal_value,
                                       integrate_vertical_line, pole_windows, tanh_sinh)

POLICY = PrecisionPolicy(40, 15)


def digits(got, want):
    with working_precision(60):
        err = abs(got - want)
        return mpmath.inf if err == 0 else -mpmath.log10(err / max(1, abs(want)))


@pytest.mark.parametrize("f,want", [
    (lambda y: mpmath.exp(-y), lambda: mpf(1)),
    (lambda y: y ** 5 * mpmath.exp(-y), lambda: mpf(120)),
    (lambda y: 1 / (1 + y * y), lambda: mp.pi / 2),
    (lambda y: mpmath.exp(-y) / mpmath.sqrt(y), lambda: mpmath.sqrt(mp.pi)),
    (lambda y: y / mpmath.expm1(y), lambda: mp.pi ** 2 / 6),
])
def test_half_line_integrals(f, want):
    v = integrate(f, policy=POLICY)
    with working_precision(60):
        assert digits(v.to_mpc(), want()) > 38


def test_near_pole_integrand_does_not_fake_convergence():
    # 1/((y - 1)^2 + eps^2): sharply peaked, exact value pi/eps for the whole line
    with working_precision(55):
        eps = mpf("1e-6")
        f = lambda y: eps / ((y - 1) ** 2 + eps ** 2)
        val = integrate_mp(f, PanelScheme().refined([1]), abs_tol=mpf(10) ** -40, rel_tol=mpf(10) ** -40)
        want = mp.pi / 2 + mpmath.atan(1 / eps)
        assert digits(val, want) > 35


def test_panel_error_estimate_is_honest():
    with working_precision(40):
        val, err = tanh_sinh(lambda x: mpmath.sqrt(x), mpf(0), mpf(1), mpf(10) ** -35, mpf(10) ** -35)
        assert abs(val - mpf(2) / 3) <= max(err * 10, mpf(10) ** -35)


def test_principal_value_simple_pole():
    # PV ∫_0^∞ e^-y / (y - 1) dy = -e^-1 Ei(1)
    v = integrate_principal_value(lambda y: mpmath.exp(-y), 1, policy=POLICY)
    with working_precision(60):
        assert digits(v.to_mpc(), -mpmath.exp(-1) * mpmath.ei(1)) > 35


def test_pole_windows_stay_apart():
    w = pole_windows([mpf(1), mpf(2), mpf("2.5")])
    for (p, r), (q, s) in zip(w, w[1:]):
        assert p + r <= q - s
    with pytest.raises(ValueError):
        pole_windows([mpf(-1)])


def test_vertical_line_gamma():
    # (1/2 pi i) ∫ Gamma(s) x^-s ds along Re s = 1 gives e^-x
    x = mpf(2)
    v = integrate_vertical_line(lambda s: mpmath.gamma(s) * x ** (-s), 1, POLICY)
    with working_precision(60):
        assert digits(v.to_mpc() / (2j * mp.pi), mpmath.exp(-x)) > 30


def test_vertical_line_growth_detected():
    with pytest.raises(DivergentTail):
        integrate_vertical_line(lambda s: mpmath.exp(s.imag), 1, PrecisionPolicy(20, 5))


def test_gauss_legendre_weights():
    with working_precision(40):
        nodes = gauss_legendre_nodes(12)
        total = sum(2 * w if x != 0 else w for x, w in nodes)
        assert abs(total - 2) < mpf(10) ** -35
        # exact for x^22
        moment = sum(2 * w * x ** 22 for x, w in nodes if x != 0)
        assert abs(moment - mpf(2) / 23) < mpf(10) ** -35


def test_scheme_refinement():
    s = PanelScheme().refined([mpf("0.5"), 1, mpf("0.5")])
    assert list(s.finite) == sorted(set(s.finite))
