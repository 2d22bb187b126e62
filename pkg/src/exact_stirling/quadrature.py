"""Adaptive tanh-sinh panel quadrature on [0, ∞).

Each finite panel ``[a, b]`` is integrated with the double-exponential rule
``x = (a+b)/2 + (b-a)/2 * tanh(pi/2 * sinh t)``, halving the step until two
successive levels agree.  Nodes are stored as their distance to the nearest
endpoint, so points crowding an endpoint keep full relative accuracy (this is
what makes the mirrored principal-value pairs below cancel cleanly).  The last,
semi-infinite panel uses ``y = b + scale * u / (1 - u)`` on ``u in [0, 1]``.

Principal values around simple poles are taken as
``∫_0^r [F(p+u) + F(p-u)] du`` on a window of half-width ``r`` about each
pole, so the singular parts cancel node by node.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import mpmath
from mpmath import mp, mpc, mpf

from .errors import DivergentTail, NonConvergence
from .precision import HPComplex, PrecisionPolicy, to_mpf, working_precision

MIN_LEVEL = 3
MAX_LEVEL = 11

RealFunction = Callable[[mpf], object]


@dataclass(frozen=True)
class PanelScheme:
    """Ordered breakpoints starting at 0 and ending at infinity."""

    breakpoints: tuple = (0, Fraction(1, 2), 1, 2, 5, 10, 100, 1000, math.inf)

    def __post_init__(self) -> None:
        pts = tuple(self.breakpoints)
        if len(pts) < 2 or pts[0] != 0 or pts[-1] != math.inf:
            raise ValueError("breakpoints must start at 0 and end at infinity")
        if any(not (a < b) for a, b in zip(pts, pts[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        object.__setattr__(self, "breakpoints", pts)

    @property
    def finite(self) -> tuple:
        return self.breakpoints[:-1]

    def refined(self, extra: Sequence) -> "PanelScheme":
        """Scheme with additional finite breakpoints merged in."""
        merged = [to_mpf(p) for p in self.finite]
        merged += [to_mpf(p) for p in extra if 0 < p < math.inf]
        pts = []
        for p in sorted(merged):
            if not pts or p > pts[-1]:
                pts.append(p)
        return PanelScheme(tuple(pts) + (math.inf,))


DEFAULT_SCHEME = PanelScheme()


class _NodeTable:
    """Tanh-sinh abscissae and weights on [-1, 1], cached per binary precision.

    ``level_nodes(j)`` lists the nodes first appearing at step ``h = 2**-j`` as
    ``(d, w)`` with ``d = 1 - |x|`` the distance to the endpoint and ``w`` the
    weight ``(pi/2) cosh t / cosh^2((pi/2) sinh t)``.
    """

    def __init__(self, prec: int):
        self.prec = prec
        self.levels: list[list[tuple[mpf, mpf]]] = []
        with mp.workprec(prec):
            self.cutoff = mpf(2) ** (-2 * prec)

    def _node(self, t: mpf) -> tuple[mpf, mpf]:
        u = mp.pi / 2 * mpmath.sinh(t)
        e = mpmath.exp(-2 * u)
        d = 2 * e / (1 + e)
        cu = (1 + e) / (2 * mpmath.sqrt(e))
        w = mp.pi / 2 * mpmath.cosh(t) / (cu * cu)
        return d, w

    def level_nodes(self, level: int) -> list[tuple[mpf, mpf]]:
        while len(self.levels) <= level:
            j = len(self.levels)
            with mp.workprec(self.prec + 20):
                h = mpf(2) ** (-j)
                nodes = []
                k = 0 if j == 0 else 1
                step = 1 if j == 0 else 2
                while True:
                    d, w = self._node(k * h)
                    if w < self.cutoff:
                        break
                    nodes.append((d, w))
                    k += step
            self.levels.append([(+d, +w) for d, w in nodes])
        return self.levels[level]


_TABLES: dict[int, _NodeTable] = {}


def _table() -> _NodeTable:
    prec = mp.prec
    table = _TABLES.get(prec)
    if table is None:
        table = _TABLES[prec] = _NodeTable(prec)
    return table


def _error_estimate(history: list) -> mpf | None:
    """Error of the latest level from the last three level sums.

    Tanh-sinh roughly doubles the number of correct digits per halving.  The
    extrapolation from the last two differences can be wildly optimistic at
    low levels, so the estimate is never allowed below the square of the
    latest relative change.
    """
    if len(history) < 3:
        return None
    s2, s1, s0 = history[-3], history[-2], history[-1]
    e1 = abs(s0 - s1)
    e2 = abs(s0 - s2)
    if e1 == 0:
        return mpf(0)
    scale = abs(s0)
    if scale == 0:
        return e1
    r1, r2 = e1 / scale, e2 / scale
    if r2 == 0 or r1 >= r2 or r2 >= 1:
        return e1
    extrapolated = mpf(10) ** (mpmath.log10(r1) ** 2 / mpmath.log10(r2))
    return scale * min(r1, max(extrapolated, r1 * r1))


def tanh_sinh(f, a, b, abs_tol, rel_tol, *, tail_scale=1, min_level=MIN_LEVEL,
              max_level=MAX_LEVEL, endpoint_pair=None):
    """Integrate ``f`` over one panel at the current mpmath precision.

    ``b`` may be ``mpmath.inf``.  ``endpoint_pair(d)`` replaces
    ``f(a + d) + f(b - d)`` so the principal-value windows can pair points
    symmetric about a pole without cancellation; it is also called with
    ``midpoint=True`` for the centre node.
    Returns ``(value, error_estimate)``.
    """
    table = _table()
    infinite = b == mpmath.inf
    if infinite:
        half = mpf(1) / 2
    else:
        half = (b - a) / 2
    scale = mpf(tail_scale)

    def eval_pair(d):
        if infinite:
            # u = d/2 and u = 1 - d/2 mapped through y = a + scale * u / (1 - u)
            u_left = d / 2
            v_right = d / 2
            y_left = a + scale * u_left / (1 - u_left)
            jac_left = scale / ((1 - u_left) ** 2)
            y_right = a + scale * (1 - v_right) / v_right
            jac_right = scale / (v_right * v_right)
            return f(y_left) * jac_left + f(y_right) * jac_right
        if endpoint_pair is not None:
            return endpoint_pair(half * d)
        return f(a + half * d) + f(b - half * d)

    total = mpc(0)
    history = []
    for level in range(max_level + 1):
        h = mpf(2) ** (-level)
        for d, w in table.level_nodes(level):
            if d == 1:
                if infinite:
                    y = a + scale
                    val = f(y) * 4 * scale
                elif endpoint_pair is not None:
                    val = endpoint_pair(half, midpoint=True)
                else:
                    val = f(a + half)
                total += w * val
            else:
                total += w * eval_pair(d)
        estimate = total * h * half
        if not mpmath.isfinite(estimate.real) or not mpmath.isfinite(estimate.imag):
            raise NonConvergence(f"non-finite integrand on panel [{a}, {b}]")
        history.append(estimate)
        if level >= min_level:
            err = _error_estimate(history)
            if err is not None and err <= max(abs_tol, rel_tol * abs(estimate)):
                return estimate, err
    raise NonConvergence(
        f"tanh-sinh did not converge on [{mpmath.nstr(a, 8)}, {mpmath.nstr(b, 8)}] "
        f"after {max_level} levels (last change {mpmath.nstr(abs(history[-1] - history[-2]), 3)})")


def _rel_floor(policy: PrecisionPolicy) -> mpf:
    return mpf(10) ** (-(policy.working_digits - 3))


def _panels(scheme: PanelScheme) -> list[tuple[mpf, mpf]]:
    pts = [to_mpf(p) for p in scheme.finite] + [mpmath.inf]
    return list(zip(pts, pts[1:]))


def integrate_mp(f, scheme: PanelScheme = DEFAULT_SCHEME, *, abs_tol, rel_tol,
                 tail_scale=1, extra_breakpoints=()) -> mpc:
    """Panel-wise integral at the current precision (internal entry point)."""
    if extra_breakpoints:
        scheme = scheme.refined(extra_breakpoints)
    panels = _panels(scheme)
    each = abs_tol / len(panels)
    total = mpc(0)
    for a, b in panels:
        val, _ = tanh_sinh(f, a, b, each, rel_tol, tail_scale=tail_scale)
        total += val
    return total


def integrate(f: RealFunction, scheme: PanelScheme = DEFAULT_SCHEME,
              policy: PrecisionPolicy | None = None, *, extra_breakpoints=(),
              tail_scale=1) -> HPComplex:
    """∫_0^∞ f(y) dy to ``policy.quad_abs_tol`` (with a relative floor)."""
    policy = policy or PrecisionPolicy()
    with working_precision(policy.working_digits):
        val = integrate_mp(f, scheme, abs_tol=mpf(policy.quad_abs_tol),
                           rel_tol=_rel_floor(policy), tail_scale=tail_scale,
                           extra_breakpoints=extra_breakpoints)
        return HPComplex(val.real, val.imag, policy.working_digits)


def pole_windows(poles: Sequence[mpf], max_radius=None) -> list[tuple[mpf, mpf]]:
    """Half-widths of the symmetric excision windows about each pole.

    Each window stays inside (0, ∞) and reaches at most halfway to a
    neighbouring pole.
    """
    ps = sorted(poles)
    out = []
    for i, p in enumerate(ps):
        if p <= 0:
            raise ValueError("principal-value poles must be positive")
        r = p
        if i > 0:
            r = min(r, (p - ps[i - 1]) / 2)
        if i + 1 < len(ps):
            r = min(r, (ps[i + 1] - p) / 2)
        if max_radius is not None:
            r = min(r, max_radius)
        out.append((p, r))
    return out


def principal_value_mp(F, poles: Sequence[mpf], scheme: PanelScheme = DEFAULT_SCHEME, *,
                       mirrored, abs_tol, rel_tol, max_radius=None, tail_scale=1) -> mpc:
    """PV ∫_0^∞ F(y) dy where F has simple poles at the given positive points.

    ``mirrored(p, u)`` must return ``F(p+u) + F(p-u)`` with the pole parts
    formed from ``u`` itself (not from ``(p+u) - p``), otherwise nodes close to
    the pole lose every digit.

    Scheme breakpoints that fall inside a window are dropped (the window edges
    replace them), so a pole sitting on a breakpoint needs no special case.
    """
    windows = pole_windows([to_mpf(p) for p in poles], max_radius)
    finite = [to_mpf(p) for p in scheme.finite]
    kept = [x for x in finite if not any(p - r < x < p + r for p, r in windows)]
    edges = set(kept)
    for p, r in windows:
        edges.add(p - r)
        edges.add(p + r)
    pts = sorted(edges)
    window_starts = {p - r: (p, r) for p, r in windows}
    npieces = len(pts)
    each = abs_tol / max(1, npieces)
    total = mpc(0)
    for a, b in zip(pts, pts[1:]):
        if a in window_starts and window_starts[a][0] + window_starts[a][1] == b:
            p, r = window_starts[a]

            # u runs over [0, r]; du is the distance to the nearer end of that range
            def pair(du, midpoint=False, p=p, r=r):
                if midpoint:
                    return mirrored(p, du)
                return mirrored(p, du) + mirrored(p, r - du)

            val, _ = tanh_sinh(None, mpf(0), r, each, rel_tol, endpoint_pair=pair)
        else:
            val, _ = tanh_sinh(F, a, b, each, rel_tol)
        total += val
    val, _ = tanh_sinh(F, pts[-1], mpmath.inf, each, rel_tol, tail_scale=tail_scale)
    return total + val


def integrate_principal_value(f_regular: RealFunction, singularity,
                              scheme: PanelScheme = DEFAULT_SCHEME,
                              policy: PrecisionPolicy | None = None) -> HPComplex:
    """PV ∫_0^∞ f_regular(y) / (y - singularity) dy."""
    policy = policy or PrecisionPolicy()
    with working_precision(policy.working_digits):
        a = to_mpf(singularity)
        if a <= 0:
            raise ValueError("singularity must be positive")
        def mirrored(p, u):
            return (f_regular(p + u) - f_regular(p - u)) / u

        val = principal_value_mp(lambda y: f_regular(y) / (y - a), [a], scheme, mirrored=mirrored,
                                 abs_tol=mpf(policy.quad_abs_tol), rel_tol=_rel_floor(policy))
        return HPComplex(val.real, val.imag, policy.working_digits)


def _check_decay(g, c, probe):
    lo, hi = probe, 2 * probe
    for sgn in (1, -1):
        a = abs(g(mpc(c, sgn * lo)))
        b = abs(g(mpc(c, sgn * hi)))
        if b > a and b > mpf(10) ** (-mp.dps):
            raise DivergentTail(f"|g| grows along Re s = {mpmath.nstr(c, 6)} (t = ±{probe} to ±{2 * probe})")


def vertical_line_mp(g, c, *, abs_tol, rel_tol, scheme: PanelScheme = DEFAULT_SCHEME,
                     tail_scale=1, probe=50) -> mpc:
    """i ∫_0^∞ [g(c + it) + g(c - it)] dt, i.e. the contour integral up Re s = c."""
    c = to_mpf(c)
    if probe:
        _check_decay(g, c, probe)

    def h(t):
        return g(mpc(c, t)) + g(mpc(c, -t))

    return mpc(0, 1) * integrate_mp(h, scheme, abs_tol=abs_tol, rel_tol=rel_tol,
                                    tail_scale=tail_scale)


_GL_DEGREES = (12, 18, 27, 40, 60, 90, 135, 200, 300)
_GL_CACHE: dict[tuple[int, int], list[tuple[mpf, mpf]]] = {}


def gauss_legendre_nodes(n: int) -> list[tuple[mpf, mpf]]:
    """Positive Gauss-Legendre nodes and weights on [-1, 1] at the current precision.

    Roots of P_n by Newton's method from Chebyshev-like starting guesses.
    For odd n the zero node is included once.
    """
    key = (n, mp.prec)
    cached = _GL_CACHE.get(key)
    if cached is not None:
        return cached
    nodes = []
    with mp.workprec(mp.prec + 20):
        eps = mpf(2) ** (-mp.prec + 10)
        for i in range(1, n // 2 + n % 2 + 1):
            x = mpmath.cos(mp.pi * (i - mpf(1) / 4) / (n + mpf(1) / 2))
            for _ in range(100):
                p0, p1 = mpf(1), x
                for k in range(2, n + 1):
                    p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
                dp = n * (x * p1 - p0) / (x * x - 1)
                step = p1 / dp
                x -= step
                if abs(step) <= eps:
                    break
            p0, p1 = mpf(1), x
            for k in range(2, n + 1):
                p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
            dp = n * (x * p1 - p0) / (x * x - 1)
            if n % 2 and i == n // 2 + 1:
                x = mpf(0)  # the middle root, counted once by the summation
            nodes.append((x, 2 / ((1 - x * x) * dp * dp)))
    nodes = [(+x, +w) for x, w in nodes]
    _GL_CACHE[key] = nodes
    return nodes


def _gauss_legendre(f, a, b, n):
    half = (b - a) / 2
    mid = (a + b) / 2
    total = 0
    for x, w in gauss_legendre_nodes(n):
        if x == 0:
            total += w * f(mid)
        else:
            total += w * (f(mid + half * x) + f(mid - half * x))
    return total * half


def gauss_legendre_panel(f, a, b, abs_tol, rel_tol, start=0):
    """Integrate an analytic ``f`` over [a, b] with Gauss-Legendre rules of growing degree.

    Consecutive degrees grow by half; the higher-degree value is accepted once
    the two agree to tolerance.  Returns ``(value, error_estimate, index)``
    where ``index`` can seed the next panel.
    """
    start = max(0, min(start, len(_GL_DEGREES) - 2))
    prev = _gauss_legendre(f, a, b, _GL_DEGREES[start])
    for idx in range(start + 1, len(_GL_DEGREES)):
        cur = _gauss_legendre(f, a, b, _GL_DEGREES[idx])
        diff = abs(cur - prev)
        tol = max(abs_tol, rel_tol * abs(cur))
        # the error falls geometrically in the degree, so a 3/2 step in degree
        # takes the difference (~ error of the lower rule) to the power 3/2
        scale = max(abs(cur), tol)
        err = scale * (diff / scale) ** mpf(1.5) if diff else diff
        if err <= tol / 10 and diff <= scale / 100:
            return cur, err, idx - 1
        prev = cur
    raise NonConvergence(f"Gauss-Legendre did not converge on [{mpmath.nstr(a, 8)}, {mpmath.nstr(b, 8)}]")


def vertical_line_panels_mp(g, c, *, abs_tol, rel_tol, decay_rate, width=6, max_t=10000,
                            pair=None):
    """i ∫_0^T [g(c + it) + g(c - it)] dt on panels, plus a tail certificate.

    Suited to integrands that oscillate and decay like exp(-decay_rate * t)
    and are analytic near the contour apart from poles on the real s-axis.
    The first panel [0, 1], whose end t = 0 may sit close to such a pole,
    uses tanh-sinh; the rest have the given width and use Gauss-Legendre.  Panels are added until the
    envelope at the panel edge, divided by the decay rate, falls below
    ``abs_tol / 10``.  ``pair(t)``, if given, must return
    ``g(c + it) + g(c - it)`` and is used instead of two calls to ``g``.
    Returns ``(value, tail_bound)``.
    """
    c = to_mpf(c)
    if decay_rate <= 0:
        raise DivergentTail("the integrand does not decay along the contour")
    rate = mpf(decay_rate)

    def h(t):
        if pair is not None:
            return pair(t)
        return g(mpc(c, t)) + g(mpc(c, -t))

    width = mpf(width)
    total, _ = tanh_sinh(h, mpf(0), mpf(1), abs_tol / 4, rel_tol)
    full_dps = mp.dps
    a = mpf(1)
    seed = 0
    prev_edge = None
    edge = abs(h(a))
    while True:
        b = a + width
        # once the integrand has decayed, fewer digits carry the same absolute accuracy
        tol = max(abs_tol, rel_tol * abs(total))
        need = int(mpmath.log10(max(edge, tol) / tol)) + 15
        dps = min(full_dps, max(20, 10 * ((need + 9) // 10)))
        with mp.workdps(dps):
            val, _, seed = gauss_legendre_panel(h, a, b, tol / 4, rel_tol, seed)
            new_edge = abs(h(b))
        total += val
        prev_edge, edge = edge, new_edge
        tail = edge / rate
        if tail <= max(abs_tol, rel_tol * abs(total)) / 10 and edge <= prev_edge:
            return mpc(0, 1) * total, tail
        if b >= max_t:
            raise NonConvergence(f"contour integrand still at {mpmath.nstr(edge, 3)} at t = {max_t}")
        a = b


def integrate_vertical_line(g: Callable[[mpc], mpc], c, policy: PrecisionPolicy | None = None,
                            *, scheme: PanelScheme = DEFAULT_SCHEME, probe=50) -> HPComplex:
    """∫ g(s) ds over the upward line Re s = c, as two half-lines from t = 0."""
    policy = policy or PrecisionPolicy()
    with working_precision(policy.working_digits):
        val = vertical_line_mp(g, c, abs_tol=mpf(policy.quad_abs_tol), rel_tol=_rel_floor(policy),
                               scheme=scheme, probe=probe)
        return HPComplex(val.real, val.imag, policy.working_digits)
