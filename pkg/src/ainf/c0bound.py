"""Functions of the C^0 estimate for strips with moving boundary and their checks.

``phi`` is the mollifier supported in (-1/2, 1/2), scaled to unit mass by a
computed constant.  ``psi(s) = int_{s - 1/2}^{1/2} phi`` falls from 1 at s = 0
to 0 at s = 1 with all derivatives vanishing at both ends; it is 1 for s < 0
and 0 for s > 1.

``g(s) = exp(-s^2 / (1 - s^2))`` on (-1, 1) is the smoothing factor used both
in the auxiliary function ``h_mu`` and in the bump ``f``: ``f = g(s)`` on
(-1, 0), 1 on [0, 1] and ``g(s - 1)`` on (1, 2), so f is smooth and vanishes
outside (-1, 2).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Callable, Sequence

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import CubicHermiteSpline, CubicSpline

from .report import VerificationReport, check, diagnostic


# ---------------------------------------------------------------- mollifier

def _bump(t):
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    inside = np.abs(t) < 0.5
    out[inside] = np.exp(-1.0 / (1.0 - (2.0 * t[inside]) ** 2))
    return out


def _bump_scalar(t: float) -> float:
    return math.exp(-1.0 / (1.0 - 4.0 * t * t)) if abs(t) < 0.5 else 0.0


@dataclass(frozen=True)
class MollifierSpec:
    normalizer: float
    support_radius: float = 0.5
    nodes: int = 10001

    def phi(self, t):
        return self.normalizer * _bump(t)


@lru_cache(maxsize=1)
def mollifier() -> MollifierSpec:
    mass, _ = quad(_bump_scalar, -0.5, 0.5, epsabs=1e-15, epsrel=1e-13, limit=200)
    return MollifierSpec(1.0 / mass)


def printed_constant_mass() -> float:
    """Mass of the mollifier with the constant 2e in front, for the report."""
    mass, _ = quad(_bump_scalar, -0.5, 0.5, epsabs=1e-15, epsrel=1e-13, limit=200)
    return 2 * math.e * mass


class Psi:
    """psi tabulated on [0, 1] with exact derivatives and Hermite interpolation."""

    def __init__(self, spec: MollifierSpec | None = None):
        self.spec = spec or mollifier()
        n = self.spec.nodes
        x = np.linspace(0.0, 1.0, n)
        c = self.spec.normalizer
        # cumulative integral of phi(s - 1/2) from the right end
        pieces = np.array([quad(_bump_scalar, a - 0.5, b - 0.5, epsabs=1e-16, epsrel=1e-12)[0]
                           for a, b in zip(x[:-1], x[1:])])
        tail = np.concatenate([np.cumsum(pieces[::-1])[::-1], [0.0]])
        values = c * tail
        slopes = -self.spec.phi(x - 0.5)
        self.x = x
        self.values = values
        self.spline = CubicHermiteSpline(x, values, slopes)

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        out = np.where(s <= 0.0, 1.0, 0.0)
        inside = (s > 0.0) & (s < 1.0)
        if np.any(inside):
            out = out.astype(float)
            out[inside] = self.spline(s[inside])
        return out if out.ndim else float(out)

    def derivative(self, s):
        s = np.asarray(s, dtype=float)
        out = -self.spec.phi(s - 0.5)
        out = np.where((s > 0.0) & (s < 1.0), out, 0.0)
        return out if out.ndim else float(out)


@lru_cache(maxsize=1)
def default_psi() -> Psi:
    return Psi()


def psi(s):
    return default_psi()(s)


# ---------------------------------------------------------------- moving boundary

class SampledPath:
    """Cubic spline through samples of a path [0, 1] -> R^m."""

    def __init__(self, samples: Sequence[Sequence[float]] | np.ndarray, times: Sequence[float] | None = None):
        pts = np.asarray(samples, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        ts = np.linspace(0.0, 1.0, len(pts)) if times is None else np.asarray(times, dtype=float)
        self.spline = CubicSpline(ts, pts, axis=0)

    def __call__(self, u):
        return self.spline(u)


def sigma_eps(path: SampledPath, eps: float, s, psi_fn: Callable = psi):
    """The reparametrised path s -> path(eps * psi(s))."""
    if not 0.0 <= eps <= 1.0:
        raise ValueError("eps must lie in [0, 1]")
    return path(eps * np.asarray(psi_fn(s)))


def fd_derivative(fn: Callable, x: float, order: int, h: float) -> np.ndarray:
    """Central finite difference of the given order."""
    coeffs = {1: [(-1, -0.5), (1, 0.5)],
              2: [(-1, 1.0), (0, -2.0), (1, 1.0)],
              3: [(-2, -0.5), (-1, 1.0), (1, -1.0), (2, 0.5)],
              4: [(-2, 1.0), (-1, -4.0), (0, 6.0), (1, -4.0), (2, 1.0)]}[order]
    return sum(w * np.asarray(fn(x + k * h)) for k, w in coeffs) / h ** order


# ---------------------------------------------------------------- bump functions

def g(s):
    """exp(-s^2/(1-s^2)) on (-1, 1), zero outside."""
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    m = np.abs(s) < 1.0
    out[m] = np.exp(-s[m] ** 2 / (1.0 - s[m] ** 2))
    return out if out.ndim else float(out)


def g1(s):
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    m = np.abs(s) < 1.0
    q = 1.0 - s[m] ** 2
    out[m] = np.exp(-s[m] ** 2 / q) * (-2.0 * s[m] / q ** 2)
    return out if out.ndim else float(out)


def bracket(s):
    """(4s^2 - 2(1-s^2)^2 + 8s^2(s^2-1)) / (1-s^2)^4 * g(s), which equals g''(s)."""
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    m = np.abs(s) < 1.0
    x = s[m]
    q = 1.0 - x ** 2
    out[m] = (4 * x ** 2 - 2 * q ** 2 + 8 * x ** 2 * (x ** 2 - 1)) / q ** 4 * np.exp(-x ** 2 / q)
    return out if out.ndim else float(out)


g2 = bracket


def _branch(s):
    """-1 on (-1, 0), 0 on [0, 1], 1 on (1, 2), None-like 2 elsewhere."""
    s = np.asarray(s, dtype=float)
    return np.select([(s > -1) & (s < 0), (s >= 0) & (s <= 1), (s > 1) & (s < 2)], [-1, 0, 1], 2)


def f(s):
    """Bump equal to 1 on [0, 1] and vanishing outside (-1, 2)."""
    s = np.asarray(s, dtype=float)
    b = _branch(s)
    out = np.select([b == -1, b == 0, b == 1], [g(s), 1.0, g(s - 1.0)], 0.0)
    return out if out.ndim else float(out)


def f_prime(s):
    s = np.asarray(s, dtype=float)
    b = _branch(s)
    out = np.select([b == -1, b == 1], [g1(s), g1(s - 1.0)], 0.0)
    return out if out.ndim else float(out)


def _f_second(s):
    s = np.asarray(s, dtype=float)
    b = _branch(s)
    return np.select([b == -1, b == 1], [g2(s), g2(s - 1.0)], 0.0)


# ---------------------------------------------------------------- auxiliary function

def _check_t(t):
    t = np.asarray(t, dtype=float)
    if np.any((t < 0) | (t > 1)):
        raise ValueError("t must lie in [0, 1]")
    return t


def h_mu(s, t, mu: float):
    t = _check_t(t)
    out = np.asarray(f(s)) * (t ** 2 / 2 - t) * mu
    return out if np.ndim(out) else float(out)


def dt_h(s, t, mu: float):
    t = _check_t(t)
    out = np.asarray(f(s)) * (t - 1) * mu
    return out if np.ndim(out) else float(out)


def ds_h(s, t, mu: float):
    t = _check_t(t)
    out = np.asarray(f_prime(s)) * (t ** 2 / 2 - t) * mu
    return out if np.ndim(out) else float(out)


def laplacian_h(s, t, mu: float):
    t = _check_t(t)
    out = (_f_second(s) * (t ** 2 / 2 - t) + np.asarray(f(s))) * mu
    return out if np.ndim(out) else float(out)


def fd_partials_check(mu: float = 1.0, n: int = 1000, step: float = 1e-4, seed: int = 0,
                      margin: float = 1e-3) -> dict[str, Any]:
    """Analytic partials of h_mu against central differences at random interior
    points of each branch; returns the worst absolute errors."""
    rng = np.random.default_rng(seed)
    branches = {"left": (-1 + margin, -margin), "middle": (margin, 1 - margin),
                "right": (1 + margin, 2 - margin), "outside": (2 + margin, 3)}
    out = {}
    for name, (lo, hi) in branches.items():
        s = rng.uniform(lo, hi, n)
        t = rng.uniform(step, 1 - step, n)
        h0 = h_mu(s, t, mu)
        e_s = np.abs((h_mu(s + step, t, mu) - h_mu(s - step, t, mu)) / (2 * step) - ds_h(s, t, mu))
        e_t = np.abs((h_mu(s, t + step, mu) - h_mu(s, t - step, mu)) / (2 * step) - dt_h(s, t, mu))
        lap = (h_mu(s + step, t, mu) + h_mu(s - step, t, mu) + h_mu(s, t + step, mu)
               + h_mu(s, t - step, mu) - 4 * h0) / step ** 2
        e_l = np.abs(lap - laplacian_h(s, t, mu))
        out[name] = {"ds": float(e_s.max()), "dt": float(e_t.max()), "laplacian": float(e_l.max())}
    out["max_error"] = max(v for b in branches for v in out[b].values())
    return out


# ---------------------------------------------------------------- inequalities

def boundary_inequality(s, H0: float, mu: float, t=0.0):
    """-H0 + (1 - t) mu f(s), the pairing on the lower boundary."""
    if not 0 < H0 <= mu / 2:
        raise ValueError("need 0 < H0 <= mu / 2")
    t = _check_t(t)
    out = -H0 + (1 - t) * mu * np.asarray(f(s))
    return out if np.ndim(out) else float(out)


def boundary_scan(grid: int = 100_000, H0_ratio: float = 0.49, mu: float = 1.0) -> dict[str, Any]:
    s = np.linspace(0.0, 1.0, grid)
    v = boundary_inequality(s, H0_ratio * mu, mu)
    outer = np.concatenate([np.linspace(-1, 0, grid // 2, endpoint=False)[1:],
                            np.linspace(1, 2, grid // 2, endpoint=False)[1:]])
    w = boundary_inequality(outer, H0_ratio * mu, mu)
    return {"grid": grid, "H0": H0_ratio * mu, "mu": mu, "min_on_moving_part": float(v.min()),
            "positive": bool(v.min() > 0), "outside_min": float(w.min()),
            "outside_negative_fraction": float(np.mean(w <= 0))}


def bracket_bound(grid: int = 100_000, lo: float = -1 + 1e-6) -> tuple[float, float]:
    s = np.linspace(lo, 0.0, grid)
    b = bracket(s)
    return float(b.min()), float(b.max())


def c_profile(s, C: float, A: float):
    if C <= 2 * A:
        raise ValueError("need C > 2A")
    if A < 0:
        raise ValueError("A is the size of a negative slope and must be nonnegative")
    out = (C - A * np.asarray(s, dtype=float)) * np.asarray(f(s))
    return out if np.ndim(out) else float(out)


def c_prime(s, C: float, A: float):
    c_profile(0.0, C, A)
    s = np.asarray(s, dtype=float)
    out = -A * np.asarray(f(s)) + (C - A * s) * np.asarray(f_prime(s))
    return out if np.ndim(out) else float(out)


def c_profile_check(C: float = 5.0, A: float = 2.0, grid: int = 10_001) -> dict[str, Any]:
    s = np.linspace(0.05, 0.95, grid)
    h = 1e-5
    fd = (c_profile(s + h, C, A) - c_profile(s - h, C, A)) / (2 * h)
    slope_err = float(np.max(np.abs(fd + A)))
    analytic_err = float(np.max(np.abs(c_prime(s, C, A) + A)))
    wide = np.linspace(-1.5, 2.5, grid)
    fv, cv = f(wide), c_profile(wide, C, A)
    return {"C": C, "A": A, "slope_error_fd": slope_err, "slope_error_analytic": analytic_err,
            "positive_on_support": bool(np.all(cv[fv > 0] > 0)),
            "zero_off_support": bool(np.all(cv[(wide <= -1) | (wide >= 2)] == 0))}


def interior_check(C: float, A: float, mu: float, grid: int = 1001, rho_max: float = 100.0) -> dict[str, Any]:
    """On s in [0, 1] with rho >= 1: whenever 2c'(s) + mu < 0 the terms
    -2c'(s) rho - Laplacian(h_mu) are positive."""
    s = np.linspace(0.0, 1.0, grid)
    rho = np.linspace(1.0, rho_max, 101)
    S, R = np.meshgrid(s, rho)
    cp = c_prime(S, C, A)
    lap = laplacian_h(S, 0.5, mu)
    hyp = 2 * cp + mu < 0
    concl = -2 * cp * R - lap > 0
    return {"C": C, "A": A, "mu": mu, "hypothesis_holds": bool(hyp.all()),
            "implication_holds": bool(np.all(~hyp | concl)),
            "min_value": float((-2 * cp * R - lap).min())}


# ---------------------------------------------------------------- report

def verify_all(grid: int = 100_000, seed: int = 0, with_times: bool = False) -> VerificationReport:
    rep = VerificationReport("c0")
    t0 = time.perf_counter()
    spec = mollifier()
    mass, _ = quad(lambda t: spec.normalizer * _bump_scalar(t), -0.5, 0.5, epsabs=1e-15, epsrel=1e-13)
    rep.add(check("mollifier_mass", abs(mass - 1) < 1e-8, None, mass=mass, normalizer=spec.normalizer,
                  printed_constant_mass=printed_constant_mass()))
    P = default_psi()
    v0, v1 = float(P(0.0)), float(P(1.0))
    rep.add(check("psi_endpoints", abs(v0 - 1) < 1e-8 and abs(v1) < 1e-8, None, psi0=v0, psi1=v1))
    xs = np.linspace(0.0, 1.0, grid)
    vals = P(xs)
    rep.add(check("psi_monotone", bool(np.all(np.diff(vals) <= 1e-15)), None, grid=grid))
    fd = fd_partials_check(mu=1.0, n=1000, seed=seed)
    rep.add(check("h_mu_partials", fd["max_error"] < 1e-5, None if fd["max_error"] < 1e-5 else fd, **fd))
    scan = boundary_scan(grid=grid, H0_ratio=0.49)
    rep.add(check("boundary_inequality", scan["positive"], None if scan["positive"] else scan, **scan))
    lo, hi = bracket_bound(grid)
    rep.add(check("bracket_bound", -200 <= lo and hi <= 200, None, min=lo, max=hi, claimed=[-200, 200],
                  at_zero=float(bracket(0.0))))
    cp = c_profile_check()
    ok = cp["slope_error_fd"] < 1e-8 and cp["slope_error_analytic"] < 1e-12 and cp["positive_on_support"] \
        and cp["zero_off_support"]
    rep.add(check("c_profile", ok, None if ok else cp, **cp))
    mu = 1.0
    ic = interior_check(C=5.0, A=2.0, mu=mu)
    rep.add(check("interior_sign", ic["hypothesis_holds"] and ic["implication_holds"], None, **ic))
    rep.add(diagnostic("boundary_outside_moving_part", outside_min=scan["outside_min"],
                       outside_negative_fraction=scan["outside_negative_fraction"]))
    if with_times:
        rep.meta["wall_time"] = time.perf_counter() - t0
    return rep
