"""Pure numpy implementation of the hot kernels.

Worldlines and switching profiles arrive in their flat encodings
(``kind``, parameter vector) so this module and the compiled one share a
signature.  Worldline params: ``[x0, y0, z0, vx, vy, vz, a]``.
"""
from __future__ import annotations

import math

import numpy as np

REST, INERTIAL, ACCELERATED = 0, 1, 2
SUDDEN, EXPONENTIAL, GAUSSIAN = 0, 1, 2

# Gauss-Kronrod 15 / Gauss 7 on [-1, 1]
GK15_NODES = np.array([
    -0.991455371120812639206854697526329,
    -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926,
    -0.741531185599394439863864773280788,
    -0.586087235467691130294144845693013,
    -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245,
    0.0,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144845693013,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329,
])
GK15_WEIGHTS = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970,
])
G7_WEIGHTS = np.array([
    0.0, 0.129484966168869693270611432679082, 0.0, 0.279705391489276667901467771423780,
    0.0, 0.381830050505118944950369775488975, 0.0, 0.417959183673469387755102040816327,
    0.0, 0.381830050505118944950369775488975, 0.0, 0.279705391489276667901467771423780,
    0.0, 0.129484966168869693270611432679082, 0.0,
])

_BRACKET_STEPS = 1100
_BISECTIONS = 200


def positions(kind: int, p, t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    out = np.empty(t.shape + (3,))
    if kind == ACCELERATED:
        out[...] = 0.0
        out[..., 0] = np.hypot(1.0 / p[6], t)
    else:
        out[...] = p[:3]
        if kind == INERTIAL:
            out += t[..., None] * p[3:6]
    return out


def velocities(kind: int, p, t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    out = np.zeros(t.shape + (3,))
    if kind == ACCELERATED:
        out[..., 0] = t / np.hypot(1.0 / p[6], t)
    elif kind == INERTIAL:
        out[...] = p[3:6]
    return out


def proper_times(kind: int, p, t):
    t = np.asarray(t, dtype=float)
    if kind == ACCELERATED:
        return np.arcsinh(p[6] * t) / p[6]
    if kind == INERTIAL:
        return t * math.sqrt(1.0 - float(np.dot(p[3:6], p[3:6])))
    return t.copy()


def dtau_dt(kind: int, p, t):
    t = np.asarray(t, dtype=float)
    if kind == ACCELERATED:
        return 1.0 / np.hypot(1.0, p[6] * t)
    if kind == INERTIAL:
        return np.full(t.shape, math.sqrt(1.0 - float(np.dot(p[3:6], p[3:6]))))
    return np.ones(t.shape)


def back_displacement_rate(kind: int, p, t, delta):
    """(x(t - delta) - x(t)) / delta without cancellation."""
    t = np.asarray(t, dtype=float)
    delta = np.asarray(delta, dtype=float)
    shape = np.broadcast(t, delta).shape
    out = np.zeros(shape + (3,))
    if kind == INERTIAL:
        out[...] = -np.asarray(p[3:6])
    elif kind == ACCELERATED:
        inv_a = 1.0 / p[6]
        earlier = t - delta
        out[..., 0] = -(t + earlier) / (np.hypot(inv_a, earlier) + np.hypot(inv_a, t))
    return out


def eta(skind: int, sp, tau):
    tau = np.asarray(tau, dtype=float)
    if skind == SUDDEN:
        return ((tau >= sp[0]) & (tau <= sp[0] + sp[1])).astype(float)
    if skind == EXPONENTIAL:
        return np.exp(-np.abs(tau) / sp[0])
    z = (tau - sp[0]) / sp[1]
    return np.exp(-0.5 * z * z)


def hyperbola_ray_residual(a, xb, t1, t2):
    """t1 - t2 - |xb - x(t2)| for the hyperbola, with the t2^2 terms cancelled analytically."""
    h = np.hypot(1.0 / a, t2)
    dist = np.hypot(np.hypot(xb[..., 0] - h, xb[..., 1]), xb[..., 2])
    num = (t1 * t1 - np.sum(xb * xb, axis=-1) - 1.0 / (a * a)) - 2.0 * t1 * t2 + 2.0 * xb[..., 0] * h
    denom = t1 - t2 + dist
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        out = np.where(denom > 0, num / denom, t1 - t2 - dist)
    # beyond the float range only the sign survives
    return np.where(np.isfinite(denom), out, np.sign(num))


def _retarded_inertial(pa, xb, t1):
    v = np.asarray(pa[3:6])
    d = xb - np.asarray(pa[:3])
    vv = float(v @ v)
    dv = d @ v
    dist = np.linalg.norm(d, axis=-1)
    b = t1 - dv
    c = (t1 - dist) * (t1 + dist)
    disc = np.maximum(b * b - (1.0 - vv) * c, 0.0)
    root = np.sqrt(disc)
    denom = b + root
    with np.errstate(divide="ignore", invalid="ignore"):
        plus = np.where(denom > 0, c / np.where(denom > 0, denom, 1.0), t1)
        minus = (b - root) / (1.0 - vv)
    return np.where(b >= 0, plus, minus)


def retarded_times(ka: int, pa, kb: int, pb, t1) -> np.ndarray:
    """Emission time on worldline ``a`` of the ray reaching ``b`` at each ``t1``; nan if none."""
    pa = np.asarray(pa, dtype=float)
    pb = np.asarray(pb, dtype=float)
    t1 = np.asarray(t1, dtype=float)
    xb = positions(kb, pb, t1)
    if ka != ACCELERATED:
        return _retarded_inertial(pa, xb, t1)

    def f(t2):
        return hyperbola_ray_residual(pa[6], xb, t1, t2)

    f1 = f(t1)
    out = np.full(t1.shape, np.nan)
    out[f1 == 0.0] = t1[f1 == 0.0]
    step = np.maximum(-f1, 1e-300)
    lo = t1 - step
    open_ = f1 < 0.0
    with np.errstate(invalid="ignore", over="ignore"):
        for _ in range(_BRACKET_STEPS):
            flo = np.where(open_, f(lo), 1.0)
            need = open_ & (flo < 0.0) & np.isfinite(lo)
            if not need.any():
                break
            step = np.where(need, step * 2.0, step)
            lo = np.where(need, t1 - step, lo)
        good = open_ & np.isfinite(lo) & (f(lo) >= 0.0)
    hi = t1.copy()
    lo = np.where(good, lo, t1)
    for _ in range(_BISECTIONS):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        up = fm >= 0.0
        lo = np.where(good & up, mid, lo)
        hi = np.where(good & ~up, mid, hi)
        if not np.any(good & (hi - lo > 4e-16 * np.maximum(1.0, np.abs(lo)))):
            break
    out[good] = 0.5 * (lo[good] + hi[good])
    return out


def _inner_panels(s_lo, s_hi, scale, omega, ppp):
    cuts = {s_lo, s_hi}
    base = scale if scale > s_lo else s_lo
    if base > 0:
        x = base
        for _ in range(80):
            x *= 2.0
            if x >= s_hi:
                break
            cuts.add(x)
        if scale > s_lo:
            cuts.add(scale)
            x = scale
            for _ in range(50):
                x *= 0.5
                if x <= s_lo:
                    break
                cuts.add(x)
    edges = np.array(sorted(c for c in cuts if s_lo <= c <= s_hi))
    out_a, out_b = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        if b <= a:
            continue
        m = int(math.ceil(2.0 * b * abs(omega) * (b - a) * ppp / (2.0 * math.pi)))
        m = max(1, min(m, 100000))
        grid = np.linspace(a, b, m + 1)
        out_a.extend(grid[:-1])
        out_b.extend(grid[1:])
    return np.array(out_a), np.array(out_b)


def _inner_integrand(ka, pa, sk, sp, omega, xb, t1, tt, rt, dt_vec, s):
    s2 = s * s
    t2 = tt - s2
    xa = positions(ka, pa, t2)
    d = xb - xa
    r = np.linalg.norm(d, axis=-1)
    u = back_displacement_rate(ka, pa, tt, s2)
    denom = rt + r
    with np.errstate(invalid="ignore", divide="ignore"):
        g = np.where(denom > 0, 1.0 + np.einsum("...k,...k->...", u, dt_vec + d) / denom, 1.0)
    f2 = t1 - t2 + r
    tau = proper_times(ka, pa, t2)
    chi = eta(sk, sp, tau) * dtau_dt(ka, pa, t2)
    if rt > 0:
        return 2.0 * chi * np.exp(-1j * omega * tau) / np.sqrt(g * f2)
    # coincident limit: f2 = s^2 (1 + ...) and the weight is 2/s
    return 2.0 * chi * np.exp(-1j * omega * tau) / (s * np.sqrt(g * f2 / s2))


def _gk(fun, a, b):
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    x = mid[:, None] + half[:, None] * GK15_NODES
    fx = fun(x)
    k = half * (fx @ GK15_WEIGHTS)
    g = half * (fx @ G7_WEIGHTS)
    return k, np.abs(k - g)


def inner_2p1(ka, pa, sk, sp, omega, kb, pb, t1, ttilde, lo, hi, ppp, rel_tol, abs_tol, max_depth):
    """Inner time integral of the 2+1 coefficient for each reception time.

    Returns ``int chi_A(t2) exp(-i omega tau_A(t2)) / sqrt((t1-t2)^2 - r^2) dt2``
    over ``lo <= t2 <= min(hi, ttilde)`` and an absolute error estimate.
    """
    pa = np.asarray(pa, dtype=float)
    pb = np.asarray(pb, dtype=float)
    sp = np.asarray(sp, dtype=float)
    t1 = np.asarray(t1, dtype=float)
    ttilde = np.asarray(ttilde, dtype=float)
    vals = np.zeros(t1.shape, dtype=complex)
    errs = np.zeros(t1.shape)
    for i in range(t1.size):
        tt = ttilde[i]
        if not np.isfinite(tt) or tt <= lo:
            continue
        s_lo = math.sqrt(max(tt - hi, 0.0))
        s_hi = math.sqrt(tt - lo)
        if s_hi <= s_lo:
            continue
        xb = positions(kb, pb, t1[i])
        dt_vec = xb - positions(ka, pa, tt)
        rt = float(np.linalg.norm(dt_vec))
        scale = math.sqrt(2.0 * rt)

        def fun(s, t1i=t1[i], tt=tt, rt=rt, dt_vec=dt_vec, xb=xb):
            return _inner_integrand(ka, pa, sk, sp, omega, xb, t1i, tt, rt, dt_vec, s)

        a, b = _inner_panels(s_lo, s_hi, scale, omega, ppp)
        depth = np.zeros(a.size, dtype=int)
        k, e = _gk(fun, a, b)
        for _ in range(max_depth + 40):
            target = max(abs_tol, rel_tol * np.abs(k).sum())
            if e.sum() <= target:
                break
            bad = (e > 0.5 * target / max(e.size, 1)) & (depth < max_depth + 40)
            if not bad.any():
                break
            mid = 0.5 * (a[bad] + b[bad])
            na = np.concatenate([a[~bad], a[bad], mid])
            nb = np.concatenate([b[~bad], mid, b[bad]])
            nd = np.concatenate([depth[~bad], depth[bad] + 1, depth[bad] + 1])
            kk, ee = _gk(fun, np.concatenate([a[bad], mid]), np.concatenate([mid, b[bad]]))
            k = np.concatenate([k[~bad], kk])
            e = np.concatenate([e[~bad], ee])
            a, b, depth = na, nb, nd
        order = np.argsort(a, kind="stable")
        vals[i] = np.sum(k[order])
        errs[i] = e.sum()
    return vals, errs
