"""Adaptive Gauss-Kronrod integration of oscillatory one-dimensional integrands.

Integrands are supplied as objects with vectorized methods

``values(t)``
    complex integrand,
``amp_phase(t)``
    ``(A, phi)`` with ``values = A * exp(i phi)``,
``dphase(t)``
    analytic derivative of ``phi``,
``budget(t)``
    a monotone non-decreasing phase budget used to seed panels,
``extra_error(t)`` (optional)
    pointwise absolute error of ``values`` (from nested integrals).

Each segment ``[p, q]`` is integrated in the variable ``u`` of the map
``t = p + (q - p) sin^2(pi u / 2)``, which smooths square-root behaviour
at both segment ends.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from ._pykernels import G7_WEIGHTS, GK15_NODES, GK15_WEIGHTS
from .errors import AccuracyError

_EPS = np.finfo(float).eps
MAX_PANELS = 400_000
_TAIL_PHASE_PANELS = 4000


@dataclass
class QuadResult:
    value: complex
    error: float
    panels: int = 0
    tail: complex = 0j
    notes: List[str] = field(default_factory=list)


def _t_of_u(p: float, q: float, u):
    u = np.asarray(u, dtype=float)
    w = q - p
    lower = p + w * np.sin(0.5 * np.pi * u) ** 2
    upper = q - w * np.cos(0.5 * np.pi * u) ** 2
    return np.where(u <= 0.5, lower, upper)


def _u_of_t(p: float, q: float, t):
    t = np.asarray(t, dtype=float)
    w = q - p
    with np.errstate(invalid="ignore"):
        lower = (2.0 / np.pi) * np.arcsin(np.sqrt(np.clip((t - p) / w, 0.0, 1.0)))
        upper = 1.0 - (2.0 / np.pi) * np.arcsin(np.sqrt(np.clip((q - t) / w, 0.0, 1.0)))
    return np.where(t - p <= q - t, lower, upper)


def _jacobian(p: float, q: float, u):
    return (q - p) * 0.5 * np.pi * np.sin(np.pi * np.asarray(u, dtype=float))


def _invert_monotone(fun, p: float, q: float, levels: np.ndarray) -> np.ndarray:
    """Approximate smallest t in [p, q] with fun(t) >= level (vectorized bisection).

    Panel cuts only need to be accurate relative to their distance from
    the nearer segment end, which keeps the number of ``fun`` calls small.
    """
    lo = np.full(levels.shape, p, dtype=float)
    hi = np.full(levels.shape, q, dtype=float)
    active = np.ones(levels.shape, dtype=bool)
    for _ in range(200):
        idx = np.nonzero(active)[0]
        if idx.size == 0:
            break
        mid = 0.5 * (lo[idx] + hi[idx])
        above = fun(mid) >= levels[idx]
        hi[idx] = np.where(above, mid, hi[idx])
        lo[idx] = np.where(above, lo[idx], mid)
        width = hi[idx] - lo[idx]
        scale = np.minimum(hi[idx] - p, q - lo[idx])
        done = (width <= 1e-3 * scale) | (width <= 4.0 * _EPS * np.maximum(np.abs(lo[idx]), np.abs(hi[idx])) + 1e-300)
        active[idx[done]] = False
    return hi


def _gk_panels(integrand, p, q, ua, ub):
    """Kronrod estimates and QUADPACK-style error estimates for panels in u."""
    half = 0.5 * (ub - ua)
    mid = 0.5 * (ua + ub)
    u = mid[:, None] + half[:, None] * GK15_NODES
    t = _t_of_u(p, q, u)
    jac = _jacobian(p, q, u)
    fx = integrand.values(t.ravel()).reshape(t.shape) * jac
    fx = np.where(jac == 0.0, 0.0, fx)
    kron = half * (fx @ GK15_WEIGHTS)
    gauss = half * (fx @ G7_WEIGHTS)
    mean = kron / np.where(half != 0, 2.0 * half, 1.0)
    resasc = np.abs(half) * (np.abs(fx - mean[:, None]) @ GK15_WEIGHTS)
    diff = np.abs(kron - gauss)
    with np.errstate(invalid="ignore", divide="ignore"):
        scaled = resasc * np.minimum(1.0, (200.0 * diff / resasc) ** 1.5)
    err = np.where(resasc > 0, scaled, diff)
    extra = getattr(integrand, "extra_error", None)
    if extra is not None:
        ex = extra(t.ravel()).reshape(t.shape) * np.abs(jac)
        err = err + np.abs(half) * (ex @ GK15_WEIGHTS)
    resabs = np.abs(half) * (np.abs(fx) @ GK15_WEIGHTS)
    err = np.maximum(err, 50.0 * _EPS * resabs)
    return kron, err, resabs


def _seed_panels(integrand, p: float, q: float, ppp: int) -> np.ndarray:
    """Panel edges in u for one segment, spaced by the phase budget."""
    bp, bq = integrand.budget(np.array([p, q]))
    step = 2.0 * math.pi / ppp
    count = (bq - bp) / step if np.isfinite(bq - bp) else MAX_PANELS
    n = int(min(max(math.ceil(count), 1), MAX_PANELS))
    edges_u = [np.linspace(0.0, 1.0, 5)]
    if n > 1:
        levels = bp + step * np.arange(1, n)
        cuts = _invert_monotone(integrand.budget, p, q, levels)
        edges_u.append(_u_of_t(p, q, cuts))
    u = np.unique(np.clip(np.concatenate(edges_u), 0.0, 1.0))
    return u


def _panel_budget(integrand, p: float, q: float, ppp: int) -> float:
    bp, bq = integrand.budget(np.array([p, q]))
    return (bq - bp) * ppp / (2.0 * math.pi)


class _Reflected:
    """The integrand seen through t -> -t, so a leading tail becomes a trailing one."""

    def __init__(self, inner):
        self.inner = inner

    def values(self, t):
        return self.inner.values(-np.asarray(t, dtype=float))

    def amp_phase(self, t):
        return self.inner.amp_phase(-np.asarray(t, dtype=float))

    def dphase(self, t):
        return -self.inner.dphase(-np.asarray(t, dtype=float))

    def budget(self, t):
        return -self.inner.budget(-np.asarray(t, dtype=float))

    def extra_error(self, t):
        extra = getattr(self.inner, "extra_error", None)
        t = np.asarray(t, dtype=float)
        return np.zeros(t.shape) if extra is None else extra(-t)


def integrate_segments(
    integrand, edges: Sequence[float], cfg, tail_end: bool = False, tail_start: bool = False
) -> QuadResult:
    """Integrate over consecutive segments between sorted ``edges``.

    With ``tail_end`` (``tail_start``) the last (first) segment may be
    truncated by an asymptotic tail estimate (see :func:`choose_tail_cut`);
    an infinite outer edge requires the corresponding flag.
    """
    edges = [float(e) for e in edges]
    if len(edges) < 2 or not (tail_end or tail_start):
        return _integrate_body(integrand, edges, cfg, 0j, 0.0, [])
    tol = cfg.tail_tol
    failure = None
    for _ in range(4):
        cut_hi = choose_tail_cut(integrand, edges[-2], edges[-1], cfg, tol) if tail_end else None
        cut_lo = None
        if tail_start:
            cut_lo = choose_tail_cut(_Reflected(integrand), -edges[1], -edges[0], cfg, tol)
        body = list(edges)
        tval, terr, notes = 0j, 0.0, []
        if cut_hi is not None:
            body[-1] = cut_hi[0]
            tval += cut_hi[1]
            terr += cut_hi[2]
            notes.append(cut_hi[3])
        if cut_lo is not None:
            lo_cut = -cut_lo[0]
            if lo_cut < body[1]:
                body[0] = lo_cut
                tval += cut_lo[1]
                terr += cut_lo[2]
                notes.append("leading " + cut_lo[3].replace(f"{cut_lo[0]:.6g}", f"{lo_cut:.6g}"))
        if cut_hi is None and cut_lo is None:
            return _integrate_body(integrand, edges, cfg, 0j, 0.0, [])
        try:
            return _integrate_body(integrand, body, cfg, tval, terr, notes)
        except AccuracyError as exc:
            failure = exc
        # retry with a stricter tail if the tail dominates the error budget
        if failure.best is None or terr <= 0.5 * (failure.error - terr):
            raise failure
        tol = min(tol, 0.05 * max(cfg.abs_tol, cfg.rel_tol * abs(failure.best)))
    raise failure


def _integrate_body(integrand, edges, cfg, tail_val, tail_err, notes) -> QuadResult:

    seg_p, seg_q, ua, ub, depth = [], [], [], [], []
    for p, q in zip(edges[:-1], edges[1:]):
        if not q > p:
            continue
        u = _seed_panels(integrand, p, q, cfg.points_per_period)
        seg_p.append(np.full(u.size - 1, p))
        seg_q.append(np.full(u.size - 1, q))
        ua.append(u[:-1])
        ub.append(u[1:])
        depth.append(np.zeros(u.size - 1, dtype=int))
    if not ua:
        return QuadResult(tail_val, tail_err, 0, tail_val, notes)
    P = np.concatenate(seg_p)
    Q = np.concatenate(seg_q)
    UA = np.concatenate(ua)
    UB = np.concatenate(ub)
    D = np.concatenate(depth)
    if UA.size > MAX_PANELS:
        raise AccuracyError("too many oscillation panels for the requested range", best=None, error=None)

    def evaluate(Pp, Qq, a, b):
        k = np.empty(a.size, dtype=complex)
        e = np.empty(a.size)
        r = np.empty(a.size)
        for key in np.unique(np.stack([Pp, Qq], axis=1), axis=0):
            sel = (Pp == key[0]) & (Qq == key[1])
            k[sel], e[sel], r[sel] = _gk_panels(integrand, key[0], key[1], a[sel], b[sel])
        return k, e, r

    K, E, R = evaluate(P, Q, UA, UB)
    converged = False
    for _ in range(10 * (cfg.max_depth + 2)):
        total = complex(math.fsum(K.real), math.fsum(K.imag)) + tail_val
        floor = 64.0 * _EPS * float(R.sum())
        target = max(cfg.abs_tol, cfg.rel_tol * abs(total), floor)
        # body and tail are each held to the target
        if float(E.sum()) <= target and tail_err <= target:
            converged = True
            break
        if tail_err > target:
            # refinement cannot help; let the caller tighten the tail
            break
        share = 0.5 * target / E.size
        bad = (E > share) & (D < cfg.max_depth)
        if not bad.any():
            break
        if bad.sum() > 20000:
            worst = np.argsort(E)[::-1][:20000]
            keep = np.zeros_like(bad)
            keep[worst] = True
            bad &= keep
        mid = 0.5 * (UA[bad] + UB[bad])
        nP = np.concatenate([P[bad], P[bad]])
        nQ = np.concatenate([Q[bad], Q[bad]])
        na = np.concatenate([UA[bad], mid])
        nb = np.concatenate([mid, UB[bad]])
        nk, ne, nr = evaluate(nP, nQ, na, nb)
        keep = ~bad
        P = np.concatenate([P[keep], nP])
        Q = np.concatenate([Q[keep], nQ])
        UA = np.concatenate([UA[keep], na])
        UB = np.concatenate([UB[keep], nb])
        D = np.concatenate([D[keep], D[bad] + 1, D[bad] + 1])
        K = np.concatenate([K[keep], nk])
        E = np.concatenate([E[keep], ne])
        R = np.concatenate([R[keep], nr])
    order = np.lexsort((UA, P))
    K = K[order]
    value = complex(math.fsum(K.real), math.fsum(K.imag)) + tail_val
    error = float(E.sum()) + tail_err
    if not converged:
        target = max(cfg.abs_tol, cfg.rel_tol * abs(value), 64.0 * _EPS * float(R.sum()))
        if float(E.sum()) > target or tail_err > target:
            raise AccuracyError(
                f"quadrature tolerance not reached (error {error:.3g} > {target:.3g})",
                best=value,
                error=error,
            )
    return QuadResult(value, error, int(K.size), tail_val, notes)


def _ibp_terms(integrand, t: np.ndarray):
    """Two-term integration-by-parts boundary values e^{i phi}(A/(i phi') - B/(i phi'))."""
    t = np.asarray(t, dtype=float)
    h = 1e-4 * np.maximum(np.abs(t), 1.0)
    probe = np.stack([t - h, t, t + h])
    amp, ph = integrand.amp_phase(probe.ravel())
    dph = integrand.dphase(probe.ravel())
    amp = amp.reshape(probe.shape)
    ph = ph.reshape(probe.shape)
    dph = dph.reshape(probe.shape)
    with np.errstate(divide="ignore", invalid="ignore"):
        u = amp / (1j * dph)
        b = (u[2] - u[0]) / (2.0 * h)
        first = u[1]
        second = b / (1j * dph[1])
        ratio = np.abs(second) / np.maximum(np.abs(first), 1e-300)
    boundary = np.exp(1j * ph[1]) * (first - second)
    return boundary, np.abs(second), ratio, np.abs(amp[1])


def choose_tail_cut(integrand, p: float, q: float, cfg, tol: Optional[float] = None):
    """Pick a truncation point ``S`` in ``(p, q)`` for long oscillatory or decaying tails.

    Returns ``(S, tail_value, tail_error, note)`` or ``None`` when the
    segment is short enough to integrate in full.
    """
    tol = cfg.tail_tol if tol is None else tol
    infinite = not math.isfinite(q)
    qq = q if not infinite else 1e300
    if not infinite and _panel_budget(integrand, p, q, cfg.points_per_period) < _TAIL_PHASE_PANELS:
        return None
    base = max(abs(p), 1.0) * 1e-2
    cands = p + base * 2.0 ** np.arange(0, 1000)
    cands = cands[np.isfinite(cands) & (cands < qq)]
    if cands.size < 6:
        return None
    boundary, second, ratio, amp = _ibp_terms(integrand, cands)
    span = cands - p
    amp_small = amp * span <= 1e-3 * cfg.abs_tol
    ibp_small = (second * ratio <= tol) & (ratio < 0.05) & np.isfinite(boundary)
    window = 4
    end_val = 0j
    if not infinite:
        end_b, _, end_ratio, _ = _ibp_terms(integrand, np.array([q * (1 - 1e-12) if q > 0 else q - 1e-12]))
        end_val = complex(end_b[0]) if np.isfinite(end_b[0]) and end_ratio[0] < 0.05 else None
    for i in range(cands.size - window):
        if np.all(amp_small[i : i + window]):
            s = float(cands[i])
            return s, 0j, float(amp[i] * span[i]), f"amplitude cut at {s:.6g}"
        if end_val is None:
            continue
        if np.all(ibp_small[i : i + window]):
            s = float(cands[i])
            s2 = float(cands[i + 1])
            tail_s = end_val - complex(boundary[i])
            tail_s2 = end_val - complex(boundary[i + 1])
            # self-check: the numeric integral over [s, s2] must bridge both estimates
            try:
                bridge = integrate_segments(integrand, [s, s2], cfg)
            except AccuracyError:
                continue
            mismatch = abs(bridge.value + tail_s2 - tail_s)
            if mismatch <= 10.0 * tol + bridge.error:
                err = float(second[i] * ratio[i]) + mismatch
                return s, tail_s, err, f"asymptotic tail from {s:.6g}"
    if infinite:
        raise AccuracyError("no usable truncation point for an infinite integration range", best=None, error=None)
    return None
