# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled versions of the hot kernels in :mod:`udwsignal._pykernels`."""
import numpy as np

cimport cython
from libc.math cimport sqrt, hypot, asinh, exp, fabs, cos, sin, ceil, isfinite, NAN
from libc.stdlib cimport malloc, free

cdef int REST = 0, INERTIAL = 1, ACCELERATED = 2
cdef int SUDDEN = 0, EXPONENTIAL = 1, GAUSSIAN = 2

cdef double[15] XGK = [
    -0.991455371120812639206854697526329, -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926, -0.741531185599394439863864773280788,
    -0.586087235467691130294144845693013, -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245, 0.0,
    0.207784955007898467600689403773245, 0.405845151377397166906606412076961,
    0.586087235467691130294144845693013, 0.741531185599394439863864773280788,
    0.864864423359769072789712788640926, 0.949107912342758524526189684047851,
    0.991455371120812639206854697526329]
cdef double[15] WGK = [
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
    0.204432940075298892414161999234649, 0.190350578064785409913256402421014,
    0.169004726639267902826583426598550, 0.140653259715525918745189590510238,
    0.104790010322250183839876322541518, 0.063092092629978553290700663189204,
    0.022935322010529224963732008058970]
cdef double[15] WG = [
    0.0, 0.129484966168869693270611432679082, 0.0, 0.279705391489276667901467771423780,
    0.0, 0.381830050505118944950369775488975, 0.0, 0.417959183673469387755102040816327,
    0.0, 0.381830050505118944950369775488975, 0.0, 0.279705391489276667901467771423780,
    0.0, 0.129484966168869693270611432679082, 0.0]


cdef inline void wl_pos(int kind, double* p, double t, double* out) nogil:
    if kind == ACCELERATED:
        out[0] = hypot(1.0 / p[6], t)
        out[1] = 0.0
        out[2] = 0.0
    elif kind == INERTIAL:
        out[0] = p[0] + t * p[3]
        out[1] = p[1] + t * p[4]
        out[2] = p[2] + t * p[5]
    else:
        out[0] = p[0]
        out[1] = p[1]
        out[2] = p[2]


cdef inline double wl_tau(int kind, double* p, double t) nogil:
    if kind == ACCELERATED:
        return asinh(p[6] * t) / p[6]
    if kind == INERTIAL:
        return t * sqrt(1.0 - p[3] * p[3] - p[4] * p[4] - p[5] * p[5])
    return t


cdef inline double wl_dtau(int kind, double* p, double t) nogil:
    if kind == ACCELERATED:
        return 1.0 / hypot(1.0, p[6] * t)
    if kind == INERTIAL:
        return sqrt(1.0 - p[3] * p[3] - p[4] * p[4] - p[5] * p[5])
    return 1.0


cdef inline void wl_back_rate(int kind, double* p, double t, double delta, double* out) nogil:
    cdef double inv_a, earlier
    out[0] = 0.0
    out[1] = 0.0
    out[2] = 0.0
    if kind == INERTIAL:
        out[0] = -p[3]
        out[1] = -p[4]
        out[2] = -p[5]
    elif kind == ACCELERATED:
        inv_a = 1.0 / p[6]
        earlier = t - delta
        out[0] = -(t + earlier) / (hypot(inv_a, earlier) + hypot(inv_a, t))


cdef inline double sw_eta(int skind, double* sp, double tau) nogil:
    cdef double z
    if skind == SUDDEN:
        return 1.0 if (tau >= sp[0] and tau <= sp[0] + sp[1]) else 0.0
    if skind == EXPONENTIAL:
        return exp(-fabs(tau) / sp[0])
    z = (tau - sp[0]) / sp[1]
    return exp(-0.5 * z * z)


cdef inline double dist3(double* a, double* b) nogil:
    return sqrt((a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2 + (a[2] - b[2]) ** 2)


cdef inline double ray_residual(int ka, double* pa, double* xb, double t1, double t2) nogil:
    # hyperbola only: t2^2 cancelled analytically in (t1 - t2)^2 - |d|^2
    cdef double h = hypot(1.0 / pa[6], t2)
    cdef double dist = hypot(hypot(xb[0] - h, xb[1]), xb[2])
    cdef double num = (t1 * t1 - xb[0] * xb[0] - xb[1] * xb[1] - xb[2] * xb[2]
                       - 1.0 / (pa[6] * pa[6])) - 2.0 * t1 * t2 + 2.0 * xb[0] * h
    cdef double denom = t1 - t2 + dist
    if not isfinite(denom):
        return (num > 0) - (num < 0)
    if denom > 0.0:
        return num / denom
    return t1 - t2 - dist


def retarded_times(int ka, pa_in, int kb, pb_in, t1_in):
    """Emission time on worldline ``a`` of the ray reaching ``b`` at each ``t1``; nan if none."""
    cdef double[::1] pa = np.ascontiguousarray(pa_in, dtype=np.float64)
    cdef double[::1] pb = np.ascontiguousarray(pb_in, dtype=np.float64)
    cdef double[::1] t1 = np.ascontiguousarray(t1_in, dtype=np.float64).ravel()
    cdef Py_ssize_t n = t1.shape[0], i
    out_arr = np.empty(n)
    cdef double[::1] out = out_arr
    cdef double xb[3]
    cdef double d[3]
    cdef double t, f1, step, lo, hi, mid, flo, fm, vv, dv, dist, b, c, disc, root
    cdef int k
    with nogil:
        for i in range(n):
            t = t1[i]
            wl_pos(kb, &pb[0], t, xb)
            if ka != ACCELERATED:
                d[0] = xb[0] - pa[0]
                d[1] = xb[1] - pa[1]
                d[2] = xb[2] - pa[2]
                vv = 0.0
                dv = 0.0
                if ka == INERTIAL:
                    vv = pa[3] * pa[3] + pa[4] * pa[4] + pa[5] * pa[5]
                    dv = d[0] * pa[3] + d[1] * pa[4] + d[2] * pa[5]
                dist = sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2])
                b = t - dv
                c = (t - dist) * (t + dist)
                disc = b * b - (1.0 - vv) * c
                if disc < 0.0:
                    disc = 0.0
                root = sqrt(disc)
                if b >= 0.0:
                    out[i] = c / (b + root) if b + root > 0.0 else t
                else:
                    out[i] = (b - root) / (1.0 - vv)
                continue
            f1 = ray_residual(ka, &pa[0], xb, t, t)
            if f1 == 0.0:
                out[i] = t
                continue
            step = -f1 if -f1 > 1e-300 else 1e-300
            lo = t - step
            out[i] = NAN
            for k in range(1100):
                if not isfinite(lo):
                    break
                flo = ray_residual(ka, &pa[0], xb, t, lo)
                if flo >= 0.0:
                    break
                step *= 2.0
                lo = t - step
            if not isfinite(lo) or ray_residual(ka, &pa[0], xb, t, lo) < 0.0:
                continue
            hi = t
            for k in range(200):
                mid = 0.5 * (lo + hi)
                fm = ray_residual(ka, &pa[0], xb, t, mid)
                if fm >= 0.0:
                    lo = mid
                else:
                    hi = mid
                if hi - lo <= 4e-16 * (fabs(lo) if fabs(lo) > 1.0 else 1.0):
                    break
            out[i] = 0.5 * (lo + hi)
    return out_arr


cdef struct InnerCtx:
    int ka
    int sk
    double* pa
    double* sp
    double omega
    double t1
    double tt
    double rt
    double xb[3]
    double dt[3]


cdef inline void inner_eval(InnerCtx* c, double s, double* re, double* im) nogil:
    cdef double s2 = s * s
    cdef double t2 = c.tt - s2
    cdef double xa[3]
    cdef double d[3]
    cdef double u[3]
    cdef double r, denom, g, f2, tau, chi, w, ph
    wl_pos(c.ka, c.pa, t2, xa)
    d[0] = c.xb[0] - xa[0]
    d[1] = c.xb[1] - xa[1]
    d[2] = c.xb[2] - xa[2]
    r = sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2])
    wl_back_rate(c.ka, c.pa, c.tt, s2, u)
    denom = c.rt + r
    if denom > 0.0:
        g = 1.0 + (u[0] * (c.dt[0] + d[0]) + u[1] * (c.dt[1] + d[1]) + u[2] * (c.dt[2] + d[2])) / denom
    else:
        g = 1.0
    f2 = c.t1 - t2 + r
    tau = wl_tau(c.ka, c.pa, t2)
    chi = sw_eta(c.sk, c.sp, tau) * wl_dtau(c.ka, c.pa, t2)
    if c.rt > 0.0:
        w = 2.0 * chi / sqrt(g * f2)
    else:
        w = 2.0 * chi / (s * sqrt(g * f2 / s2))
    ph = -c.omega * tau
    re[0] = w * cos(ph)
    im[0] = w * sin(ph)


cdef inline void gk15(InnerCtx* c, double a, double b, double* kre, double* kim, double* err) nogil:
    cdef double half = 0.5 * (b - a)
    cdef double mid = 0.5 * (a + b)
    cdef double re, im, gre = 0.0, gim = 0.0
    cdef int j
    kre[0] = 0.0
    kim[0] = 0.0
    for j in range(15):
        inner_eval(c, mid + half * XGK[j], &re, &im)
        kre[0] += WGK[j] * re
        kim[0] += WGK[j] * im
        gre += WG[j] * re
        gim += WG[j] * im
    kre[0] *= half
    kim[0] *= half
    gre *= half
    gim *= half
    err[0] = hypot(kre[0] - gre, kim[0] - gim)


def inner_2p1(int ka, pa_in, int sk, sp_in, double omega, int kb, pb_in, t1_in, ttilde_in,
              double lo, double hi, int ppp, double rel_tol, double abs_tol, int max_depth):
    """Inner time integral of the 2+1 coefficient; see the pure-python version."""
    from ._pykernels import _inner_panels
    cdef double[::1] pa = np.ascontiguousarray(pa_in, dtype=np.float64)
    cdef double[::1] pb = np.ascontiguousarray(pb_in, dtype=np.float64)
    sp_arr = np.zeros(2)
    sp_arr[: len(sp_in)] = sp_in
    cdef double[::1] sp = sp_arr
    cdef double[::1] t1 = np.ascontiguousarray(t1_in, dtype=np.float64).ravel()
    cdef double[::1] ttilde = np.ascontiguousarray(ttilde_in, dtype=np.float64).ravel()
    cdef Py_ssize_t n = t1.shape[0], i, j, m, cap, nb
    vals_arr = np.zeros(n, dtype=np.complex128)
    errs_arr = np.zeros(n)
    cdef double complex[::1] vals = vals_arr
    cdef double[::1] errs = errs_arr
    cdef InnerCtx ctx
    cdef double xa[3]
    cdef double s_lo, s_hi, tt, target, esum, asum, sre, sim, mid, share
    cdef double[::1] pa_edges, pb_edges
    cdef double *A
    cdef double *B
    cdef double *KRE
    cdef double *KIM
    cdef double *ERR
    cdef int *DEP
    cdef int limit = max_depth + 40, it
    ctx.ka = ka
    ctx.sk = sk
    ctx.pa = &pa[0]
    ctx.sp = &sp[0]
    ctx.omega = omega
    for i in range(n):
        tt = ttilde[i]
        if not isfinite(tt) or tt <= lo:
            continue
        s_lo = sqrt(tt - hi) if tt > hi else 0.0
        s_hi = sqrt(tt - lo)
        if s_hi <= s_lo:
            continue
        ctx.t1 = t1[i]
        ctx.tt = tt
        wl_pos(kb, &pb[0], t1[i], ctx.xb)
        wl_pos(ka, &pa[0], tt, xa)
        for j in range(3):
            ctx.dt[j] = ctx.xb[j] - xa[j]
        ctx.rt = sqrt(ctx.dt[0] ** 2 + ctx.dt[1] ** 2 + ctx.dt[2] ** 2)
        edges_a, edges_b = _inner_panels(s_lo, s_hi, sqrt(2.0 * ctx.rt), omega, ppp)
        pa_edges = np.ascontiguousarray(edges_a, dtype=np.float64)
        pb_edges = np.ascontiguousarray(edges_b, dtype=np.float64)
        m = pa_edges.shape[0]
        cap = 4 * m + 4096
        A = <double*> malloc(cap * sizeof(double))
        B = <double*> malloc(cap * sizeof(double))
        KRE = <double*> malloc(cap * sizeof(double))
        KIM = <double*> malloc(cap * sizeof(double))
        ERR = <double*> malloc(cap * sizeof(double))
        DEP = <int*> malloc(cap * sizeof(int))
        try:
            with nogil:
                for j in range(m):
                    A[j] = pa_edges[j]
                    B[j] = pb_edges[j]
                    DEP[j] = 0
                    gk15(&ctx, A[j], B[j], &KRE[j], &KIM[j], &ERR[j])
                for it in range(limit):
                    esum = 0.0
                    asum = 0.0
                    for j in range(m):
                        esum += ERR[j]
                        asum += hypot(KRE[j], KIM[j])
                    target = rel_tol * asum
                    if target < abs_tol:
                        target = abs_tol
                    if esum <= target:
                        break
                    share = 0.5 * target / m
                    nb = m
                    for j in range(m):
                        if ERR[j] > share and DEP[j] < limit and nb < cap:
                            mid = 0.5 * (A[j] + B[j])
                            A[nb] = mid
                            B[nb] = B[j]
                            B[j] = mid
                            DEP[j] += 1
                            DEP[nb] = DEP[j]
                            gk15(&ctx, A[j], B[j], &KRE[j], &KIM[j], &ERR[j])
                            gk15(&ctx, A[nb], B[nb], &KRE[nb], &KIM[nb], &ERR[nb])
                            nb += 1
                    if nb == m:
                        break
                    m = nb
                sre = 0.0
                sim = 0.0
                esum = 0.0
                for j in range(m):
                    sre += KRE[j]
                    sim += KIM[j]
                    esum += ERR[j]
                vals[i] = sre + 1j * sim
                errs[i] = esum
        finally:
            free(A)
            free(B)
            free(KRE)
            free(KIM)
            free(ERR)
            free(DEP)
    return vals_arr, errs_arr
