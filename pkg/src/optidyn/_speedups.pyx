# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled scalar kernels for 2x2 runs; twin of optidyn._scalar_py.

The per-iteration state of a 2x2 run collapses to the two first-coordinate
probabilities plus cumulative loss-difference accumulators.  Integer codes
match the pure-Python fallback: algo 0 = OFTRL, 1 = OOMD; reg 0 = entropy,
1 = sqeuclid, 2 = logbarrier, 3 = tsallis.
"""

from libc.math cimport exp, log, log1p, pow, INFINITY

cdef int ALGO_OFTRL = 0
cdef int ALGO_OOMD = 1
cdef int REG_ENTROPY = 0
cdef int REG_SQEUCLID = 1
cdef int REG_LOGBARRIER = 2
cdef int REG_TSALLIS = 3

cdef double _LO = 1e-15
cdef double _HI = 1.0 - 1e-15
cdef double _WIDTH = 1e-14


cdef inline double _sig(double v) noexcept nogil:
    cdef double z
    if v >= 0.0:
        z = exp(-v)
        return z / (1.0 + z)
    return 1.0 / (1.0 + exp(v))


cdef inline double _softplus(double v) noexcept nogil:
    if v > 0.0:
        return v + log1p(exp(-v))
    return log1p(exp(v))


cdef inline double _pair_diff(int reg, double beta, double u) noexcept nogil:
    cdef double c
    if reg == REG_LOGBARRIER:
        return 1.0 / (1.0 - u) - 1.0 / u
    c = beta / (1.0 - beta)
    return c * (pow(1.0 - u, beta - 1.0) - pow(u, beta - 1.0))


cdef inline double _pair_root(int reg, double beta, double target) noexcept nogil:
    cdef double lo = _LO
    cdef double hi = _HI
    cdef double mid
    cdef int i
    for i in range(200):
        mid = 0.5 * (lo + hi)
        if _pair_diff(reg, beta, mid) < target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= _WIDTH:
            break
    return 0.5 * (lo + hi)


cdef inline double _response(int reg, double beta, double v) noexcept nogil:
    cdef double u
    if reg == REG_ENTROPY:
        return _sig(v)
    if reg == REG_SQEUCLID:
        u = 0.5 * (1.0 - v)
        if u < 0.0:
            return 0.0
        if u > 1.0:
            return 1.0
        return u
    return _pair_root(reg, beta, -v)


cdef inline double _clip01(double u) noexcept nogil:
    if u < 0.0:
        return 0.0
    if u > 1.0:
        return 1.0
    return u


def run_2x2(
    double a11,
    double a12,
    double a21,
    double a22,
    int algo,
    int reg,
    double beta,
    double eta,
    long horizon,
    long stride,
    bint record_hats,
    bint record_logs,
    long[::1] rec_t,
    double[:, ::1] rec_x,
    double[:, ::1] rec_y,
    double[:, ::1] rec_lossx,
    double[:, ::1] rec_lossy,
    double[::1] rec_gap,
    double[::1] rec_cum,
    double[::1] rec_min,
    double[:, ::1] rec_xh,
    double[:, ::1] rec_yh,
    double[:, ::1] rec_logx,
    double[:, ::1] rec_logy,
    double[:, ::1] rec_logxh,
    double[:, ::1] rec_logyh,
):
    """Run `horizon` iterations from uniform initialization, recording every
    `stride` steps plus the final iterate.  Fills the preallocated arrays and
    returns (records, gap_sum, best_gap, best_t, min_log_prob)."""
    cdef double x1 = 0.5, y1 = 0.5, xh1 = 0.5, yh1 = 0.5
    cdef double ex = 0.0, ey = 0.0, cum_ex = 0.0, cum_ey = 0.0
    cdef double dhx = 0.0, dhy = 0.0, dx = 0.0, dy = 0.0
    cdef double dx_lo = 0.0, dx_hi = 0.0, dy_lo = 0.0, dy_hi = 0.0
    cdef double dhx_lo = 0.0, dhx_hi = 0.0, dhy_lo = 0.0, dhy_hi = 0.0
    cdef double min_lin = 0.5
    cdef double gap_sum = 0.0
    cdef double best_gap = INFINITY
    cdef long best_t = 0
    cdef long k = 0
    cdef long t
    cdef double x2, y2, ay1, ay2, atx1, atx2, gap, new_ex, new_ey, m
    cdef double worst, v, min_log_prob
    cdef bint entropy = reg == REG_ENTROPY

    for t in range(1, horizon + 1):
        if t > 1:
            if algo == ALGO_OFTRL:
                if entropy:
                    dhx = eta * cum_ex
                    dhy = eta * cum_ey
                    dx = eta * (cum_ex + ex)
                    dy = eta * (cum_ey + ey)
                    x1 = _sig(dx)
                    y1 = _sig(dy)
                    xh1 = _sig(dhx)
                    yh1 = _sig(dhy)
                else:
                    x1 = _response(reg, beta, eta * (cum_ex + ex))
                    y1 = _response(reg, beta, eta * (cum_ey + ey))
            else:
                if entropy:
                    dhx += eta * ex
                    dhy += eta * ey
                    dx = dhx + eta * ex
                    dy = dhy + eta * ey
                    x1 = _sig(dx)
                    y1 = _sig(dy)
                    xh1 = _sig(dhx)
                    yh1 = _sig(dhy)
                elif reg == REG_SQEUCLID:
                    xh1 = _clip01(xh1 - 0.5 * eta * ex)
                    yh1 = _clip01(yh1 - 0.5 * eta * ey)
                    x1 = _clip01(xh1 - 0.5 * eta * ex)
                    y1 = _clip01(yh1 - 0.5 * eta * ey)
                else:
                    xh1 = _pair_root(reg, beta, _pair_diff(reg, beta, xh1) - eta * ex)
                    yh1 = _pair_root(reg, beta, _pair_diff(reg, beta, yh1) - eta * ey)
                    x1 = _pair_root(reg, beta, _pair_diff(reg, beta, xh1) - eta * ex)
                    y1 = _pair_root(reg, beta, _pair_diff(reg, beta, yh1) - eta * ey)

        x2 = 1.0 - x1
        y2 = 1.0 - y1
        ay1 = a11 * y1 + a12 * y2
        ay2 = a21 * y1 + a22 * y2
        atx1 = a11 * x1 + a21 * x2
        atx2 = a12 * x1 + a22 * x2
        gap = (atx1 if atx1 > atx2 else atx2) - (ay1 if ay1 < ay2 else ay2)

        gap_sum += gap
        if gap < best_gap:
            best_gap = gap
            best_t = t

        if entropy:
            if dx > dx_hi:
                dx_hi = dx
            if dx < dx_lo:
                dx_lo = dx
            if dy > dy_hi:
                dy_hi = dy
            if dy < dy_lo:
                dy_lo = dy
            if dhx > dhx_hi:
                dhx_hi = dhx
            if dhx < dhx_lo:
                dhx_lo = dhx
            if dhy > dhy_hi:
                dhy_hi = dhy
            if dhy < dhy_lo:
                dhy_lo = dhy
        else:
            m = x1 if x1 < x2 else x2
            if y1 < m:
                m = y1
            if y2 < m:
                m = y2
            if algo == ALGO_OOMD:
                if xh1 < m:
                    m = xh1
                if 1.0 - xh1 < m:
                    m = 1.0 - xh1
                if yh1 < m:
                    m = yh1
                if 1.0 - yh1 < m:
                    m = 1.0 - yh1
            if m < min_lin:
                min_lin = m

        if (t - 1) % stride == 0 or t == horizon:
            rec_t[k] = t
            rec_x[k, 0] = x1
            rec_x[k, 1] = x2
            rec_y[k, 0] = y1
            rec_y[k, 1] = y2
            rec_lossx[k, 0] = ay1
            rec_lossx[k, 1] = ay2
            rec_lossy[k, 0] = -atx1
            rec_lossy[k, 1] = -atx2
            rec_gap[k] = gap
            rec_cum[k] = gap_sum
            rec_min[k] = best_gap
            if record_hats:
                rec_xh[k, 0] = xh1
                rec_xh[k, 1] = 1.0 - xh1
                rec_yh[k, 0] = yh1
                rec_yh[k, 1] = 1.0 - yh1
            if record_logs:
                rec_logx[k, 0] = -_softplus(dx)
                rec_logx[k, 1] = -_softplus(-dx)
                rec_logy[k, 0] = -_softplus(dy)
                rec_logy[k, 1] = -_softplus(-dy)
                rec_logxh[k, 0] = -_softplus(dhx)
                rec_logxh[k, 1] = -_softplus(-dhx)
                rec_logyh[k, 0] = -_softplus(dhy)
                rec_logyh[k, 1] = -_softplus(-dhy)
            k += 1

        new_ex = ay1 - ay2
        new_ey = atx2 - atx1
        cum_ex += new_ex
        cum_ey += new_ey
        ex = new_ex
        ey = new_ey

    if entropy:
        worst = dx_hi
        for v in (-dx_lo, dy_hi, -dy_lo, dhx_hi, -dhx_lo, dhy_hi, -dhy_lo):
            if v > worst:
                worst = v
        min_log_prob = -_softplus(worst)
    else:
        min_log_prob = log(min_lin) if min_lin > 0.0 else -INFINITY

    return k, gap_sum, best_gap, best_t, min_log_prob
