"""Pure-Python scalar kernels for 2x2 runs.

This is the fallback twin of the compiled extension ``optidyn._speedups``;
both expose ``run_2x2`` with identical semantics and arithmetic so either
backend produces the same trajectories.  The per-iteration state of a 2x2 run
collapses to the two first-coordinate probabilities plus cumulative
loss-difference accumulators, which is what makes the million-step
lower-bound and best-iterate experiments cheap.

Integer codes (shared with the compiled twin):
    algo:  0 = OFTRL, 1 = OOMD (OGDA is OOMD with the squared-norm code)
    reg:   0 = entropy, 1 = sqeuclid, 2 = logbarrier, 3 = tsallis
"""

from math import exp, inf, log, log1p

ALGO_OFTRL = 0
ALGO_OOMD = 1

REG_ENTROPY = 0
REG_SQEUCLID = 1
REG_LOGBARRIER = 2
REG_TSALLIS = 3

_LO = 1e-15
_HI = 1.0 - 1e-15
_WIDTH = 1e-14


def _sig(v):
    # 1 / (1 + e^v)
    if v >= 0.0:
        z = exp(-v)
        return z / (1.0 + z)
    return 1.0 / (1.0 + exp(v))


def _softplus(v):
    # log(1 + e^v)
    if v > 0.0:
        return v + log1p(exp(-v))
    return log1p(exp(v))


def _pair_diff(reg, beta, u):
    # d/du R((u, 1-u)); strictly increasing
    if reg == REG_LOGBARRIER:
        return 1.0 / (1.0 - u) - 1.0 / u
    c = beta / (1.0 - beta)
    return c * ((1.0 - u) ** (beta - 1.0) - u ** (beta - 1.0))


def _pair_root(reg, beta, target):
    lo = _LO
    hi = _HI
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _pair_diff(reg, beta, mid) < target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= _WIDTH:
            break
    return 0.5 * (lo + hi)


def _response(reg, beta, v):
    # argmin_u u*v + R((u, 1-u)); v = eta * accumulated loss difference
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


def _clip01(u):
    if u < 0.0:
        return 0.0
    if u > 1.0:
        return 1.0
    return u


def run_2x2(
    a11,
    a12,
    a21,
    a22,
    algo,
    reg,
    beta,
    eta,
    horizon,
    stride,
    record_hats,
    record_logs,
    rec_t,
    rec_x,
    rec_y,
    rec_lossx,
    rec_lossy,
    rec_gap,
    rec_cum,
    rec_min,
    rec_xh,
    rec_yh,
    rec_logx,
    rec_logy,
    rec_logxh,
    rec_logyh,
):
    """Run `horizon` iterations from uniform initialization, recording every
    `stride` steps plus the final iterate.  Fills the preallocated arrays and
    returns (records, gap_sum, best_gap, best_t, min_log_prob).

    Aggregates (gap sum, running best, minimum probability) are maintained at
    every step regardless of stride.
    """
    # player state; D-values satisfy prob = _sig(D) for entropy runs
    x1 = 0.5
    y1 = 0.5
    xh1 = 0.5
    yh1 = 0.5
    ex = 0.0
    ey = 0.0
    cum_ex = 0.0  # OFTRL: raw loss-difference sums
    cum_ey = 0.0
    dhx = 0.0  # OOMD entropy: accumulated eta-scaled differences (hat state)
    dhy = 0.0
    dx = 0.0  # current D-values (entropy), for log-domain records
    dy = 0.0

    # running extremes of the D-values bound the minimum log-probability
    dx_lo = 0.0
    dx_hi = 0.0
    dy_lo = 0.0
    dy_hi = 0.0
    dhx_lo = 0.0
    dhx_hi = 0.0
    dhy_lo = 0.0
    dhy_hi = 0.0
    min_lin = 0.5  # linear-scale floor for non-entropy runs

    gap_sum = 0.0
    best_gap = inf
    best_t = 0
    k = 0

    entropy = reg == REG_ENTROPY
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
        min_log_prob = log(min_lin) if min_lin > 0.0 else -inf

    return k, gap_sum, best_gap, best_t, min_log_prob
