"""Pure-Python fallback for the path-loss fitting kernels.

Implements exactly the same bounded Nelder-Mead and profiled objective as
the compiled extension; the extension exists only for speed.

Search coordinates are x = (m, log10(a1), a2[, a3]) where m is the angular
exponent and a1..a3 the polynomial coefficients of the cross-section model.
Given those, the dB intercept and the path-loss exponent enter linearly and
are profiled out by least squares (clipped to their bounds), so the simplex
only has to search the 2-4 nonlinear coordinates.
"""

from __future__ import annotations

import math

BACKEND_NAME = "pure"

_INF = float("inf")


def _profiled_sse(
    x: list[float],
    order: int,
    pl: list[float],
    l10d: list[float],
    l10c: list[float],
    b1: list[float],
    b2: list[float],
    b3: list[float],
    alpha_lo: float,
    alpha_hi: float,
    n_lo: float,
    n_hi: float,
):
    n_obs = len(pl)
    m = x[0]
    a1 = 10.0 ** x[1]
    a2 = x[2] if order >= 2 else 0.0
    a3 = x[3] if order >= 3 else 0.0
    z = [0.0] * n_obs
    s_l = 0.0
    s_ll = 0.0
    s_z = 0.0
    s_zl = 0.0
    for j in range(n_obs):
        poly = a1 * b1[j]
        if order >= 2:
            poly += a2 * b2[j]
        if order >= 3:
            poly += a3 * b3[j]
        if not poly > 0.0:
            return _INF, 0.0, 0.0
        zj = pl[j] + 10.0 * math.log10(poly) + 10.0 * m * l10c[j]
        lj = l10d[j]
        z[j] = zj
        s_l += lj
        s_ll += lj * lj
        s_z += zj
        s_zl += zj * lj
    denom = n_obs * s_ll - s_l * s_l
    if denom <= 0.0:
        return _INF, 0.0, 0.0
    beta = (n_obs * s_zl - s_l * s_z) / denom
    n_exp = beta / 20.0
    if n_exp < n_lo:
        n_exp = n_lo
    elif n_exp > n_hi:
        n_exp = n_hi
    beta = 20.0 * n_exp
    alpha = (s_z - beta * s_l) / n_obs
    if alpha < alpha_lo:
        alpha = alpha_lo
    elif alpha > alpha_hi:
        alpha = alpha_hi
    sse = 0.0
    for j in range(n_obs):
        r = z[j] - alpha - beta * l10d[j]
        sse += r * r
    return sse, alpha, n_exp


def pl_eval(x, order, pl, l10d, l10c, b1, b2, b3, alpha_lo, alpha_hi, n_lo, n_hi):
    """Profiled objective at one point: returns (sse, alpha, n)."""
    return _profiled_sse(
        [float(v) for v in x],
        int(order),
        list(map(float, pl)),
        list(map(float, l10d)),
        list(map(float, l10c)),
        list(map(float, b1)),
        list(map(float, b2)),
        list(map(float, b3)),
        alpha_lo,
        alpha_hi,
        n_lo,
        n_hi,
    )


def nm_minimize(
    x0,
    lower,
    upper,
    order,
    pl,
    l10d,
    l10c,
    b1,
    b2,
    b3,
    alpha_lo,
    alpha_hi,
    n_lo,
    n_hi,
    ftol,
    max_eval,
):
    """Bounded Nelder-Mead on the profiled objective, from one start point.

    Candidates are projected onto the box bounds.  Terminates when the
    simplex function-value spread drops below ftol or the evaluation budget
    is exhausted.  Returns (x_best, f_best, n_eval, converged).
    """
    pl = list(map(float, pl))
    l10d = list(map(float, l10d))
    l10c = list(map(float, l10c))
    b1 = list(map(float, b1))
    b2 = list(map(float, b2))
    b3 = list(map(float, b3))
    lower = list(map(float, lower))
    upper = list(map(float, upper))
    dim = len(x0)
    order = int(order)

    def clip(point):
        return [min(max(point[i], lower[i]), upper[i]) for i in range(dim)]

    def fval(point):
        return _profiled_sse(
            point, order, pl, l10d, l10c, b1, b2, b3, alpha_lo, alpha_hi, n_lo, n_hi
        )[0]

    # Initial simplex: one vertex per coordinate, stepping away from the
    # nearer bound by 5% of the box width.
    base = clip([float(v) for v in x0])
    simplex = [list(base)]
    for i in range(dim):
        step = 0.05 * (upper[i] - lower[i])
        if base[i] + step > upper[i]:
            step = -step
        vertex = list(base)
        vertex[i] += step
        simplex.append(clip(vertex))
    fvals = [fval(p) for p in simplex]
    n_eval = len(simplex)

    idx = sorted(range(dim + 1), key=lambda k: fvals[k])
    simplex = [simplex[k] for k in idx]
    fvals = [fvals[k] for k in idx]
    if fvals[0] == _INF:
        return list(simplex[0]), fvals[0], n_eval, False

    converged = fvals[-1] - fvals[0] <= ftol
    while not converged and n_eval < max_eval:
        centroid = [
            sum(simplex[k][i] for k in range(dim)) / dim for i in range(dim)
        ]
        worst = simplex[dim]
        direction = [centroid[i] - worst[i] for i in range(dim)]

        xr = clip([centroid[i] + direction[i] for i in range(dim)])
        fr = fval(xr)
        n_eval += 1
        if fr < fvals[0]:
            xe = clip([centroid[i] + 2.0 * direction[i] for i in range(dim)])
            fe = fval(xe)
            n_eval += 1
            if fe < fr:
                simplex[dim], fvals[dim] = xe, fe
            else:
                simplex[dim], fvals[dim] = xr, fr
        elif fr < fvals[dim - 1]:
            simplex[dim], fvals[dim] = xr, fr
        else:
            shrink = False
            if fr < fvals[dim]:
                xc = clip([centroid[i] + 0.5 * direction[i] for i in range(dim)])
                fc = fval(xc)
                n_eval += 1
                if fc <= fr:
                    simplex[dim], fvals[dim] = xc, fc
                else:
                    shrink = True
            else:
                xc = clip([centroid[i] - 0.5 * direction[i] for i in range(dim)])
                fc = fval(xc)
                n_eval += 1
                if fc < fvals[dim]:
                    simplex[dim], fvals[dim] = xc, fc
                else:
                    shrink = True
            if shrink:
                best = simplex[0]
                for k in range(1, dim + 1):
                    simplex[k] = clip(
                        [best[i] + 0.5 * (simplex[k][i] - best[i]) for i in range(dim)]
                    )
                    fvals[k] = fval(simplex[k])
                n_eval += dim

        idx = sorted(range(dim + 1), key=lambda k: fvals[k])
        simplex = [simplex[k] for k in idx]
        fvals = [fvals[k] for k in idx]
        converged = fvals[-1] - fvals[0] <= ftol

    return list(simplex[0]), fvals[0], n_eval, converged
