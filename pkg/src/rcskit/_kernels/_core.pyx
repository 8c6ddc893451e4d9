# cython: language_level=3
"""Compiled path-loss fitting kernels (hot loop of the model fits).

Mirrors _pure.py exactly: same profiled objective, same bounded
Nelder-Mead, same tie-breaking, so both backends follow the same search
trajectory up to floating-point association.
"""

from libc.math cimport log10, pow, INFINITY
from libc.stdlib cimport malloc, free

BACKEND_NAME = "compiled"

DEF MAX_DIM = 4


cdef double _objective(
    const double* x, int dim, int order, int n_obs,
    const double* pl, const double* l10d, const double* l10c,
    const double* b1, const double* b2, const double* b3,
    double alpha_lo, double alpha_hi, double n_lo, double n_hi,
    double* z, double* alpha_out, double* n_out,
) noexcept nogil:
    cdef double m = x[0]
    cdef double a1 = pow(10.0, x[1])
    cdef double a2 = x[2] if order >= 2 else 0.0
    cdef double a3 = x[3] if order >= 3 else 0.0
    cdef double s_l = 0.0, s_ll = 0.0, s_z = 0.0, s_zl = 0.0
    cdef double poly, zj, lj, denom, beta, n_exp, alpha, sse, r
    cdef int j
    for j in range(n_obs):
        poly = a1 * b1[j]
        if order >= 2:
            poly += a2 * b2[j]
        if order >= 3:
            poly += a3 * b3[j]
        if not poly > 0.0:
            return INFINITY
        zj = pl[j] + 10.0 * log10(poly) + 10.0 * m * l10c[j]
        lj = l10d[j]
        z[j] = zj
        s_l += lj
        s_ll += lj * lj
        s_z += zj
        s_zl += zj * lj
    denom = n_obs * s_ll - s_l * s_l
    if denom <= 0.0:
        return INFINITY
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
    alpha_out[0] = alpha
    n_out[0] = n_exp
    return sse


cdef inline void _clip(double* point, const double* lower, const double* upper, int dim) noexcept nogil:
    cdef int i
    for i in range(dim):
        if point[i] < lower[i]:
            point[i] = lower[i]
        elif point[i] > upper[i]:
            point[i] = upper[i]


cdef void _sort_simplex(double* simplex, double* fvals, int dim) noexcept nogil:
    # Stable insertion sort ascending in f (ties keep insertion order),
    # matching Python's sorted().
    cdef int k, j, i
    cdef double fkey
    cdef double key[MAX_DIM]
    for k in range(1, dim + 1):
        fkey = fvals[k]
        for i in range(dim):
            key[i] = simplex[k * MAX_DIM + i]
        j = k - 1
        while j >= 0 and fvals[j] > fkey:
            fvals[j + 1] = fvals[j]
            for i in range(dim):
                simplex[(j + 1) * MAX_DIM + i] = simplex[j * MAX_DIM + i]
            j -= 1
        fvals[j + 1] = fkey
        for i in range(dim):
            simplex[(j + 1) * MAX_DIM + i] = key[i]


def pl_eval(x, order, pl, l10d, l10c, b1, b2, b3,
            double alpha_lo, double alpha_hi, double n_lo, double n_hi):
    """Profiled objective at one point: returns (sse, alpha, n)."""
    cdef double[::1] pl_v = pl
    cdef double[::1] l10d_v = l10d
    cdef double[::1] l10c_v = l10c
    cdef double[::1] b1_v = b1
    cdef double[::1] b2_v = b2
    cdef double[::1] b3_v = b3
    cdef int n_obs = pl_v.shape[0]
    cdef int order_c = order
    cdef double xv[MAX_DIM]
    cdef int i
    for i in range(len(x)):
        xv[i] = x[i]
    cdef double* z = <double*> malloc(n_obs * sizeof(double))
    if z == NULL:
        raise MemoryError()
    cdef double alpha = 0.0, n_exp = 0.0, sse
    try:
        sse = _objective(xv, len(x), order_c, n_obs,
                         &pl_v[0], &l10d_v[0], &l10c_v[0],
                         &b1_v[0], &b2_v[0], &b3_v[0],
                         alpha_lo, alpha_hi, n_lo, n_hi, z, &alpha, &n_exp)
    finally:
        free(z)
    if sse == INFINITY:
        return float("inf"), 0.0, 0.0
    return sse, alpha, n_exp


def nm_minimize(x0, lower, upper, order, pl, l10d, l10c, b1, b2, b3,
                double alpha_lo, double alpha_hi, double n_lo, double n_hi,
                double ftol, int max_eval):
    """Bounded Nelder-Mead on the profiled objective, from one start point.

    Returns (x_best, f_best, n_eval, converged); see the pure backend for
    the algorithm description.
    """
    cdef double[::1] pl_v = pl
    cdef double[::1] l10d_v = l10d
    cdef double[::1] l10c_v = l10c
    cdef double[::1] b1_v = b1
    cdef double[::1] b2_v = b2
    cdef double[::1] b3_v = b3
    cdef int n_obs = pl_v.shape[0]
    cdef int dim = len(x0)
    cdef int order_c = order
    if dim > MAX_DIM:
        raise ValueError("at most 4 search coordinates are supported")

    cdef double lo[MAX_DIM]
    cdef double hi[MAX_DIM]
    cdef double simplex[(MAX_DIM + 1) * MAX_DIM]
    cdef double fvals[MAX_DIM + 1]
    cdef double centroid[MAX_DIM]
    cdef double direction[MAX_DIM]
    cdef double cand[MAX_DIM]
    cdef double alpha_scratch = 0.0, n_scratch = 0.0
    cdef double step, fr, fe, fc
    cdef int i, k, n_eval
    cdef bint converged, shrink

    for i in range(dim):
        lo[i] = lower[i]
        hi[i] = upper[i]

    cdef double* z = <double*> malloc(n_obs * sizeof(double))
    if z == NULL:
        raise MemoryError()
    try:
        for i in range(dim):
            simplex[i] = x0[i]
        _clip(&simplex[0], lo, hi, dim)
        for k in range(1, dim + 1):
            for i in range(dim):
                simplex[k * MAX_DIM + i] = simplex[i]
            step = 0.05 * (hi[k - 1] - lo[k - 1])
            if simplex[k - 1] + step > hi[k - 1]:
                step = -step
            simplex[k * MAX_DIM + k - 1] = simplex[k - 1] + step
            _clip(&simplex[k * MAX_DIM], lo, hi, dim)
        with nogil:
            for k in range(dim + 1):
                fvals[k] = _objective(&simplex[k * MAX_DIM], dim, order_c, n_obs,
                                      &pl_v[0], &l10d_v[0], &l10c_v[0],
                                      &b1_v[0], &b2_v[0], &b3_v[0],
                                      alpha_lo, alpha_hi, n_lo, n_hi,
                                      z, &alpha_scratch, &n_scratch)
            n_eval = dim + 1
            _sort_simplex(&simplex[0], &fvals[0], dim)
            if fvals[0] == INFINITY:
                converged = False
            else:
                converged = fvals[dim] - fvals[0] <= ftol
                while not converged and n_eval < max_eval:
                    for i in range(dim):
                        centroid[i] = 0.0
                        for k in range(dim):
                            centroid[i] += simplex[k * MAX_DIM + i]
                        centroid[i] /= dim
                        direction[i] = centroid[i] - simplex[dim * MAX_DIM + i]

                    for i in range(dim):
                        cand[i] = centroid[i] + direction[i]
                    _clip(cand, lo, hi, dim)
                    fr = _objective(cand, dim, order_c, n_obs,
                                    &pl_v[0], &l10d_v[0], &l10c_v[0],
                                    &b1_v[0], &b2_v[0], &b3_v[0],
                                    alpha_lo, alpha_hi, n_lo, n_hi,
                                    z, &alpha_scratch, &n_scratch)
                    n_eval += 1
                    if fr < fvals[0]:
                        for i in range(dim):
                            simplex[dim * MAX_DIM + i] = cand[i]
                        fvals[dim] = fr
                        for i in range(dim):
                            cand[i] = centroid[i] + 2.0 * direction[i]
                        _clip(cand, lo, hi, dim)
                        fe = _objective(cand, dim, order_c, n_obs,
                                        &pl_v[0], &l10d_v[0], &l10c_v[0],
                                        &b1_v[0], &b2_v[0], &b3_v[0],
                                        alpha_lo, alpha_hi, n_lo, n_hi,
                                        z, &alpha_scratch, &n_scratch)
                        n_eval += 1
                        if fe < fr:
                            for i in range(dim):
                                simplex[dim * MAX_DIM + i] = cand[i]
                            fvals[dim] = fe
                    elif fr < fvals[dim - 1]:
                        for i in range(dim):
                            simplex[dim * MAX_DIM + i] = cand[i]
                        fvals[dim] = fr
                    else:
                        shrink = False
                        if fr < fvals[dim]:
                            for i in range(dim):
                                cand[i] = centroid[i] + 0.5 * direction[i]
                            _clip(cand, lo, hi, dim)
                            fc = _objective(cand, dim, order_c, n_obs,
                                            &pl_v[0], &l10d_v[0], &l10c_v[0],
                                            &b1_v[0], &b2_v[0], &b3_v[0],
                                            alpha_lo, alpha_hi, n_lo, n_hi,
                                            z, &alpha_scratch, &n_scratch)
                            n_eval += 1
                            if fc <= fr:
                                for i in range(dim):
                                    simplex[dim * MAX_DIM + i] = cand[i]
                                fvals[dim] = fc
                            else:
                                shrink = True
                        else:
                            for i in range(dim):
                                cand[i] = centroid[i] - 0.5 * direction[i]
                            _clip(cand, lo, hi, dim)
                            fc = _objective(cand, dim, order_c, n_obs,
                                            &pl_v[0], &l10d_v[0], &l10c_v[0],
                                            &b1_v[0], &b2_v[0], &b3_v[0],
                                            alpha_lo, alpha_hi, n_lo, n_hi,
                                            z, &alpha_scratch, &n_scratch)
                            n_eval += 1
                            if fc < fvals[dim]:
                                for i in range(dim):
                                    simplex[dim * MAX_DIM + i] = cand[i]
                                fvals[dim] = fc
                            else:
                                shrink = True
                        if shrink:
                            for k in range(1, dim + 1):
                                for i in range(dim):
                                    simplex[k * MAX_DIM + i] = simplex[i] + 0.5 * (
                                        simplex[k * MAX_DIM + i] - simplex[i]
                                    )
                                _clip(&simplex[k * MAX_DIM], lo, hi, dim)
                                fvals[k] = _objective(&simplex[k * MAX_DIM], dim, order_c, n_obs,
                                                      &pl_v[0], &l10d_v[0], &l10c_v[0],
                                                      &b1_v[0], &b2_v[0], &b3_v[0],
                                                      alpha_lo, alpha_hi, n_lo, n_hi,
                                                      z, &alpha_scratch, &n_scratch)
                            n_eval += dim
                    _sort_simplex(&simplex[0], &fvals[0], dim)
                    converged = fvals[dim] - fvals[0] <= ftol
    finally:
        free(z)

    best = [simplex[i] for i in range(dim)]
    return best, fvals[0], n_eval, bool(converged)
