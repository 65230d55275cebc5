# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled contact-angle kernel.

Same contract as numpy_backend.contact_phi_batch: grid-scan bracketing plus
bisection for the largest-x intersection of the beam-tip circle with the
shell ellipse, for a batch of beam bases given in the ellipse frame.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport M_PI, NAN, cos, fmin, log2, ceil, sin, sqrt

cnp.import_array()

NO_CONTACT = 0
CONTACT = 1
BASE_INSIDE = 2

cdef int _CONTACT = 1
cdef int _BASE_INSIDE = 2

cdef double TANGENCY_TOL = 1e-9
cdef double GATE_SLACK = 1e-12


cdef inline double _f(double phi, double u, double base_y, double length,
                      double rx, double ry) noexcept nogil:
    cdef double dx = rx * cos(phi) - u
    cdef double dy = ry * sin(phi) - base_y
    return sqrt(dx * dx + dy * dy) - length


cdef inline double _bisect(double lo, double hi, double flo, double u,
                           double base_y, double length, double rx,
                           double ry, int n_iter) noexcept nogil:
    cdef double mid, fm
    cdef int k
    for k in range(n_iter):
        mid = 0.5 * (lo + hi)
        fm = _f(mid, u, base_y, length, rx, ry)
        if flo * fm <= 0.0:
            hi = mid
        else:
            lo = mid
            flo = fm
    return 0.5 * (lo + hi)


cdef inline double _refine_minimum(double lo, double hi, double u,
                                   double base_y, double length, double rx,
                                   double ry) noexcept nogil:
    cdef double inv = (sqrt(5.0) - 1.0) / 2.0
    cdef double a = lo, b = hi
    cdef double c = b - inv * (b - a)
    cdef double d = a + inv * (b - a)
    cdef double fc = _f(c, u, base_y, length, rx, ry)
    cdef double fd = _f(d, u, base_y, length, rx, ry)
    while b - a > 1e-13:
        if fc < fd:
            b = d
            d = c
            fd = fc
            c = b - inv * (b - a)
            fc = _f(c, u, base_y, length, rx, ry)
        else:
            a = c
            c = d
            fc = fd
            d = a + inv * (b - a)
            fd = _f(d, u, base_y, length, rx, ry)
    return 0.5 * (a + b)


def contact_phi_batch(u, double base_y, double length, double rx, double ry,
                      int n_grid=720, double tol=1e-12):
    """Solve the contact angle for beam bases at (u[j], base_y).

    Returns (phi, flag) arrays; see numpy_backend.contact_phi_batch.
    """
    cdef cnp.ndarray[cnp.float64_t, ndim=1] u_arr = \
        np.ascontiguousarray(np.atleast_1d(np.asarray(u, dtype=np.float64)))
    cdef Py_ssize_t m = u_arr.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] phi_out = np.full(m, np.nan)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] flag = np.zeros(m, dtype=np.int32)

    cdef cnp.ndarray[cnp.float64_t, ndim=1] grid = \
        np.linspace(0.0, M_PI, n_grid + 1)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ex = rx * np.cos(grid)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ey = ry * np.sin(grid)

    cdef double[::1] uv = u_arr
    cdef double[::1] gv = grid
    cdef double[::1] exv = ex
    cdef double[::1] eyv = ey
    cdef double[::1] phiv = phi_out
    cdef int[::1] flagv = flag

    cdef int n_iter = <int>ceil(log2((M_PI / n_grid) / tol)) + 1
    if n_iter < 1:
        n_iter = 1

    cdef Py_ssize_t j, k
    cdef double uj, tip_y, tip_q, base_q
    cdef double fk, fk1, dx, dy, fmin_val
    cdef Py_ssize_t fmin_idx
    cdef bint tip_in, base_in, found

    tip_y = base_y - length
    with nogil:
        for j in range(m):
            uj = uv[j]
            tip_q = (uj / rx) ** 2 + (tip_y / ry) ** 2
            base_q = (uj / rx) ** 2 + (base_y / ry) ** 2
            tip_in = tip_q <= 1.0 + GATE_SLACK
            base_in = base_q < 1.0
            if base_in:
                flagv[j] = _BASE_INSIDE
            if not (tip_in or base_in):
                continue

            found = False
            fmin_val = 1e300
            fmin_idx = 0
            dx = exv[0] - uj
            dy = eyv[0] - base_y
            fk = sqrt(dx * dx + dy * dy) - length
            for k in range(n_grid):
                dx = exv[k + 1] - uj
                dy = eyv[k + 1] - base_y
                fk1 = sqrt(dx * dx + dy * dy) - length
                if fk < fmin_val:
                    fmin_val = fk
                    fmin_idx = k
                if fk * fk1 <= 0.0:
                    phiv[j] = _bisect(gv[k], gv[k + 1], fk, uj, base_y,
                                      length, rx, ry, n_iter)
                    if not base_in:
                        flagv[j] = _CONTACT
                    found = True
                    break
                fk = fk1
            if found:
                continue
            if fk < fmin_val:
                fmin_val = fk
                fmin_idx = n_grid
            if fmin_val <= TANGENCY_TOL:
                phiv[j] = _refine_minimum(
                    gv[fmin_idx - 1 if fmin_idx > 0 else 0],
                    gv[fmin_idx + 1 if fmin_idx < n_grid else n_grid],
                    uj, base_y, length, rx, ry)
                if not base_in:
                    flagv[j] = _CONTACT

    return phi_out, flag
