"""Pure-NumPy contact-angle kernel (fallback for the compiled extension).

Beam bases are given in the ellipse frame: u = base_x - ellipse_center_x,
base_y > 0 on the top wall.  For each base the kernel finds the root of

    f(phi) = |(r_x cos(phi), r_y sin(phi)) - (u, base_y)| - length

on phi in [0, pi] with the largest x coordinate (smallest phi), by bracketing
sign changes on a uniform grid and refining with bisection.
"""

import numpy as np

NO_CONTACT = 0
CONTACT = 1
BASE_INSIDE = 2

# Residual [m] below which a non-bracketed grid minimum counts as tangency.
TANGENCY_TOL = 1e-9

# Slack on the tip-containment gate so exact tangency still registers.
_GATE_SLACK = 1e-12


def _refine_minimum(u, base_y, length, rx, ry, lo, hi):
    """Golden-section minimization of f(phi) on [lo, hi] (tangency case)."""
    inv = (np.sqrt(5.0) - 1.0) / 2.0

    def f(phi):
        return (
            np.hypot(rx * np.cos(phi) - u, ry * np.sin(phi) - base_y) - length
        )

    a, b = lo, hi
    c = b - inv * (b - a)
    d = a + inv * (b - a)
    fc, fd = f(c), f(d)
    while b - a > 1e-13:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - inv * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def contact_phi_batch(u, base_y, length, rx, ry, n_grid=720, tol=1e-12):
    """Solve the contact angle for beam bases at (u[j], base_y).

    Returns ``(phi, flag)`` arrays of shape ``u.shape``: ``phi[j]`` is the
    largest-x solution of the tip-circle/ellipse intersection (NaN when beam
    j is out of contact) and ``flag[j]`` is one of NO_CONTACT, CONTACT,
    BASE_INSIDE.
    """
    u = np.atleast_1d(np.asarray(u, dtype=float))
    m = u.size
    phi_out = np.full(m, np.nan)
    flag = np.zeros(m, dtype=np.int32)

    tip_y = base_y - length
    tip_in = (u / rx) ** 2 + (tip_y / ry) ** 2 <= 1.0 + _GATE_SLACK
    base_in = (u / rx) ** 2 + (base_y / ry) ** 2 < 1.0
    active = tip_in | base_in
    flag[base_in] = BASE_INSIDE
    if not active.any():
        return phi_out, flag

    ia = np.nonzero(active)[0]
    grid = np.linspace(0.0, np.pi, n_grid + 1)
    ex = rx * np.cos(grid)
    ey = ry * np.sin(grid)
    f = np.hypot(ex[None, :] - u[ia, None], ey[None, :] - base_y) - length

    bracket = f[:, :-1] * f[:, 1:] <= 0.0
    has_bracket = bracket.any(axis=1)
    first = np.argmax(bracket, axis=1)

    # Bisection on rows with a bracket (vectorized over rows).
    rows = np.nonzero(has_bracket)[0]
    if rows.size:
        lo = grid[first[rows]]
        hi = grid[first[rows] + 1]
        ub = u[ia[rows]]
        flo = f[rows, first[rows]]
        n_iter = int(np.ceil(np.log2((np.pi / n_grid) / tol))) + 1
        for _ in range(max(n_iter, 1)):
            mid = 0.5 * (lo + hi)
            fm = np.hypot(rx * np.cos(mid) - ub, ry * np.sin(mid) - base_y) - length
            left = flo * fm <= 0.0
            hi = np.where(left, mid, hi)
            lo = np.where(left, lo, mid)
            flo = np.where(left, flo, fm)
        phi_out[ia[rows]] = 0.5 * (lo + hi)
        contact_rows = ia[rows]
        flag[contact_rows] = np.where(
            flag[contact_rows] == BASE_INSIDE, BASE_INSIDE, CONTACT
        )

    # Rows with no sign change: tangency (grazing contact) if the grid
    # minimum is within tolerance of zero.
    miss = np.nonzero(~has_bracket)[0]
    for r in miss:
        fmin_idx = int(np.argmin(f[r]))
        if f[r, fmin_idx] > TANGENCY_TOL:
            j = ia[r]
            if flag[j] != BASE_INSIDE:
                flag[j] = NO_CONTACT
            continue
        lo = grid[max(fmin_idx - 1, 0)]
        hi = grid[min(fmin_idx + 1, n_grid)]
        j = ia[r]
        phi_out[j] = _refine_minimum(u[j], base_y, length, rx, ry, lo, hi)
        if flag[j] != BASE_INSIDE:
            flag[j] = CONTACT

    return phi_out, flag
