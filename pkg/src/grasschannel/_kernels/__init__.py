"""Contact-angle root-finding kernels.

The hot loop of a channel sweep is solving, for every (body position, beam)
pair, the angle at which the beam-tip circle meets the shell ellipse.  A
compiled Cython kernel is used when available; otherwise a vectorized
pure-NumPy implementation with identical semantics is selected at import.
"""

from .numpy_backend import BASE_INSIDE, CONTACT, NO_CONTACT

try:  # pragma: no cover - depends on build environment
    from ._contact_cy import contact_phi_batch

    BACKEND = "cython"
except ImportError:  # pragma: no cover
    from .numpy_backend import contact_phi_batch

    BACKEND = "numpy"

__all__ = [
    "BACKEND",
    "BASE_INSIDE",
    "CONTACT",
    "NO_CONTACT",
    "contact_phi_batch",
]
