"""Poincare-ball and Klein-model primitives.

Two layers live here.  The typed layer (:class:`PoincarePoint`,
:class:`KleinPoint` and the operations on them) validates every input against
the open-ball invariant ``c * ||z||^2 < 1`` and raises the package error types
on misuse.  The array layer (``exp0``, ``log0``, ``dist_rows``, ...) works on
raw arrays, accepts tape nodes as well as numpy arrays, and is what the
objective and training code build on.

Conventions: curvature ``c`` is a positive constant (default 1.0) and the ball
radius is ``1/sqrt(c)``.  The exponential and logarithm maps are taken at the
origin only; general-basepoint maps are intentionally absent.

Closed forms::

    d(z1, z2)  = (2/sqrt(c)) atanh(sqrt(c) * ||(-z1) (+) z2||)      (Mobius form)
    exp0(v)    = tanh(sqrt(c)||v||) * v / (sqrt(c)||v||)
    log0(u)    = atanh(sqrt(c)||u||) * u / (sqrt(c)||u||)
    z_K        = 2 z_B / (1 + c||z_B||^2)
    z_B        = z_K / (1 + sqrt(1 - c||z_K||^2))
    midpoint   = sum_i gamma_i z_i / sum_i gamma_i,  gamma_i = 1/sqrt(1 - c||z_i||^2)
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import autodiff as ad
from .errors import DimensionMismatch, EmptyInput, MixedCurvature, OutsideBall

DEFAULT_CLIP_EPSILON = 1e-5

# Floor under squared norms so that coef(s) = f(s)/s evaluates to its limit 1
# at the origin instead of 0/0.
_TINY_SQ = 1e-300

# tanh saturates to exactly 1.0 in float64 around |x| ~ 19; cap it just below
# so exp0 output always satisfies the strict ball invariant.
_TANH_MAX = np.nextafter(1.0, 0.0)


def _as_vector(x):
    v = np.asarray(x, dtype=np.float64)
    if v.ndim != 1 or v.size < 1:
        raise DimensionMismatch(f"expected a 1-D vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise OutsideBall("coordinates must be finite")
    return v


def _check_curvature(c):
    c = float(c)
    if not (c > 0.0 and np.isfinite(c)):
        raise ValueError(f"curvature must be a positive finite real, got {c}")
    return c


@dataclass(frozen=True)
class PoincarePoint:
    """A point strictly inside the curvature-``c`` Poincare ball."""

    coords: np.ndarray
    c: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "coords", _as_vector(self.coords))
        object.__setattr__(self, "c", _check_curvature(self.c))
        if self.c * float(np.dot(self.coords, self.coords)) >= 1.0:
            raise OutsideBall(
                f"c*||z||^2 = {self.c * float(np.dot(self.coords, self.coords)):.17g} >= 1"
            )
        self.coords.setflags(write=False)

    @property
    def dim(self):
        return self.coords.size


@dataclass(frozen=True)
class KleinPoint:
    """A point strictly inside the curvature-``c`` Klein ball."""

    coords: np.ndarray
    c: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "coords", _as_vector(self.coords))
        object.__setattr__(self, "c", _check_curvature(self.c))
        if self.c * float(np.dot(self.coords, self.coords)) >= 1.0:
            raise OutsideBall(
                f"c*||z||^2 = {self.c * float(np.dot(self.coords, self.coords)):.17g} >= 1"
            )
        self.coords.setflags(write=False)

    @property
    def dim(self):
        return self.coords.size


def _check_pair(a, b):
    if a.c != b.c:
        raise MixedCurvature(f"curvatures differ: {a.c} vs {b.c}")
    if a.coords.size != b.coords.size:
        raise DimensionMismatch(f"dimensions differ: {a.coords.size} vs {b.coords.size}")


# array layer -----------------------------------------------------------------

def sq_norm(x, axis=-1, keepdims=False):
    return ad.sum(x * x, axis=axis, keepdims=keepdims)


def exp0(v, c):
    """Exponential map at the origin, rows along the last axis."""
    s = ad.sqrt(ad.maximum(sq_norm(v, keepdims=True), _TINY_SQ)) * np.sqrt(c)
    return (_capped_tanh(s) / s) * v


def _capped_tanh(s):
    # min(tanh(s), _TANH_MAX) with zero gradient on the cap
    t = ad.tanh(s)
    capped = np.asarray(ad.val(t)) >= _TANH_MAX
    if capped.any():
        t = ad.where(capped, _TANH_MAX, t)
    return t


def log0(u, c):
    """Logarithm map at the origin, rows along the last axis."""
    a = ad.sqrt(ad.maximum(sq_norm(u, keepdims=True), _TINY_SQ)) * np.sqrt(c)
    return (ad.atanh(a) / a) * u


def clip0(v, c, epsilon=DEFAULT_CLIP_EPSILON):
    """Rescale rows with ``||v|| >= 1/sqrt(c)`` to norm ``1/sqrt(c) - epsilon``."""
    radius = 1.0 / np.sqrt(c)
    norms = ad.sqrt(ad.maximum(sq_norm(v, keepdims=True), _TINY_SQ))
    outside = np.asarray(ad.val(norms)) >= radius
    n_rescaled = int(np.count_nonzero(outside))
    if n_rescaled == 0:
        return v * 1.0 if ad.is_node(v) else np.array(ad.val(v))
    ad.record_clip_rescales(n_rescaled)
    scale = (radius - epsilon) / norms
    return ad.where(outside, scale * v, v)


def to_klein(z, c):
    return 2.0 * z / (1.0 + c * sq_norm(z, keepdims=True))


def to_poincare(k, c):
    inner = ad.maximum(1.0 - c * sq_norm(k, keepdims=True), _TINY_SQ)
    return k / (1.0 + ad.sqrt(inner))


def lorentz_gamma(k, c):
    """Lorentz factor 1/sqrt(1 - c||z||^2), keepdims along the last axis."""
    return 1.0 / ad.sqrt(ad.maximum(1.0 - c * sq_norm(k, keepdims=True), _TINY_SQ))


def einstein_mid(k_rows, c):
    """Einstein midpoint of Klein rows, plain weighted average (tape-friendly)."""
    g = lorentz_gamma(k_rows, c)
    return ad.sum(g * k_rows, axis=0) / ad.sum(g)


def dist_rows(z1, z2, c):
    """Poincare distance between paired rows of two (m, d) arrays."""
    dots = ad.sum(z1 * z2, axis=-1)
    n1 = sq_norm(z1)
    n2 = sq_norm(z2)
    a = 1.0 - 2.0 * c * dots + c * n2
    b = 1.0 - c * n1
    if ad.is_node(z1) or ad.is_node(z2):
        num = ad.reshape(b, b.shape + (1,)) * z2 - ad.reshape(a, a.shape + (1,)) * z1
    else:
        num = np.expand_dims(b, -1) * z2 - np.expand_dims(a, -1) * z1
    # den = (1 - c n1)(1 - c n2) + c ||z1 - z2||^2 > 0 inside the ball; the
    # floor guards boundary-saturated inputs (atanh then clamps, so the
    # distance stays finite and its gradient is zero there)
    den = ad.maximum(1.0 - 2.0 * c * dots + (c * c) * n1 * n2, _TINY_SQ)
    m = ad.sqrt(ad.maximum(sq_norm(num), _TINY_SQ)) / den
    return (2.0 / np.sqrt(c)) * ad.atanh(np.sqrt(c) * m)


# typed layer ------------------------------------------------------------------

def poincare_distance(a: PoincarePoint, b: PoincarePoint) -> float:
    """Geodesic distance on the Poincare ball; symmetric, zero iff a == b."""
    _check_pair(a, b)
    if np.array_equal(a.coords, b.coords):
        return 0.0
    return float(dist_rows(a.coords[None, :], b.coords[None, :], a.c)[0])


def exp_map_origin(v, c: float = 1.0) -> PoincarePoint:
    """Map a tangent vector at the origin onto the ball; 0 maps to the origin."""
    c = _check_curvature(c)
    v = _as_vector(v)
    return PoincarePoint(exp0(v, c), c)


def log_map_origin(u: PoincarePoint) -> np.ndarray:
    """Inverse of :func:`exp_map_origin`; the origin maps to the zero vector."""
    return np.asarray(log0(u.coords, u.c))


def clip_to_ball(v, c: float = 1.0, epsilon: float = DEFAULT_CLIP_EPSILON) -> PoincarePoint:
    """Identity below the ball radius, rescale to ``1/sqrt(c) - epsilon`` otherwise."""
    c = _check_curvature(c)
    if not (0.0 < epsilon < 1.0 / np.sqrt(c)):
        raise ValueError("epsilon must lie in (0, 1/sqrt(c))")
    v = _as_vector(v)
    return PoincarePoint(clip0(v, c, epsilon), c)


def poincare_to_klein(z: PoincarePoint) -> KleinPoint:
    return KleinPoint(to_klein(z.coords, z.c), z.c)


def klein_to_poincare(z: KleinPoint) -> PoincarePoint:
    return PoincarePoint(to_poincare(z.coords, z.c), z.c)


def einstein_midpoint(points) -> KleinPoint:
    """Lorentz-factor weighted average of Klein points.

    Sums in input order with compensated (Kahan) accumulation, so the result
    is deterministic for a given ordering; permutation invariance holds to
    1e-12, not bit-exactly.
    """
    points = list(points)
    if not points:
        raise EmptyInput("einstein_midpoint needs at least one point")
    first = points[0]
    for p in points[1:]:
        _check_pair(first, p)
    c = first.c
    num = np.zeros(first.dim)
    num_comp = np.zeros(first.dim)
    den = 0.0
    den_comp = 0.0
    for p in points:
        g = float(lorentz_gamma(p.coords[None, :], c)[0, 0])
        term = g * p.coords
        y = term - num_comp
        t = num + y
        num_comp = (t - num) - y
        num = t
        y = g - den_comp
        t = den + y
        den_comp = (t - den) - y
        den = t
    return KleinPoint(num / den, c)


def hyp_ave_poincare(points) -> PoincarePoint:
    """Poincare prototype: convert to Klein, Einstein midpoint, convert back."""
    mid = einstein_midpoint([poincare_to_klein(p) for p in points])
    return klein_to_poincare(mid)
