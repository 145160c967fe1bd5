"""
Lorentzian linear algebra in L^3.

All functions accept an ``LVector3`` or anything ``numpy.asarray`` turns into a
float array whose last axis has length 3; inner products and vector products
broadcast over leading axes so that grid code can call them on whole arrays.
"""

from typing import Union, Sequence

import numpy as np

from app.core.errors import CausalClassError, NonFiniteError
from app.schema.vector import CausalClass, LVector3

VectorLike = Union[LVector3, Sequence[float], np.ndarray]

_SIGNATURE = np.array([1.0, 1.0, -1.0])


def as_array(v: VectorLike) -> np.ndarray:
    if isinstance(v, LVector3):
        return v.to_array()
    a = np.asarray(v, dtype=float)
    if a.shape[-1:] != (3,):
        raise ValueError(f"expected a vector with 3 components, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NonFiniteError("vector components must be finite")
    return a


def minkowski_inner(a: VectorLike, b: VectorLike):
    """<a, b> = a1 b1 + a2 b2 - a3 b3."""
    a, b = as_array(a), as_array(b)
    return np.sum(a * b * _SIGNATURE, axis=-1)


def lorentz_norm(v: VectorLike):
    """|v| = |<v, v>|^(1/2)."""
    return np.sqrt(np.abs(minkowski_inner(v, v)))


def causal_class(v: VectorLike) -> CausalClass:
    v = as_array(v)
    q = float(minkowski_inner(v, v))
    if q > 0 or not np.any(v):
        return CausalClass.SPACELIKE
    if q < 0:
        return CausalClass.TIMELIKE
    return CausalClass.LIGHTLIKE


def lorentz_cross(a: VectorLike, b: VectorLike) -> np.ndarray:
    """The vector a ^ b with <a ^ b, w> = det(a, b, w) for every w."""
    c = np.cross(as_array(a), as_array(b))
    return c * _SIGNATURE


def is_future_directed(v: VectorLike) -> bool:
    v = as_array(v)
    if causal_class(v) == CausalClass.SPACELIKE:
        raise CausalClassError("time orientation is only defined for causal vectors")
    return bool(v[2] > 0)


def _require_future_timelike(v: np.ndarray, name: str) -> None:
    if causal_class(v) != CausalClass.TIMELIKE or v[2] <= 0:
        raise CausalClassError(f"{name} must be a future-directed timelike vector")


def timelike_angle(a: VectorLike, b: VectorLike) -> float:
    """
    Lorentzian timelike angle between two future-directed timelike vectors.

    For such vectors <a, b> <= -|a||b|, so the absolute value is used:
    cosh(beta) = |<a, b>| / (|a| |b|).

    Raises:
        CausalClassError: If either vector is not future-directed timelike.
    """
    a, b = as_array(a), as_array(b)
    _require_future_timelike(a, "a")
    _require_future_timelike(b, "b")
    ratio = abs(float(minkowski_inner(a, b))) / float(lorentz_norm(a) * lorentz_norm(b))
    return float(np.arccosh(max(ratio, 1.0)))


def mixed_angle(s: VectorLike, t: VectorLike) -> float:
    """
    Lorentzian angle between a spacelike vector ``s`` and a future-directed
    timelike vector ``t``: sinh(beta) = |<s, t>| / (|s| |t|).

    Raises:
        CausalClassError: If ``s`` is zero or not spacelike, or ``t`` is not
            future-directed timelike.
    """
    s, t = as_array(s), as_array(t)
    if not np.any(s) or causal_class(s) != CausalClass.SPACELIKE:
        raise CausalClassError("s must be a nonzero spacelike vector")
    _require_future_timelike(t, "t")
    ratio = abs(float(minkowski_inner(s, t))) / float(lorentz_norm(s) * lorentz_norm(t))
    return float(np.arcsinh(ratio))


def unit(v: VectorLike) -> np.ndarray:
    """Normalize a spacelike or timelike vector to |<v, v>| = 1."""
    v = as_array(v)
    n = lorentz_norm(v)
    if np.any(n == 0):
        raise CausalClassError("cannot normalize a lightlike or zero vector")
    return v / np.expand_dims(n, -1)


def future(v: VectorLike) -> np.ndarray:
    """Flip a causal vector (or each vector of an array) to be future-directed."""
    v = as_array(v)
    sign = np.where(v[..., 2] < 0, -1.0, 1.0)
    return v * np.expand_dims(sign, -1)
