"""Affine special case and the similarity/affine/projective classifier.

An affine homography has a kernel with ``b_K = v_K = 0``. That kernel is
``diag(da+1, 1, da+1)`` plus the ``u`` shear, which up to scale is
``[[1, g, 0], [0, h, 0], [0, 0, 1]]`` with ``g = u / (da+1)`` and ``h = 1 / (da+1)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateAffine, DegenerateAffineKernel, NumericalFailure, SchemaError
from .geometry import EPS_SINGULAR, Homography3, SquareConfig
from .kernel import KernelParams
from .similarity import SimilarityParams, similarity_matrix

DEFAULT_THRESH = 0.01
CLOSED_FORM_TOL = 1e-12


class TransformClass(str, enum.Enum):
    SIMILARITY = "similarity"
    AFFINE = "affine"
    PROJECTIVE = "projective"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class AffineParams:
    delta_a: float = 0.0
    b: float = 0.0
    c: float = 0.0
    delta_d: float = 0.0
    u: float = 0.0
    v: float = 0.0

    def __post_init__(self):
        for name in ("delta_a", "b", "c", "delta_d", "u", "v"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if abs((self.delta_a + 1.0) * (self.delta_d + 1.0) - self.b * self.c) <= EPS_SINGULAR:
            raise DegenerateAffine("affine linear part is singular")

    def as_array(self) -> np.ndarray:
        return np.array([self.delta_a, self.b, self.c, self.delta_d, self.u, self.v])


@dataclass(frozen=True)
class AffineKernelParams:
    g: float = 0.0
    h: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "g", float(self.g))
        object.__setattr__(self, "h", float(self.h))
        if abs(self.h) <= EPS_SINGULAR:
            raise DegenerateAffineKernel("h_K must be nonzero")

    @classmethod
    def from_kernel(cls, k: KernelParams, tol: float = 1e-9) -> "AffineKernelParams":
        if max(abs(k.b), abs(k.v)) > tol:
            raise DegenerateAffineKernel("kernel has projective components (b_K, v_K nonzero)")
        a = k.delta_a + 1.0
        return cls(k.u / a, 1.0 / a)

    def to_kernel(self) -> KernelParams:
        return KernelParams(delta_a=1.0 / self.h - 1.0, u=self.g / self.h)


def affine_matrix(p: AffineParams) -> np.ndarray:
    return np.array(
        [[p.delta_a + 1.0, p.b, p.u], [p.c, p.delta_d + 1.0, p.v], [0.0, 0.0, 1.0]]
    )


def affine_to_matrix(p: AffineParams) -> Homography3:
    return Homography3(affine_matrix(p))


def matrix_to_affine(h: Homography3, tol: float = 1e-9) -> AffineParams:
    m = h.m
    if max(abs(m[2, 0]), abs(m[2, 1]), abs(m[2, 2] - 1.0)) > tol:
        raise DegenerateAffine("matrix is not affine")
    return AffineParams(m[0, 0] - 1.0, m[0, 1], m[1, 0], m[1, 1] - 1.0, m[0, 2], m[1, 2])


def three_corner_matrix(r: float) -> np.ndarray:
    """6x6 map from ``(da, b, c, dd, u, v)`` to the offsets of ``M, N, P``.

    Offsets are ``source - transformed``; every translation entry is ``-1``.
    """
    return np.array(
        [
            [r, -r, 0.0, 0.0, -1.0, 0.0],
            [0.0, 0.0, r, -r, 0.0, -1.0],
            [-r, r, 0.0, 0.0, -1.0, 0.0],
            [0.0, 0.0, -r, r, 0.0, -1.0],
            [-r, -r, 0.0, 0.0, -1.0, 0.0],
            [0.0, 0.0, -r, -r, 0.0, -1.0],
        ]
    )


def affine_params_to_three_offsets(p: AffineParams, r: float) -> np.ndarray:
    """``(dx_M, dy_M, dx_N, dy_N, dx_P, dy_P)``."""
    if not r > 0:
        raise SchemaError("r must be positive")
    return three_corner_matrix(r) @ p.as_array()


def three_offsets_to_affine_params(offsets, r: float) -> AffineParams:
    if not r > 0:
        raise SchemaError("r must be positive")
    dxm, dym, dxn, dyn, dxp, dyp = (float(v) for v in offsets)
    return AffineParams(
        delta_a=(dxm - dxp) / (2.0 * r),
        b=(dxn - dxp) / (2.0 * r),
        c=(dym - dyp) / (2.0 * r),
        delta_d=(dyn - dyp) / (2.0 * r),
        u=-0.5 * (dxm + dxn),
        v=-0.5 * (dym + dyn),
    )


def affine_kernel_matrix(k: AffineKernelParams) -> np.ndarray:
    return np.array([[1.0, k.g, 0.0], [0.0, k.h, 0.0], [0.0, 0.0, 1.0]])


def affine_kernel_to_matrix(k: AffineKernelParams) -> Homography3:
    return Homography3(affine_kernel_matrix(k))


def affine_product(sim: SimilarityParams, k: AffineKernelParams, r: float) -> np.ndarray:
    """Centred affine ``H_S @ R @ K_aff @ R^-1`` with ``R = [[r, r], [-r, r]]``."""
    rot = np.array([[r, r, 0.0], [-r, r, 0.0], [0.0, 0.0, 1.0]])
    s = 0.5 / r
    rot_inv = np.array([[s, -s, 0.0], [s, s, 0.0], [0.0, 0.0, 1.0]])
    return similarity_matrix(sim) @ rot @ affine_kernel_matrix(k) @ rot_inv


def affine_closed_form(sim: SimilarityParams, k: AffineKernelParams) -> AffineParams:
    """Affine parameters of the centred product; independent of ``r``."""
    a, bs, g, h = sim.delta_a + 1.0, sim.b, k.g, k.h
    return AffineParams(
        delta_a=(a * (g + h + 1.0) + bs * (g - h + 1.0)) / 2.0 - 1.0,
        b=(a * (g + h - 1.0) + bs * (g - h - 1.0)) / 2.0,
        c=(a * (h - g - 1.0) + bs * (g + h + 1.0)) / 2.0,
        delta_d=(a * (h - g + 1.0) + bs * (g + h - 1.0)) / 2.0 - 1.0,
        u=sim.u,
        v=sim.v,
    )


def compose_affine_sks(sim: SimilarityParams, k: AffineKernelParams, cfg: SquareConfig) -> Homography3:
    """Full-image affine from a similarity and a 2-DOF affine kernel.

    The centred matrix is computed twice, once as a product and once from the
    closed-form elements; disagreement beyond 1e-12 raises ``NumericalFailure``.
    """
    prod = affine_product(sim, k, cfg.r)
    closed = affine_matrix(affine_closed_form(sim, k))
    gap = float(np.max(np.abs(prod - closed)))
    if gap > CLOSED_FORM_TOL:
        raise NumericalFailure(f"closed-form affine disagrees with the product by {gap:.3e}")
    ox, oy = cfg.center.x, cfg.center.y
    t = np.array([[1.0, 0.0, -ox], [0.0, 1.0, -oy], [0.0, 0.0, 1.0]])
    t_inv = np.array([[1.0, 0.0, ox], [0.0, 1.0, oy], [0.0, 0.0, 1.0]])
    return Homography3(t_inv @ closed @ t)


def classify(
    k: KernelParams, thresh1: float = DEFAULT_THRESH, thresh2: float = DEFAULT_THRESH
) -> TransformClass:
    """Similarity if all four kernel parameters are below ``thresh2`` in magnitude,
    else affine if ``|b_K|`` and ``|v_K|`` are below ``thresh1``, else projective."""
    if not (thresh1 > 0 and thresh2 > 0):
        raise SchemaError("thresholds must be positive")
    if max(abs(k.b), abs(k.v), abs(k.delta_a), abs(k.u)) < thresh2:
        return TransformClass.SIMILARITY
    if max(abs(k.b), abs(k.v)) < thresh1:
        return TransformClass.AFFINE
    return TransformClass.PROJECTIVE
