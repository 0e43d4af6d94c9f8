"""The 4-DOF kernel transformation and its angular-offset reading.

``H_K = [[da+1, u, b], [0, 1, 0], [b, v, da+1]]`` fixes the canonical points
``M3 = (-1, 0)`` and ``N3 = (1, 0)`` and moves ``P3 = (0, 1)``, ``Q3 = (0, -1)``.
The four cotangents of the angles the moved points make with the ``M2 N2``
baseline are affine in the parameters:

    theta  at M2 toward P2      dcot = da + b + u + v
    alpha  at N2 toward P2      dcot = da - b - u + v
    beta   at M2 toward Q2      dcot = da + b - u - v
    gamma  at N2 toward Q2      dcot = da - b + u - v

Each ``dcot`` is the deviation from ``cot 45 deg = 1``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateKernel, NotAKernel, SchemaError
from .geometry import EPS_SINGULAR, Homography3, Point2

KERNEL_TOL = 1e-8
DENOM_EPS = 1e-9

# rows: theta, alpha, beta, gamma; columns: da, b, u, v
ANGULAR_MAP = np.array(
    [
        [1.0, 1.0, 1.0, 1.0],
        [1.0, -1.0, -1.0, 1.0],
        [1.0, 1.0, -1.0, -1.0],
        [1.0, -1.0, 1.0, -1.0],
    ]
)
# orthogonal rows of norm 2
ANGULAR_MAP_INV = ANGULAR_MAP.T / 4.0


@dataclass(frozen=True)
class KernelParams:
    delta_a: float = 0.0
    b: float = 0.0
    u: float = 0.0
    v: float = 0.0

    def __post_init__(self):
        for name in ("delta_a", "b", "u", "v"):
            object.__setattr__(self, name, float(getattr(self, name)))
        a = self.delta_a + 1.0
        if abs(a + self.v) <= DENOM_EPS or abs(a - self.v) <= DENOM_EPS:
            raise DegenerateKernel(
                f"canonical point maps to infinity (da+1+v={a + self.v:.3e}, da+1-v={a - self.v:.3e})"
            )
        if abs(a * a - self.b * self.b) <= EPS_SINGULAR:
            raise DegenerateKernel("kernel matrix is singular")

    def as_array(self) -> np.ndarray:
        return np.array([self.delta_a, self.b, self.u, self.v])

    def to_json(self) -> dict:
        return {"dak": self.delta_a, "bk": self.b, "uk": self.u, "vk": self.v}

    @classmethod
    def from_json(cls, data) -> "KernelParams":
        try:
            return cls(data["dak"], data["bk"], data["uk"], data["vk"])
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad kernel params {data!r}: {exc}") from None


@dataclass(frozen=True)
class AngularOffsets:
    d_theta: float
    d_alpha: float
    d_beta: float
    d_gamma: float

    def as_array(self) -> np.ndarray:
        return np.array([self.d_theta, self.d_alpha, self.d_beta, self.d_gamma])

    def to_json(self) -> list[float]:
        return [float(v) for v in self.as_array()]

    @classmethod
    def from_json(cls, data) -> "AngularOffsets":
        if not isinstance(data, (list, tuple)) or len(data) != 4:
            raise SchemaError("angular offsets must be an array of 4 numbers")
        return cls(*(float(v) for v in data))


def kernel_matrix(k: KernelParams) -> np.ndarray:
    a = k.delta_a + 1.0
    return np.array([[a, k.u, k.b], [0.0, 1.0, 0.0], [k.b, k.v, a]])


def kernel_to_matrix(k: KernelParams) -> Homography3:
    return Homography3(kernel_matrix(k))


def kernel_from_array(m: np.ndarray, tol: float = KERNEL_TOL) -> KernelParams:
    """Read kernel parameters from any scalar multiple of a kernel matrix."""
    m = np.asarray(m, dtype=float)
    if abs(m[1, 1]) <= EPS_SINGULAR * np.linalg.norm(m):
        raise NotAKernel("middle entry vanishes; cannot fix the kernel scale", float("inf"))
    m = m / m[1, 1]
    residual = max(
        abs(m[1, 0]),
        abs(m[1, 2]),
        abs(m[0, 0] - m[2, 2]),
        abs(m[0, 2] - m[2, 0]),
    )
    if not residual <= tol:
        raise NotAKernel(f"matrix deviates from the kernel pattern by {residual:.3e}", residual)
    return KernelParams(
        delta_a=0.5 * (m[0, 0] + m[2, 2]) - 1.0,
        b=0.5 * (m[0, 2] + m[2, 0]),
        u=m[0, 1],
        v=m[2, 1],
    )


def matrix_to_kernel(h: Homography3) -> KernelParams:
    return kernel_from_array(h.m)


def kernel_canonical_images(k: KernelParams) -> tuple[Point2, Point2]:
    """Images ``(P2, Q2)`` of the canonical points ``(0, 1)`` and ``(0, -1)``."""
    dp = k.delta_a + k.v + 1.0
    dq = k.delta_a - k.v + 1.0
    if abs(dp) <= DENOM_EPS or abs(dq) <= DENOM_EPS:
        raise DegenerateKernel("canonical point maps to infinity")
    return Point2((k.b + k.u) / dp, 1.0 / dp), Point2((k.b - k.u) / dq, -1.0 / dq)


def kernel_to_angular_offsets(k: KernelParams) -> AngularOffsets:
    return AngularOffsets(*(ANGULAR_MAP @ k.as_array()))


def angular_offsets_to_kernel(a: AngularOffsets) -> KernelParams:
    return KernelParams(*(ANGULAR_MAP_INV @ a.as_array()))


def cot_theta(k: KernelParams) -> float:
    """Cotangent of the angle at ``M2`` between ``M2 N2`` and ``M2 P2``."""
    p2, _ = kernel_canonical_images(k)
    if abs(p2.y) <= DENOM_EPS:
        raise DegenerateKernel("P2 lies on the baseline")
    return (p2.x + 1.0) / p2.y
