"""Four-parameter similarity in the square-centred frame.

``H_S = [[da+1, -b, u], [b, da+1, v], [0, 0, 1]]`` acts between frames whose
origin is the square centre. ``translation_normalizer`` provides the shift into
that frame, and ``lift_similarity`` conjugates ``H_S`` back to image
coordinates. Positional offsets follow ``delta = source - transformed``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegeneratePointPair, DegenerateSimilarity, NotASimilarity, SchemaError
from .geometry import EPS_COMPARE, Homography3, Point2, SquareConfig

SIMILARITY_TOL = 1e-9


@dataclass(frozen=True)
class SimilarityParams:
    delta_a: float = 0.0
    b: float = 0.0
    u: float = 0.0
    v: float = 0.0

    def __post_init__(self):
        for name in ("delta_a", "b", "u", "v"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if (self.delta_a + 1.0) ** 2 + self.b**2 <= 1e-18:
            raise DegenerateSimilarity("similarity has zero scale")

    @property
    def scale(self) -> float:
        return math.hypot(self.delta_a + 1.0, self.b)

    @property
    def angle(self) -> float:
        """Rotation angle in radians."""
        return math.atan2(self.b, self.delta_a + 1.0)

    def as_array(self) -> np.ndarray:
        return np.array([self.delta_a, self.b, self.u, self.v])

    def to_json(self) -> dict:
        return {"da": self.delta_a, "b": self.b, "u": self.u, "v": self.v}

    @classmethod
    def from_json(cls, data) -> "SimilarityParams":
        try:
            return cls(data["da"], data["b"], data["u"], data["v"])
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad similarity params {data!r}: {exc}") from None


@dataclass(frozen=True)
class PositionalOffsets2:
    dx_m: float
    dy_m: float
    dx_n: float
    dy_n: float

    def as_array(self) -> np.ndarray:
        return np.array([self.dx_m, self.dy_m, self.dx_n, self.dy_n])


def translation_normalizer(cfg: SquareConfig) -> Homography3:
    return Homography3.translation(-cfg.center.x, -cfg.center.y)


def similarity_matrix(p: SimilarityParams) -> np.ndarray:
    a = p.delta_a + 1.0
    return np.array([[a, -p.b, p.u], [p.b, a, p.v], [0.0, 0.0, 1.0]])


def similarity_to_matrix(p: SimilarityParams) -> Homography3:
    return Homography3(similarity_matrix(p))


def _similarity_from_array(m: np.ndarray, tol: float = SIMILARITY_TOL) -> SimilarityParams:
    m = m / m[2, 2] if m[2, 2] != 0 else m
    residual = max(abs(m[2, 0]), abs(m[2, 1]), abs(m[0, 0] - m[1, 1]), abs(m[0, 1] + m[1, 0]))
    if not residual <= tol:
        raise NotASimilarity(f"matrix deviates from the similarity pattern by {residual:.3e}")
    a = 0.5 * (m[0, 0] + m[1, 1])
    return SimilarityParams(a - 1.0, 0.5 * (m[1, 0] - m[0, 1]), m[0, 2], m[1, 2])


def matrix_to_similarity(h: Homography3) -> SimilarityParams:
    return _similarity_from_array(h.m)


def lift_similarity(p: SimilarityParams, cfg: SquareConfig) -> Homography3:
    """Similarity in image coordinates, ``H_T^-1 @ H_S @ H_T``."""
    ox, oy = cfg.center.x, cfg.center.y
    t = np.array([[1.0, 0.0, -ox], [0.0, 1.0, -oy], [0.0, 0.0, 1.0]])
    t_inv = np.array([[1.0, 0.0, ox], [0.0, 1.0, oy], [0.0, 0.0, 1.0]])
    return Homography3(t_inv @ similarity_matrix(p) @ t)


def params_to_offsets(p: SimilarityParams, r: float) -> PositionalOffsets2:
    if not r > 0:
        raise SchemaError("r must be positive")
    da, b, u, v = p.delta_a, p.b, p.u, p.v
    return PositionalOffsets2(
        dx_m=r * da + r * b - u,
        dy_m=-r * da + r * b - v,
        dx_n=-r * da - r * b - u,
        dy_n=r * da - r * b - v,
    )


def offsets_to_params(o: PositionalOffsets2, r: float) -> SimilarityParams:
    """Inverse of ``params_to_offsets``."""
    if not r > 0:
        raise SchemaError("r must be positive")
    ddx = o.dx_m - o.dx_n
    ddy = o.dy_m - o.dy_n
    return SimilarityParams(
        delta_a=(ddx - ddy) / (4.0 * r),
        b=(ddx + ddy) / (4.0 * r),
        u=-0.5 * (o.dx_m + o.dx_n),
        v=-0.5 * (o.dy_m + o.dy_n),
    )


def two_point_similarity_array(m_src, n_src, m_dst, n_dst) -> np.ndarray:
    """Orientation-preserving similarity taking ``m_src -> m_dst`` and ``n_src -> n_dst``.

    Works in the complex plane: ``z' = alpha * z + beta``.
    """
    zm, zn = complex(m_src[0], m_src[1]), complex(n_src[0], n_src[1])
    wm, wn = complex(m_dst[0], m_dst[1]), complex(n_dst[0], n_dst[1])
    dz = zn - zm
    if abs(dz) <= EPS_COMPARE:
        raise DegeneratePointPair("source points coincide")
    alpha = (wn - wm) / dz
    if abs(alpha) <= 1e-9:
        raise DegenerateSimilarity("target points coincide")
    beta = wm - alpha * zm
    return np.array(
        [
            [alpha.real, -alpha.imag, beta.real],
            [alpha.imag, alpha.real, beta.imag],
            [0.0, 0.0, 1.0],
        ]
    )


def solve_similarity_two_points(
    m_src: Point2, n_src: Point2, m_dst: Point2, n_dst: Point2
) -> Homography3:
    return Homography3(two_point_similarity_array(tuple(m_src), tuple(n_src), tuple(m_dst), tuple(n_dst)))


def similarity_inverse_array(s: np.ndarray) -> np.ndarray:
    """Closed-form inverse of ``[[a, -b, u], [b, a, v], [0, 0, 1]]``."""
    a, b, u, v = s[0, 0], s[1, 0], s[0, 2], s[1, 2]
    k = a * a + b * b
    ai, bi = a / k, -b / k
    return np.array(
        [
            [ai, -bi, -(ai * u - bi * v)],
            [bi, ai, -(bi * u + ai * v)],
            [0.0, 0.0, 1.0],
        ]
    )
