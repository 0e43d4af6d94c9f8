"""Points, 3x3 homographies and the square the parameterization is anchored to.

Points are column vectors and a homography acts on the left, ``x' ~ H @ [x, y, 1]``.
Every ``Homography3`` is stored in a canonical scale so that two matrices that
are equal up to scale compare equal entry by entry.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DegenerateQuad,
    PointAtInfinity,
    SchemaError,
    SingularMatrix,
)

EPS_SINGULAR = 1e-12
EPS_COMPARE = 1e-9


@dataclass(frozen=True)
class Point2:
    x: float
    y: float

    def __post_init__(self):
        x, y = float(self.x), float(self.y)
        if not (math.isfinite(x) and math.isfinite(y)):
            raise ValueError(f"Point2 must be finite, got ({x}, {y})")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def __iter__(self):
        yield self.x
        yield self.y

    def __sub__(self, other: "Point2") -> np.ndarray:
        return np.array([self.x - other.x, self.y - other.y])

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y])


def canonicalize(m) -> np.ndarray:
    """Return the canonical representative of ``m`` up to scale.

    ``m[2, 2] = 1`` whenever ``|m[2, 2]| >= EPS_SINGULAR * ||m||_F``; otherwise the
    matrix is scaled to unit Frobenius norm with its first significant entry
    (reading order) made positive.
    """
    m = np.array(m, dtype=float)
    if m.shape != (3, 3):
        raise SchemaError(f"expected a 3x3 matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise SchemaError("matrix contains non-finite entries")
    fro = np.linalg.norm(m)
    if fro == 0.0:
        raise SingularMatrix("zero matrix is not a homography")
    if abs(m[2, 2]) >= EPS_SINGULAR * fro:
        return m / m[2, 2]
    m = m / fro
    flat = m.ravel()
    first = flat[np.flatnonzero(np.abs(flat) > EPS_SINGULAR)[0]]
    return m if first > 0 else -m


class Homography3:
    """Invertible 3x3 projective transformation in canonical scale.

    The underlying array is read-only; instances are safe to share.
    """

    __slots__ = ("m",)

    def __init__(self, m):
        arr = canonicalize(m)
        if abs(np.linalg.det(arr)) <= EPS_SINGULAR:
            raise SingularMatrix(f"homography is singular (det={np.linalg.det(arr):.3e})")
        arr.setflags(write=False)
        object.__setattr__(self, "m", arr)

    def __setattr__(self, name, value):
        raise AttributeError("Homography3 is immutable")

    @classmethod
    def identity(cls) -> "Homography3":
        return cls(np.eye(3))

    @classmethod
    def translation(cls, tx: float, ty: float) -> "Homography3":
        return cls([[1.0, 0.0, tx], [0.0, 1.0, ty], [0.0, 0.0, 1.0]])

    def __matmul__(self, other: "Homography3") -> "Homography3":
        return compose(self, other)

    def __eq__(self, other):
        if not isinstance(other, Homography3):
            return NotImplemented
        return bool(np.array_equal(self.m, other.m))

    def __hash__(self):
        return hash(self.m.tobytes())

    def __repr__(self):
        rows = ", ".join("[" + ", ".join(f"{v:.6g}" for v in row) + "]" for row in self.m)
        return f"Homography3([{rows}])"

    def to_json(self) -> list[float]:
        return [float(v) for v in self.m.ravel()]

    @classmethod
    def from_json(cls, data) -> "Homography3":
        if not isinstance(data, (list, tuple)) or len(data) != 9:
            raise SchemaError("homography JSON must be an array of 9 numbers")
        try:
            values = [float(v) for v in data]
        except (TypeError, ValueError) as exc:
            raise SchemaError(f"homography JSON has a non-numeric entry: {exc}") from None
        return cls(np.reshape(values, (3, 3)))


def apply(h: Homography3, p: Point2) -> Point2:
    x, y, w = h.m @ np.array([p.x, p.y, 1.0])
    if abs(w) < EPS_SINGULAR:
        raise PointAtInfinity(f"({p.x}, {p.y}) maps to the line at infinity")
    return Point2(x / w, y / w)


def apply_many(h: Homography3 | np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Vectorised ``apply`` over an ``(n, 2)`` array.

    Rows that land at infinity come back as ``inf`` instead of raising, which is
    what a consensus loop wants.
    """
    m = h.m if isinstance(h, Homography3) else np.asarray(h, dtype=float)
    pts = np.asarray(pts, dtype=float).reshape(-1, 2)
    hom = pts @ m[:, :2].T + m[:, 2]
    w = hom[:, 2:3]
    out = np.full((len(pts), 2), np.inf)
    ok = np.abs(w[:, 0]) >= EPS_SINGULAR
    out[ok] = hom[ok, :2] / w[ok]
    return out


def compose(a: Homography3, b: Homography3) -> Homography3:
    """``a`` after ``b``."""
    return Homography3(a.m @ b.m)


def invert(h: Homography3) -> Homography3:
    try:
        inv = np.linalg.inv(h.m)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrix(str(exc)) from None
    return Homography3(inv)


def projective_distance(a: Homography3, b: Homography3) -> float:
    """Frobenius distance between canonical representatives; zero iff equal up to scale."""
    return float(np.linalg.norm(a.m - b.m))


@dataclass(frozen=True)
class SquareConfig:
    """Axis-aligned square with center ``O`` and half side ``r``.

    Corner labels are fixed: ``M = O + (-r, r)``, ``N = O + (r, -r)``,
    ``P = O + (r, r)``, ``Q = O + (-r, -r)``. ``M``/``N`` and ``P``/``Q`` are the
    two diagonals.
    """

    center: Point2
    half_side: float

    def __post_init__(self):
        r = float(self.half_side)
        if not (math.isfinite(r) and r > 0):
            raise SchemaError(f"half_side must be positive, got {self.half_side}")
        object.__setattr__(self, "half_side", r)

    @classmethod
    def for_image(cls, size: float) -> "SquareConfig":
        """The square spanning a full ``size x size`` frame."""
        return cls(Point2(size / 2.0, size / 2.0), size / 2.0)

    @property
    def r(self) -> float:
        return self.half_side

    def _corner(self, sx: float, sy: float) -> Point2:
        return Point2(self.center.x + sx * self.half_side, self.center.y + sy * self.half_side)

    @property
    def m(self) -> Point2:
        return self._corner(-1, 1)

    @property
    def n(self) -> Point2:
        return self._corner(1, -1)

    @property
    def p(self) -> Point2:
        return self._corner(1, 1)

    @property
    def q(self) -> Point2:
        return self._corner(-1, -1)

    def corners(self) -> tuple[Point2, Point2, Point2, Point2]:
        """Corners in ``(M, N, P, Q)`` order."""
        return (self.m, self.n, self.p, self.q)

    def corner_array(self) -> np.ndarray:
        return np.array([tuple(c) for c in self.corners()])

    def to_json(self) -> dict:
        return {"cx": self.center.x, "cy": self.center.y, "r": self.half_side}

    @classmethod
    def from_json(cls, data) -> "SquareConfig":
        try:
            return cls(Point2(data["cx"], data["cy"]), data["r"])
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad square config {data!r}: {exc}") from None


@dataclass(frozen=True)
class CorrespondenceSet:
    pairs: tuple[tuple[Point2, Point2], ...]

    def __post_init__(self):
        pairs = tuple((Point2(*s), Point2(*t)) for s, t in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        src = self.src
        for i in range(len(src)):
            d = np.hypot(*(src[i + 1 :] - src[i]).T)
            if np.any(d <= EPS_COMPARE):
                raise DegenerateQuad(f"source point {i} coincides with another source point")

    def __len__(self):
        return len(self.pairs)

    @property
    def src(self) -> np.ndarray:
        return np.array([tuple(s) for s, _ in self.pairs]).reshape(-1, 2)

    @property
    def dst(self) -> np.ndarray:
        return np.array([tuple(t) for _, t in self.pairs]).reshape(-1, 2)

    @classmethod
    def from_arrays(cls, src: np.ndarray, dst: np.ndarray) -> "CorrespondenceSet":
        src = np.asarray(src, dtype=float).reshape(-1, 2)
        dst = np.asarray(dst, dtype=float).reshape(-1, 2)
        if src.shape != dst.shape:
            raise SchemaError("source and target arrays differ in shape")
        return cls(tuple((Point2(*s), Point2(*t)) for s, t in zip(src, dst)))

    def subset(self, idx: Iterable[int]) -> "CorrespondenceSet":
        return CorrespondenceSet(tuple(self.pairs[i] for i in idx))

    def to_json(self) -> list[list[float]]:
        return [[s.x, s.y, t.x, t.y] for s, t in self.pairs]

    @classmethod
    def from_json(cls, data: Sequence) -> "CorrespondenceSet":
        if not isinstance(data, list):
            raise SchemaError("correspondences must be a JSON array of [sx, sy, tx, ty]")
        quads = []
        for i, row in enumerate(data):
            if not isinstance(row, (list, tuple)) or len(row) != 4:
                raise SchemaError(f"correspondence {i} is not a [sx, sy, tx, ty] quadruple")
            try:
                quads.append([float(v) for v in row])
            except (TypeError, ValueError):
                raise SchemaError(f"correspondence {i} has a non-numeric entry") from None
        arr = np.array(quads, dtype=float).reshape(-1, 4)
        if not np.all(np.isfinite(arr)):
            raise SchemaError("correspondences contain non-finite values")
        return cls.from_arrays(arr[:, :2], arr[:, 2:])

    @classmethod
    def load(cls, path) -> "CorrespondenceSet":
        with open(path, encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"{path}: invalid JSON ({exc})") from None
        return cls.from_json(data)


def triangle_area(a, b, c) -> float:
    """Signed area of triangle ``abc``."""
    return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))


def has_collinear_triple(pts: np.ndarray, tol: float = EPS_COMPARE) -> bool:
    pts = np.asarray(pts, dtype=float)
    n = len(pts)
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                if abs(triangle_area(pts[i], pts[j], pts[k])) <= tol:
                    return True
    return False


def is_convex_quad(pts: np.ndarray) -> bool:
    """True for a strictly convex, non-self-intersecting quadrilateral given in cyclic order."""
    pts = np.asarray(pts, dtype=float)
    signs = []
    for i in range(4):
        a, b, c = pts[i], pts[(i + 1) % 4], pts[(i + 2) % 4]
        signs.append(triangle_area(a, b, c))
    signs = np.array(signs)
    return bool(np.all(signs > 0) or np.all(signs < 0))
