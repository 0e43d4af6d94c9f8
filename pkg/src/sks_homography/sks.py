"""Similarity-kernel-similarity chain and the 4-point solvers built around it.

The full homography for a square ``cfg`` is

    H = H_T^-1 @ H_S @ H_T @ H_S2^-1 @ H_K @ H_S2

with ``H_T`` the centring translation and ``H_S2`` the known similarity that
sends ``M, N`` to ``(-1, 0), (1, 0)`` and ``P, Q`` to ``(0, 1), (0, -1)``.
Building ``H`` from parameters is a fixed product of 3x3 matrices whose
inverses are all written in closed form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateQuad,
    GeometryError,
    NoConsensus,
    NotAKernel,
    NotASimilarity,
    NotDecomposable,
    NumericalFailure,
    PreconditionError,
    RankDeficient,
    SchemaError,
)
from .geometry import (
    EPS_COMPARE,
    EPS_SINGULAR,
    CorrespondenceSet,
    Homography3,
    SquareConfig,
    apply_many,
    has_collinear_triple,
)
from .kernel import KernelParams, kernel_from_array, kernel_matrix
from .similarity import (
    SimilarityParams,
    _similarity_from_array,
    params_to_offsets,
    similarity_inverse_array,
    similarity_matrix,
    two_point_similarity_array,
)

DECOMPOSE_TOL = 1e-6


@dataclass(frozen=True)
class HomographyParams8:
    sim: SimilarityParams = SimilarityParams()
    ker: KernelParams = KernelParams()

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.sim.as_array(), self.ker.as_array()])

    @classmethod
    def from_array(cls, values) -> "HomographyParams8":
        values = np.asarray(values, dtype=float)
        return cls(SimilarityParams(*values[:4]), KernelParams(*values[4:]))

    def to_json(self) -> dict:
        return {"sim": self.sim.to_json(), "ker": self.ker.to_json()}

    @classmethod
    def from_json(cls, data) -> "HomographyParams8":
        if not isinstance(data, dict) or "sim" not in data or "ker" not in data:
            raise SchemaError('params JSON must be an object with "sim" and "ker"')
        return cls(SimilarityParams.from_json(data["sim"]), KernelParams.from_json(data["ker"]))


@dataclass(frozen=True)
class PositionalOffsets4:
    dx_m: float
    dy_m: float
    dx_n: float
    dy_n: float
    dx_p: float
    dy_p: float
    dx_q: float
    dy_q: float

    def as_array(self) -> np.ndarray:
        return np.array(
            [self.dx_m, self.dy_m, self.dx_n, self.dy_n, self.dx_p, self.dy_p, self.dx_q, self.dy_q]
        )


def _translation(tx: float, ty: float) -> np.ndarray:
    return np.array([[1.0, 0.0, tx], [0.0, 1.0, ty], [0.0, 0.0, 1.0]])


def _scaled_rotation(r: float) -> np.ndarray:
    """Centred part of ``H_S2``: ``(1 / 2r) [[1, -1], [1, 1]]``."""
    s = 0.5 / r
    return np.array([[s, -s, 0.0], [s, s, 0.0], [0.0, 0.0, 1.0]])


def _scaled_rotation_inv(r: float) -> np.ndarray:
    return np.array([[r, r, 0.0], [-r, r, 0.0], [0.0, 0.0, 1.0]])


def canonical_normalizer(cfg: SquareConfig) -> Homography3:
    """``H_S2``: the square's corners to the canonical diamond."""
    return Homography3(_scaled_rotation(cfg.r) @ _translation(-cfg.center.x, -cfg.center.y))


def compose_array(p: HomographyParams8, cfg: SquareConfig) -> np.ndarray:
    ox, oy, r = cfg.center.x, cfg.center.y, cfg.r
    # H_T @ H_S2^-1 = H_T @ H_T^-1 @ Nsr^-1 collapses to Nsr^-1
    return (
        _translation(ox, oy)
        @ similarity_matrix(p.sim)
        @ _scaled_rotation_inv(r)
        @ kernel_matrix(p.ker)
        @ _scaled_rotation(r)
        @ _translation(-ox, -oy)
    )


def compose_sks(p: HomographyParams8, cfg: SquareConfig) -> Homography3:
    return Homography3(compose_array(p, cfg))


def decompose_sks(h: Homography3, cfg: SquareConfig) -> HomographyParams8:
    """Recover the eight parameters of ``h`` relative to ``cfg``.

    ``H_S1`` is the similarity fixed by the images of ``M`` and ``N``; the
    kernel is what is left, ``H_S2 @ H_S1^-1 @ h @ H_S2^-1``.
    """
    corners = cfg.corner_array()
    mn = apply_many(h, corners[:2])
    if not np.all(np.isfinite(mn)):
        raise NotDecomposable("M or N maps to infinity")
    if np.hypot(*(mn[1] - mn[0])) <= EPS_COMPARE:
        raise NotDecomposable("M and N map to the same point")

    s1 = two_point_similarity_array(corners[0], corners[1], mn[0], mn[1])
    ox, oy, r = cfg.center.x, cfg.center.y, cfg.r
    t, t_inv = _translation(-ox, -oy), _translation(ox, oy)
    try:
        sim = _similarity_from_array(t @ s1 @ t_inv)
    except NotASimilarity as exc:
        raise NotDecomposable(str(exc)) from None

    s2 = _scaled_rotation(r) @ t
    s2_inv = t_inv @ _scaled_rotation_inv(r)
    k = s2 @ similarity_inverse_array(s1) @ h.m @ s2_inv
    try:
        ker = kernel_from_array(k, tol=DECOMPOSE_TOL)
    except (NotAKernel, GeometryError) as exc:
        raise NotDecomposable(f"recovered kernel is invalid: {exc}") from None
    return HomographyParams8(sim, ker)


def pq_offsets_closed_form(p: HomographyParams8, cfg: SquareConfig) -> PositionalOffsets4:
    """Offsets of all four corners directly from the parameters.

    ``M``, ``N`` come from the linear similarity map; ``P``, ``Q`` are rational in
    the kernel parameters. Offsets are ``source - transformed`` and do not depend
    on the square's centre.
    """
    r = cfg.r
    mn = params_to_offsets(p.sim, r)
    a = p.sim.delta_a + 1.0
    bs, us, vs = p.sim.b, p.sim.u, p.sim.v
    k = p.ker
    dp = k.delta_a + 1.0 + k.v
    dq = k.delta_a + 1.0 - k.v
    # KernelParams already rejects vanishing denominators
    gp, gq = k.b + k.u, k.b - k.u
    dx_p = r - us - r * ((a + bs) * gp + (a - bs)) / dp
    dy_p = r - vs - r * ((bs - a) * gp + (a + bs)) / dp
    dx_q = -r - us - r * ((a + bs) * gq - (a - bs)) / dq
    dy_q = -r - vs - r * ((bs - a) * gq - (a + bs)) / dq
    return PositionalOffsets4(mn.dx_m, mn.dy_m, mn.dx_n, mn.dy_n, dx_p, dy_p, dx_q, dy_q)


_CANON_M = (-1.0, 0.0)
_CANON_N = (1.0, 0.0)


def _apply_arr(m: np.ndarray, pt) -> np.ndarray:
    x, y, w = m @ np.array([pt[0], pt[1], 1.0])
    return np.array([x / w, y / w])


def sks_four_point(c: CorrespondenceSet) -> Homography3:
    """Homography from exactly four correspondences as ``H_S2^-1 @ H_K @ H_S1``.

    Pairs 1 and 2 anchor the two similarities; pairs 3 and 4 determine the
    kernel ``[[a, u, b], [0, 1, 0], [b, v, a]]`` in closed form.
    """
    if len(c) != 4:
        raise PreconditionError(f"sks_four_point needs exactly 4 correspondences, got {len(c)}")
    src, dst = c.src, c.dst
    if has_collinear_triple(src) or has_collinear_triple(dst):
        raise DegenerateQuad("three of the four points are collinear")

    s1 = two_point_similarity_array(src[0], src[1], _CANON_M, _CANON_N)
    s2 = two_point_similarity_array(dst[0], dst[1], _CANON_M, _CANON_N)
    x3, y3 = _apply_arr(s1, src[2])
    x4, y4 = _apply_arr(s1, src[3])
    xp3, yp3 = _apply_arr(s2, dst[2])
    xp4, yp4 = _apply_arr(s2, dst[3])

    # y' = y / w with w = b x + v y + a, and x' w = a x + u y + b
    w3, w4 = y3 / yp3, y4 / yp4
    # eliminate u and v, leaving [[c, d], [d, c]] @ (a, b) = (e1, e2)
    cc = x3 * y4 - x4 * y3
    dd = y4 - y3
    e1 = xp3 * w3 * y4 - xp4 * w4 * y3
    e2 = w3 * y4 - w4 * y3
    det = cc * cc - dd * dd
    if abs(det) <= EPS_SINGULAR * max(cc * cc, dd * dd, 1.0):
        raise NumericalFailure("kernel system is singular")
    a = (cc * e1 - dd * e2) / det
    b = (cc * e2 - dd * e1) / det
    u = (xp3 * w3 - a * x3 - b) / y3
    v = (w3 - a - b * x3) / y3
    k = np.array([[a, u, b], [0.0, 1.0, 0.0], [b, v, a]])
    return Homography3(similarity_inverse_array(s2) @ k @ s1)


def _isotropic_normalizer(pts: np.ndarray) -> np.ndarray:
    centroid = pts.mean(axis=0)
    mean_dist = np.mean(np.hypot(*(pts - centroid).T))
    if mean_dist <= EPS_COMPARE:
        raise DegenerateQuad("points are coincident")
    s = np.sqrt(2.0) / mean_dist
    return np.array([[s, 0.0, -s * centroid[0]], [0.0, s, -s * centroid[1]], [0.0, 0.0, 1.0]])


def dlt_four_point(c: CorrespondenceSet) -> Homography3:
    """Normalized DLT: isotropic conditioning, then the 2n x 9 system via SVD."""
    n = len(c)
    if n < 4:
        raise PreconditionError(f"DLT needs at least 4 correspondences, got {n}")
    src, dst = c.src, c.dst
    if n == 4 and (has_collinear_triple(src) or has_collinear_triple(dst)):
        raise DegenerateQuad("three of the four points are collinear")
    ts, td = _isotropic_normalizer(src), _isotropic_normalizer(dst)
    xs = src @ ts[:2, :2].T + ts[:2, 2]
    xd = dst @ td[:2, :2].T + td[:2, 2]

    a = np.zeros((2 * n, 9))
    x, y = xs[:, 0], xs[:, 1]
    xp, yp = xd[:, 0], xd[:, 1]
    a[0::2, 0], a[0::2, 1], a[0::2, 2] = x, y, 1.0
    a[0::2, 6], a[0::2, 7], a[0::2, 8] = -xp * x, -xp * y, -xp
    a[1::2, 3], a[1::2, 4], a[1::2, 5] = x, y, 1.0
    a[1::2, 6], a[1::2, 7], a[1::2, 8] = -yp * x, -yp * y, -yp

    _, sv, vt = np.linalg.svd(a)
    if sv[7] <= 1e-12 * sv[0]:
        raise RankDeficient("DLT system has a multi-dimensional null space")
    hn = vt[-1].reshape(3, 3)
    # inverse of the target normalizer, written out
    s, tx, ty = td[0, 0], td[0, 2], td[1, 2]
    td_inv = np.array([[1.0 / s, 0.0, -tx / s], [0.0, 1.0 / s, -ty / s], [0.0, 0.0, 1.0]])
    return Homography3(td_inv @ hn @ ts)


def symmetric_transfer_error(h: Homography3, src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    """Per-pair ``sqrt(|H s - d|^2 + |H^-1 d - s|^2)`` in pixels."""
    h_inv = np.linalg.inv(h.m)
    fwd = np.sum((apply_many(h, src) - dst) ** 2, axis=1)
    bwd = np.sum((apply_many(h_inv, dst) - src) ** 2, axis=1)
    with np.errstate(invalid="ignore"):
        err = np.sqrt(fwd + bwd)
    return np.where(np.isfinite(err), err, np.inf)


def ransac_homography(
    c: CorrespondenceSet, iterations: int, inlier_threshold: float, seed: int
) -> tuple[Homography3, np.ndarray]:
    """Consensus fit with ``sks_four_point`` hypotheses and a DLT refit on inliers.

    Hypotheses are ranked by inlier count, ties by lower mean inlier error.
    Returns the refit model and its inlier mask.
    """
    n = len(c)
    if n < 4:
        raise PreconditionError(f"RANSAC needs at least 4 correspondences, got {n}")
    if iterations < 1:
        raise PreconditionError("iterations must be >= 1")
    if not inlier_threshold > 0:
        raise PreconditionError("inlier threshold must be positive")

    src, dst = c.src, c.dst
    rng = np.random.default_rng(seed)
    best = None
    best_key = (0, -np.inf)
    for _ in range(iterations):
        idx = rng.choice(n, size=4, replace=False)
        try:
            h = sks_four_point(c.subset(idx))
        except (GeometryError, np.linalg.LinAlgError):
            continue
        err = symmetric_transfer_error(h, src, dst)
        mask = err < inlier_threshold
        count = int(mask.sum())
        if count == 0:
            continue
        key = (count, -float(err[mask].mean()))
        if key > best_key:
            best, best_key = h, key

    if best is None or best_key[0] < 4:
        raise NoConsensus(f"best hypothesis has {best_key[0]} inliers")

    mask = symmetric_transfer_error(best, src, dst) < inlier_threshold
    try:
        refit = dlt_four_point(c.subset(np.flatnonzero(mask)))
    except GeometryError:
        return best, mask
    refit_mask = symmetric_transfer_error(refit, src, dst) < inlier_threshold
    if refit_mask.sum() < mask.sum():
        return best, mask
    return refit, refit_mask
