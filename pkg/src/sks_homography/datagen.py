"""Synthetic corner-perturbation datasets.

The square spans the whole ``image_size`` frame. Each regime perturbs a
different set of corners uniformly in ``[-max_offset, max_offset]^2``:

* projective: all four corners, homography by DLT;
* similarity: ``M`` and ``N`` only, the rest follows the two-point similarity;
* affine: ``M``, ``N`` and ``P``, with ``Q`` following the three-point affine.

Sample ``i`` draws from its own generator seeded with ``(seed, i)``, so any
subset reproduces independently of the others.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DegenerateAffine, DegenerateQuad, ExhaustedRedraws, GeometryError, SchemaError
from .geometry import (
    CorrespondenceSet,
    Homography3,
    SquareConfig,
    apply_many,
    has_collinear_triple,
    is_convex_quad,
    projective_distance,
)
from .kernel import KernelParams
from .similarity import _similarity_from_array, two_point_similarity_array
from .sks import HomographyParams8, compose_sks, decompose_sks, dlt_four_point

MAX_REDRAWS = 100
CONSISTENCY_TOL = 1e-9


class Regime(str, enum.Enum):
    PROJECTIVE = "projective"
    AFFINE = "affine"
    SIMILARITY = "similarity"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class PerturbationSpec:
    image_size: int = 128
    max_offset: float = 32.0
    regime: Regime = Regime.PROJECTIVE
    count: int = 1
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "regime", Regime(self.regime))
        if not 0 < self.max_offset < self.image_size / 2:
            raise SchemaError("max_offset must lie in (0, image_size / 2)")
        if self.count < 1:
            raise SchemaError("count must be >= 1")

    @property
    def cfg(self) -> SquareConfig:
        return SquareConfig.for_image(self.image_size)


@dataclass(frozen=True)
class Sample:
    cfg: SquareConfig
    correspondences: CorrespondenceSet
    gt_homography: Homography3
    gt_params: HomographyParams8
    regime: Regime = Regime.PROJECTIVE

    def check(self, tol: float = CONSISTENCY_TOL) -> None:
        """Raise ``AssertionError`` unless the ground truth is self-consistent."""
        mapped = apply_many(self.gt_homography, self.correspondences.src)
        err = float(np.max(np.abs(mapped - self.correspondences.dst)))
        assert err <= tol, f"gt homography misses a target by {err:.3e}"
        dist = projective_distance(compose_sks(self.gt_params, self.cfg), self.gt_homography)
        assert dist <= tol, f"gt params compose to a different homography ({dist:.3e})"

    def to_json(self) -> dict:
        return {
            "cfg": self.cfg.to_json(),
            "corr": self.correspondences.to_json(),
            "H": self.gt_homography.to_json(),
            "params": self.gt_params.to_json(),
            "regime": self.regime.value,
        }

    @classmethod
    def from_json(cls, data) -> "Sample":
        if not isinstance(data, dict):
            raise SchemaError("sample must be a JSON object")
        missing = {"cfg", "corr", "H", "params", "regime"} - set(data)
        if missing:
            raise SchemaError(f"sample is missing {sorted(missing)}")
        try:
            regime = Regime(data["regime"])
        except ValueError:
            raise SchemaError(f"unknown regime {data['regime']!r}") from None
        return cls(
            cfg=SquareConfig.from_json(data["cfg"]),
            correspondences=CorrespondenceSet.from_json(data["corr"]),
            gt_homography=Homography3.from_json(data["H"]),
            gt_params=HomographyParams8.from_json(data["params"]),
            regime=regime,
        )


def sample_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, index]))


def _affine_from_three(src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    if has_collinear_triple(src) or has_collinear_triple(dst):
        raise DegenerateAffine("three-point affine needs non-collinear triples")
    lhs = np.column_stack([src, np.ones(3)])
    sol = np.linalg.solve(lhs, dst)  # rows: coefficients for x', y'
    return np.vstack([sol.T, [0.0, 0.0, 1.0]])


def _draw(spec: PerturbationSpec, rng: np.random.Generator) -> Sample:
    cfg = spec.cfg
    corners = cfg.corner_array()
    mo = spec.max_offset
    regime = spec.regime

    if regime is Regime.PROJECTIVE:
        targets = corners + rng.uniform(-mo, mo, size=(4, 2))
        # cyclic order M, P, N, Q
        if not is_convex_quad(targets[[0, 2, 1, 3]]):
            raise DegenerateQuad("non-convex target quad")
        corr = CorrespondenceSet.from_arrays(corners, targets)
        h = dlt_four_point(corr)
        params = decompose_sks(h, cfg)
    elif regime is Regime.SIMILARITY:
        mn = corners[:2] + rng.uniform(-mo, mo, size=(2, 2))
        s = two_point_similarity_array(corners[0], corners[1], mn[0], mn[1])
        h = Homography3(s)
        targets = np.vstack([mn, apply_many(h, corners[2:])])
        corr = CorrespondenceSet.from_arrays(corners, targets)
        ox, oy = cfg.center.x, cfg.center.y
        t = np.array([[1.0, 0.0, -ox], [0.0, 1.0, -oy], [0.0, 0.0, 1.0]])
        t_inv = np.array([[1.0, 0.0, ox], [0.0, 1.0, oy], [0.0, 0.0, 1.0]])
        params = HomographyParams8(_similarity_from_array(t @ s @ t_inv), KernelParams())
    else:
        mnp = corners[:3] + rng.uniform(-mo, mo, size=(3, 2))
        h = Homography3(_affine_from_three(corners[:3], mnp))
        targets = np.vstack([mnp, apply_many(h, corners[3:])])
        if not is_convex_quad(targets[[0, 2, 1, 3]]):
            raise DegenerateQuad("non-convex target quad")
        corr = CorrespondenceSet.from_arrays(corners, targets)
        params = decompose_sks(h, cfg)

    sample = Sample(cfg, corr, h, params, regime)
    sample.check()
    return sample


def generate_one(spec: PerturbationSpec, index: int) -> Sample:
    rng = sample_rng(spec.seed, index)
    last = None
    for _ in range(MAX_REDRAWS):
        try:
            return _draw(spec, rng)
        except (GeometryError, AssertionError, np.linalg.LinAlgError) as exc:
            last = exc
    raise ExhaustedRedraws(f"sample {index}: {MAX_REDRAWS} rejections, last: {last}")


def generate(spec: PerturbationSpec) -> list[Sample]:
    return [generate_one(spec, i) for i in range(spec.count)]


def _with_regime(spec: PerturbationSpec, regime: Regime) -> PerturbationSpec:
    if spec.regime is not regime:
        raise SchemaError(f"spec regime is {spec.regime.value}, expected {regime.value}")
    return spec


def gen_projective(spec: PerturbationSpec) -> list[Sample]:
    return generate(_with_regime(spec, Regime.PROJECTIVE))


def gen_similarity(spec: PerturbationSpec) -> list[Sample]:
    return generate(_with_regime(spec, Regime.SIMILARITY))


def gen_affine(spec: PerturbationSpec) -> list[Sample]:
    return generate(_with_regime(spec, Regime.AFFINE))


def write_dataset(samples, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for s in samples:
            fh.write(json.dumps(s.to_json()) + "\n")


def read_dataset(path) -> list[Sample]:
    samples = []
    with open(Path(path), encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                samples.append(Sample.from_json(json.loads(line)))
            except json.JSONDecodeError as exc:
                raise SchemaError(f"{path}:{lineno}: invalid JSON ({exc.msg})") from None
            except GeometryError as exc:
                raise SchemaError(f"{path}:{lineno}: {exc}") from None
    return samples
