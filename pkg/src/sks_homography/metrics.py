"""Average corner errors and five-number summaries."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import EmptyInput
from .geometry import Homography3, SquareConfig, apply
from .kernel import kernel_to_angular_offsets
from .sks import decompose_sks


@dataclass(frozen=True)
class EvalRecord:
    ace_po: float
    ace_ao: float


class FiveNumber(NamedTuple):
    min: float
    q1: float
    median: float
    q3: float
    max: float

    def to_json(self) -> dict:
        return self._asdict()


def ace_po(h_est: Homography3, h_gt: Homography3, cfg: SquareConfig) -> float:
    """Mean Euclidean distance between the two images of each square corner (pixels)."""
    total = 0.0
    for c in cfg.corners():
        e, g = apply(h_est, c), apply(h_gt, c)
        total += float(np.hypot(e.x - g.x, e.y - g.y))
    return total / 4.0


def angular_offsets_of(h: Homography3, cfg: SquareConfig) -> np.ndarray:
    return kernel_to_angular_offsets(decompose_sks(h, cfg).ker).as_array()


def ace_ao(h_est: Homography3, h_gt: Homography3, cfg: SquareConfig) -> float:
    """Mean absolute difference of the four angular offsets (cotangent units)."""
    diff = angular_offsets_of(h_est, cfg) - angular_offsets_of(h_gt, cfg)
    return float(np.mean(np.abs(diff)))


def evaluate(h_est: Homography3, h_gt: Homography3, cfg: SquareConfig) -> EvalRecord:
    return EvalRecord(ace_po(h_est, h_gt, cfg), ace_ao(h_est, h_gt, cfg))


def quartile_summary(values: Sequence[float]) -> FiveNumber:
    """Min, quartiles and max; quartiles by linear interpolation between order
    statistics (numpy's default, the "inclusive" definition)."""
    arr = np.asarray(values, dtype=float).ravel()
    if arr.size == 0:
        raise EmptyInput("quartile_summary of an empty list")
    q = np.percentile(arr, [0, 25, 50, 75, 100], method="linear")
    return FiveNumber(*(float(v) for v in q))
