"""Sweep the kernel from similarity to projective and print how it is classified.

The affine shear ``u`` scales with ``t_aff`` and the projective terms ``b``,
``v`` scale with ``t_proj``, which shows where each threshold takes effect.
"""

import argparse
from dataclasses import dataclass

import numpy as np

from sks_homography import KernelParams, classify, kernel_to_angular_offsets


@dataclass
class SweepConfig:
    u: float = 0.05
    b: float = 0.05
    v: float = 0.05
    thresh1: float = 0.01
    thresh2: float = 0.01
    steps: int = 11


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    for name, default in vars(SweepConfig()).items():
        ap.add_argument(f"--{name}", type=type(default), default=default)
    cfg = SweepConfig(**vars(ap.parse_args()))

    print(f"{'t_aff':>6} {'t_proj':>6}  {'class':<10} angular offsets (theta, alpha, beta, gamma)")
    for t_aff in np.linspace(0, 1, cfg.steps):
        for t_proj in (0.0, 0.1, 0.5, 1.0):
            k = KernelParams(0.0, t_proj * cfg.b, t_aff * cfg.u, t_proj * cfg.v)
            cls = classify(k, cfg.thresh1, cfg.thresh2)
            ao = np.round(kernel_to_angular_offsets(k).as_array(), 4)
            print(f"{t_aff:6.2f} {t_proj:6.2f}  {cls.value:<10} {ao}")


if __name__ == "__main__":
    main()
