import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from sks_homography.geometry import Point2, SquareConfig
from sks_homography.kernel import KernelParams
from sks_homography.similarity import SimilarityParams
from sks_homography.sks import HomographyParams8

settings.register_profile("default", deadline=None, max_examples=200, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

small = st.floats(-0.5, 0.5, allow_nan=False)
pixels = st.floats(-20.0, 20.0, allow_nan=False)


@st.composite
def similarity_params(draw):
    return SimilarityParams(draw(small), draw(small), draw(pixels), draw(pixels))


@st.composite
def kernel_params(draw, margin=0.1):
    da, b, u, v = draw(small), draw(small), draw(small), draw(small)
    a = da + 1.0
    if min(abs(a + v), abs(a - v), abs(a) - abs(b)) < margin:
        v = 0.0
        b = 0.0
    return KernelParams(da, b, u, v)


@st.composite
def params8(draw):
    return HomographyParams8(draw(similarity_params()), draw(kernel_params()))


@st.composite
def square_configs(draw):
    cx = draw(st.floats(-100, 200, allow_nan=False))
    cy = draw(st.floats(-100, 200, allow_nan=False))
    r = draw(st.floats(5, 100, allow_nan=False))
    return SquareConfig(Point2(cx, cy), r)


def random_params8(rng, bound=0.5, margin=0.1):
    while True:
        v = rng.uniform(-bound, bound, 8)
        a = v[4] + 1.0
        if min(abs(a + v[7]), abs(a - v[7]), abs(a) - abs(v[5])) >= margin:
            return HomographyParams8.from_array(v)


def random_homography_matrix(rng):
    """Well-conditioned random homography near identity, in pixel scale."""
    m = np.eye(3) + rng.uniform(-0.2, 0.2, (3, 3))
    m[:2, 2] = rng.uniform(-20, 20, 2)
    m[2, :2] = rng.uniform(-1e-3, 1e-3, 2)
    return m


@pytest.fixture
def cfg128():
    return SquareConfig.for_image(128)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def verdict():
    """Record one PASS/FAIL line and assert on it."""

    def record(label: str, ok: bool, detail: str) -> None:
        line = f"{'PASS' if ok else 'FAIL'}  {label}: {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
