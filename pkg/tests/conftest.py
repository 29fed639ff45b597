import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from gptlab import linalg  # noqa: E402
from gptlab.scalar import EXACT  # noqa: E402

# acceptance criterion number -> (description, passed, seconds)
ACCEPTANCE = {}


@st.composite
def pointed_cones(draw, min_dim=3, max_dim=6):
    """Random rational pointed full-dimensional cones: generators (x, t), t > 0."""
    d = draw(st.integers(min_dim, max_dim))
    count = draw(st.integers(d, d + 4))
    coord = st.integers(-4, 4)
    rays = []
    for _ in range(count):
        x = draw(st.lists(coord, min_size=d - 1, max_size=d - 1))
        t = draw(st.integers(1, 3))
        rays.append(tuple(x) + (t,))
    from hypothesis import assume

    assume(linalg.rank(EXACT.matrix(rays), EXACT) == d)
    return d, rays


@pytest.fixture
def acceptance():
    return ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        desc, ok, secs = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {desc}  ({secs:.2f}s)")
