import os
import random
import tempfile

# keep app.log out of the home directory before any module configures its logger
os.environ.setdefault("FSPLIT_LOG_DIR", tempfile.mkdtemp(prefix="fsplit-test-log-"))

import pytest

from models import cartier, frobenius
from models.ideal_engine import Ideal, PresentedRing
from models.polyring import PolynomialRing


def make_ring(p, variables, generators=(), **kw) -> PresentedRing:
    if isinstance(variables, str):
        variables = [v.strip() for v in variables.split(",")]
    return PresentedRing.from_strings(p, variables, list(generators), **kw)


def ideal(ring, *texts) -> Ideal:
    ambient = ring if isinstance(ring, PolynomialRing) else ring.ambient
    return Ideal.from_strings(ambient, texts)


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture(autouse=True)
def _fresh_caches():
    yield
    frobenius.clear_caches()
    cartier.clear_caches()


@pytest.fixture
def xy_ring():
    return make_ring(2, "x,y", ["x*y"])


@pytest.fixture
def a1_ring():
    return make_ring(3, "x,y,z", ["x*y - z^2"])


@pytest.fixture
def path_facet_file(tmp_path):
    path = tmp_path / "path.txt"
    path.write_text("x,y\ny,z\n", encoding="utf-8")
    return path
