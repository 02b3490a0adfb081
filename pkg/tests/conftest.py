import numpy as np
import pytest

from infelastica.manifold import make_model

MODEL_IDS = ("euclidean", "sphere", "hyperbolic")


@pytest.fixture(params=MODEL_IDS)
def model(request):
    return make_model(request.param, 2)


def random_points(model, rng, count):
    """Random in-domain chart points, spread over a representative chart region."""
    n = model.dimension
    if model.model_id == "sphere":
        radius = 3.0
    elif model.model_id == "hyperbolic":
        radius = 0.9
    else:
        radius = 3.0
    pts = rng.normal(size=(count, n))
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    pts *= radius * rng.uniform(0.05, 1.0, size=(count, 1))
    return pts


def unit_tangent(model, x, v):
    """Normalize chart components v to a g-unit vector at x."""
    v = np.asarray(v, dtype=float)
    return v / model.norm(x, v)


def g_orthonormal_pair(model, x, rng):
    """A g-orthonormal pair of tangent vectors at x."""
    n = model.dimension
    a = rng.normal(size=n)
    b = rng.normal(size=n)
    a = unit_tangent(model, x, a)
    b = b - model.inner(x, a, b) * a / model.inner(x, a, a)
    b = unit_tangent(model, x, b)
    return a, b
