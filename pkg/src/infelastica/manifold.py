"""Constant-curvature model manifolds in a single conformal chart.

Three models are built in, all with metric g = lam(x)^2 * delta on an open
subset of R^n:

* ``euclidean``   lam = 1, flat.
* ``sphere``      stereographic chart of the round unit sphere, projected
                  from the south pole; lam = 2 / (1 + |x|^2). The chart
                  origin is the north pole and the projection pole lies at
                  chart infinity.
* ``hyperbolic``  Poincare ball, lam = 2 / (1 - |x|^2).

Points are plain arrays of chart coordinates, tangent vectors are arrays of
chart components at an explicitly supplied base point.  All operations accept
stacked inputs with shape (..., n) and are pure functions of immutable model
values, so a model can be shared freely across workers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BeyondInjectivityRadius, OutOfChartDomain

MODEL_IDS = ("euclidean", "sphere", "hyperbolic")

# Chart domain guards. Curves on the sphere must stay away from the
# projection pole; the hyperbolic ball is open.
SPHERE_CHART_RADIUS_GUARD = 10.0
HYPERBOLIC_BALL_GUARD = 1e-6

_ANTIPODAL_GUARD = 1e-9


@dataclass(frozen=True)
class ManifoldModel:
    """A constant-curvature manifold described by one conformal chart."""

    model_id: str
    dimension: int
    curvature_sign: int

    def __post_init__(self):
        if self.model_id not in MODEL_IDS:
            raise ValueError(f"unknown model_id {self.model_id!r}, expected one of {MODEL_IDS}")
        if self.dimension < 2:
            raise ValueError(f"dimension must be >= 2, got {self.dimension}")

    # -- chart domain -------------------------------------------------

    def in_domain(self, x) -> np.ndarray:
        """Boolean mask of which points satisfy the chart guard."""
        x = np.asarray(x, dtype=float)
        r2 = np.sum(x * x, axis=-1)
        if self.model_id == "sphere":
            return r2 < SPHERE_CHART_RADIUS_GUARD**2
        if self.model_id == "hyperbolic":
            return r2 < (1.0 - HYPERBOLIC_BALL_GUARD) ** 2
        return np.ones(np.shape(r2), dtype=bool) if np.ndim(r2) else np.True_

    def check_point(self, x) -> np.ndarray:
        """Return x as a float array, raising OutOfChartDomain if any point violates the guard."""
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.dimension:
            raise ValueError(f"point has {x.shape[-1]} coordinates, model has dimension {self.dimension}")
        ok = self.in_domain(x)
        if not np.all(ok):
            raise OutOfChartDomain(f"point outside the {self.model_id} chart domain")
        return x

    # -- conformal data -----------------------------------------------

    def conformal_factor(self, x) -> np.ndarray:
        """lam(x) with g = lam^2 * identity; shape (...,)."""
        x = np.asarray(x, dtype=float)
        r2 = np.sum(x * x, axis=-1)
        if self.model_id == "euclidean":
            return np.ones_like(r2)
        if self.model_id == "sphere":
            return 2.0 / (1.0 + r2)
        return 2.0 / (1.0 - r2)

    def log_factor_grad(self, x) -> np.ndarray:
        """Gradient of log(lam) in chart coordinates; shape (..., n)."""
        x = np.asarray(x, dtype=float)
        r2 = np.sum(x * x, axis=-1, keepdims=True)
        if self.model_id == "euclidean":
            return np.zeros_like(x)
        if self.model_id == "sphere":
            return -2.0 * x / (1.0 + r2)
        return 2.0 * x / (1.0 - r2)

    def log_factor_hess(self, x) -> np.ndarray:
        """Hessian of log(lam); shape (..., n, n)."""
        x = np.asarray(x, dtype=float)
        n = self.dimension
        eye = np.eye(n)
        r2 = np.sum(x * x, axis=-1)[..., None, None]
        outer = x[..., :, None] * x[..., None, :]
        if self.model_id == "euclidean":
            return np.zeros(x.shape + (n,))
        if self.model_id == "sphere":
            return -2.0 * eye / (1.0 + r2) + 4.0 * outer / (1.0 + r2) ** 2
        return 2.0 * eye / (1.0 - r2) + 4.0 * outer / (1.0 - r2) ** 2

    # -- spec operations ----------------------------------------------

    def metric(self, x) -> np.ndarray:
        """Metric tensor g_ij(x), shape (..., n, n); conformal so lam^2 * identity."""
        x = self.check_point(x)
        lam = self.conformal_factor(x)
        return lam[..., None, None] ** 2 * np.eye(self.dimension)

    def christoffel(self, x) -> np.ndarray:
        """Christoffel symbols Gamma^k_ij(x), shape (..., n, n, n), index order (k, i, j).

        For a conformal metric, Gamma^k_ij = d_i u delta_jk + d_j u delta_ik
        - d_k u delta_ij with u = log(lam).
        """
        x = self.check_point(x)
        u = self.log_factor_grad(x)
        eye = np.eye(self.dimension)
        return (
            np.einsum("...i,jk->...kij", u, eye)
            + np.einsum("...j,ik->...kij", u, eye)
            - np.einsum("...k,ij->...kij", u, eye)
        )

    def christoffel_contract(self, x, a, b) -> np.ndarray:
        """Gamma^k_ij(x) a^i b^j without forming the rank-3 array; shape (..., n)."""
        u = self.log_factor_grad(np.asarray(x, dtype=float))
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        ua = np.sum(u * a, axis=-1, keepdims=True)
        ub = np.sum(u * b, axis=-1, keepdims=True)
        ab = np.sum(a * b, axis=-1, keepdims=True)
        return ua * b + ub * a - ab * u

    def inner(self, x, a, b) -> np.ndarray:
        """Riemannian inner product g_x(a, b); shape (...,)."""
        lam = self.conformal_factor(np.asarray(x, dtype=float))
        return lam**2 * np.sum(np.asarray(a, float) * np.asarray(b, float), axis=-1)

    def norm(self, x, a) -> np.ndarray:
        """Riemannian norm |a|_g at x."""
        lam = self.conformal_factor(np.asarray(x, dtype=float))
        return lam * np.linalg.norm(np.asarray(a, float), axis=-1)

    def riemann(self, x, X, Y, Z) -> np.ndarray:
        """Curvature tensor R(X, Y)Z at x via the constant-curvature closed form.

        R(X, Y)Z = k0 * (<Y, Z> X - <X, Z> Y) with k0 = curvature_sign.
        """
        x = self.check_point(x)
        if self.curvature_sign == 0:
            return np.zeros_like(np.asarray(X, dtype=float))
        yz = self.inner(x, Y, Z)[..., None]
        xz = self.inner(x, X, Z)[..., None]
        return self.curvature_sign * (yz * np.asarray(X, float) - xz * np.asarray(Y, float))

    def distance(self, x, y) -> np.ndarray:
        """Geodesic distance, vectorized over stacked points."""
        x = self.check_point(x)
        y = self.check_point(y)
        diff2 = np.sum((x - y) ** 2, axis=-1)
        if self.model_id == "euclidean":
            return np.sqrt(diff2)
        rx2 = np.sum(x * x, axis=-1)
        ry2 = np.sum(y * y, axis=-1)
        if self.model_id == "sphere":
            arg = np.sqrt(diff2 / ((1.0 + rx2) * (1.0 + ry2)))
            return 2.0 * np.arcsin(np.clip(arg, 0.0, 1.0))
        arg = 1.0 + 2.0 * diff2 / ((1.0 - rx2) * (1.0 - ry2))
        return np.arccosh(np.maximum(arg, 1.0))

    def exp_map(self, x, v, t=1.0) -> np.ndarray:
        """Point reached from x after following the geodesic with initial velocity v for parameter t."""
        x = self.check_point(x)
        v = np.asarray(v, dtype=float)
        if self.model_id == "euclidean":
            return x + t * v
        if self.model_id == "sphere":
            return self._sphere_exp(x, v, t)
        return self._hyper_exp(x, v, t)

    def log_map(self, x, y) -> np.ndarray:
        """Initial velocity of the minimal geodesic from x to y; |log_map(x,y)|_g = distance(x,y)."""
        x = self.check_point(x)
        y = self.check_point(y)
        if self.model_id == "euclidean":
            return y - x
        if self.model_id == "sphere":
            return self._sphere_log(x, y)
        return self._hyper_log(x, y)

    # -- sphere chart via the round embedding -------------------------

    def _sphere_embed(self, x):
        s = np.sum(x * x, axis=-1, keepdims=True)
        w = 2.0 * x / (1.0 + s)
        z = (1.0 - s) / (1.0 + s)
        return np.concatenate([w, z], axis=-1)

    def _sphere_unembed(self, p):
        w = p[..., :-1]
        z = p[..., -1:]
        denom = 1.0 + z
        if np.any(denom <= 1.0 / (1.0 + SPHERE_CHART_RADIUS_GUARD**2)):
            raise OutOfChartDomain("geodesic left the stereographic chart domain")
        return w / denom

    def _sphere_push(self, x, v):
        # Differential of the embedding; isometric, so J^T J = lam^2 * I.
        s = np.sum(x * x, axis=-1, keepdims=True)
        xv = np.sum(x * v, axis=-1, keepdims=True)
        dw = 2.0 * v / (1.0 + s) - 4.0 * xv * x / (1.0 + s) ** 2
        dz = -4.0 * xv / (1.0 + s) ** 2
        return np.concatenate([dw, dz], axis=-1)

    def _sphere_pull(self, x, V):
        s = np.sum(x * x, axis=-1, keepdims=True)
        lam2 = (2.0 / (1.0 + s)) ** 2
        Vw = V[..., :-1]
        Vz = V[..., -1:]
        # J^T V with the Jacobian of _sphere_embed, divided by lam^2.
        xVw = np.sum(x * Vw, axis=-1, keepdims=True)
        jt = 2.0 * Vw / (1.0 + s) - 4.0 * x * xVw / (1.0 + s) ** 2 - 4.0 * x * Vz / (1.0 + s) ** 2
        return jt / lam2

    def _sphere_exp(self, x, v, t):
        speed = self.norm(x, v)
        speed_arr = np.asarray(speed)[..., None]
        p = self._sphere_embed(x)
        V = self._sphere_push(x, v)
        with np.errstate(invalid="ignore", divide="ignore"):
            Vhat = np.where(speed_arr > 0.0, V / np.where(speed_arr > 0.0, speed_arr, 1.0), 0.0)
        theta = t * speed_arr
        q = p * np.cos(theta) + Vhat * np.sin(theta)
        q = np.where(speed_arr > 0.0, q, p)
        return self._sphere_unembed(q)

    def _sphere_log(self, x, y):
        p = self._sphere_embed(x)
        q = self._sphere_embed(y)
        c = np.clip(np.sum(p * q, axis=-1, keepdims=True), -1.0, 1.0)
        theta = np.arccos(c)
        if np.any(theta >= np.pi - _ANTIPODAL_GUARD):
            raise BeyondInjectivityRadius("points are antipodal within tolerance")
        sin_theta = np.sin(theta)
        with np.errstate(invalid="ignore", divide="ignore"):
            scale = np.where(sin_theta > 0.0, theta / np.where(sin_theta > 0.0, sin_theta, 1.0), 1.0)
        V = (q - c * p) * scale
        return self._sphere_pull(x, V)

    # -- Poincare ball via Moebius gyro-operations --------------------

    @staticmethod
    def _mobius_add(a, b):
        aa = np.sum(a * a, axis=-1, keepdims=True)
        bb = np.sum(b * b, axis=-1, keepdims=True)
        ab = np.sum(a * b, axis=-1, keepdims=True)
        num = (1.0 + 2.0 * ab + bb) * a + (1.0 - aa) * b
        den = 1.0 + 2.0 * ab + aa * bb
        return num / den

    def _hyper_exp(self, x, v, t):
        vnorm = np.linalg.norm(v, axis=-1, keepdims=True)
        lam = self.conformal_factor(x)[..., None]
        dist = t * lam * vnorm
        with np.errstate(invalid="ignore", divide="ignore"):
            vhat = np.where(vnorm > 0.0, v / np.where(vnorm > 0.0, vnorm, 1.0), 0.0)
        step = np.tanh(dist / 2.0) * vhat
        out = self._mobius_add(x, step)
        out = np.where(vnorm > 0.0, out, x)
        return self.check_point(out)

    def _hyper_log(self, x, y):
        u = self._mobius_add(-x, y)
        r = np.linalg.norm(u, axis=-1, keepdims=True)
        lam = self.conformal_factor(x)[..., None]
        with np.errstate(invalid="ignore", divide="ignore"):
            uhat = np.where(r > 0.0, u / np.where(r > 0.0, r, 1.0), 0.0)
        return (2.0 / lam) * np.arctanh(np.clip(r, 0.0, 1.0 - 1e-15)) * uhat


def make_model(model_id: str, dimension: int) -> ManifoldModel:
    """Build one of the three built-in models from its string id."""
    signs = {"euclidean": 0, "sphere": 1, "hyperbolic": -1}
    if model_id not in signs:
        raise ValueError(f"unknown model id {model_id!r}, expected one of {MODEL_IDS}")
    return ManifoldModel(model_id=model_id, dimension=int(dimension), curvature_sign=signs[model_id])


def sectional_curvature(model: ManifoldModel, x, X, Y) -> float:
    """Sectional curvature of the plane spanned by X, Y at x, computed from riemann()."""
    rxy = model.riemann(x, X, Y, Y)
    num = model.inner(x, rxy, X)
    den = model.inner(x, X, X) * model.inner(x, Y, Y) - model.inner(x, X, Y) ** 2
    return num / den
