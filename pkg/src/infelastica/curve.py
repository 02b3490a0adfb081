"""Discrete arclength-parametrized curves and vector fields along them.

A curve is stored as N+1 chart-coordinate nodes together with its target
length L; the nominal node spacing is h = L/N.  Vector fields along a curve
are arrays of shape (N+1, n) whose row i holds chart components based at node
i.  Finite differences are second-order central at interior nodes and
second-order one-sided at the two end nodes; end values of any derived field
are therefore lower accuracy and downstream consumers exclude end layers.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.optimize import minimize_scalar

from .errors import CurveTooCoarse, DegenerateCurve, EmptyWindow
from .manifold import ManifoldModel

MIN_SEGMENTS = 8


@dataclass(frozen=True)
class DiscreteCurve:
    """N+1 chart nodes with (approximately) uniform Riemannian spacing."""

    model: ManifoldModel
    nodes: np.ndarray
    target_length: float

    def __post_init__(self):
        nodes = np.ascontiguousarray(np.asarray(self.nodes, dtype=float))
        object.__setattr__(self, "nodes", nodes)
        if nodes.ndim != 2 or nodes.shape[1] != self.model.dimension:
            raise ValueError(f"nodes must have shape (N+1, {self.model.dimension})")
        if nodes.shape[0] - 1 < MIN_SEGMENTS:
            raise CurveTooCoarse(f"need at least {MIN_SEGMENTS} segments, got {nodes.shape[0] - 1}")
        if self.target_length <= 0:
            raise ValueError("target_length must be positive")
        self.model.check_point(nodes)

    @property
    def segment_count(self) -> int:
        return self.nodes.shape[0] - 1

    @property
    def spacing(self) -> float:
        """Nominal arclength spacing h = L/N used by all stencils."""
        return self.target_length / self.segment_count

    def with_nodes(self, nodes) -> "DiscreteCurve":
        return DiscreteCurve(self.model, nodes, self.target_length)


def _stencil_derivative(values: np.ndarray, h: float) -> np.ndarray:
    """d/ds of per-node data: central interior, second-order one-sided ends."""
    out = np.empty_like(values)
    out[1:-1] = (values[2:] - values[:-2]) / (2.0 * h)
    out[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h)
    out[-1] = (3.0 * values[-1] - 4.0 * values[-2] + values[-3]) / (2.0 * h)
    return out


def tangent_field(curve: DiscreteCurve) -> np.ndarray:
    """Discrete unit tangent T, shape (N+1, n); g-norm is 1 up to O(h^2) on a uniform curve."""
    return _stencil_derivative(curve.nodes, curve.spacing)


def covariant_derivative(curve: DiscreteCurve, values: np.ndarray, tangent=None) -> np.ndarray:
    """Covariant derivative along the curve of a field: (D V)^k = V^k' + Gamma^k_ij T^i V^j."""
    values = np.asarray(values, dtype=float)
    if values.shape != curve.nodes.shape:
        raise ValueError("field shape does not match curve nodes")
    if tangent is None:
        tangent = tangent_field(curve)
    dv = _stencil_derivative(values, curve.spacing)
    return dv + curve.model.christoffel_contract(curve.nodes, tangent, values)


def curvature_vector_field(curve: DiscreteCurve, tangent=None) -> np.ndarray:
    """The field D_T T along the curve (end rows are one-sided, low accuracy)."""
    if tangent is None:
        tangent = tangent_field(curve)
    return covariant_derivative(curve, tangent, tangent)


def curvature_profile(curve: DiscreteCurve) -> np.ndarray:
    """Unsigned curvature kappa_i = |D_T T|_g at the N-1 interior nodes."""
    cvf = curvature_vector_field(curve)
    return np.asarray(curve.model.norm(curve.nodes[1:-1], cvf[1:-1]))


def segment_lengths(curve: DiscreteCurve) -> np.ndarray:
    """Riemannian length of each of the N segments, midpoint metric rule."""
    a = curve.nodes[:-1]
    b = curve.nodes[1:]
    mid = 0.5 * (a + b)
    lam = curve.model.conformal_factor(mid)
    return lam * np.linalg.norm(b - a, axis=1)


def length(curve: DiscreteCurve) -> float:
    """Total Riemannian length of the polyline."""
    return float(np.sum(segment_lengths(curve)))


def cumulative_arclength(curve: DiscreteCurve) -> np.ndarray:
    s = np.empty(curve.nodes.shape[0])
    s[0] = 0.0
    np.cumsum(segment_lengths(curve), out=s[1:])
    return s


def _arclength_samples(curve: DiscreteCurve, targets: np.ndarray) -> np.ndarray:
    """Points on (or geodesically beyond) the curve at the given arclengths.

    Targets inside [0, S] are evaluated on a monotone (pchip) interpolation of
    chart coordinates against cumulative arclength; targets past the end
    continue along the end tangent geodesic.
    """
    s = cumulative_arclength(curve)
    if np.any(np.diff(s) <= 0.0):
        raise DegenerateCurve("two consecutive curve nodes coincide")
    total = s[-1]
    interp = PchipInterpolator(s, curve.nodes, axis=0, extrapolate=False)
    out = np.empty((targets.shape[0], curve.nodes.shape[1]))
    inside = targets <= total
    out[inside] = interp(np.clip(targets[inside], 0.0, total))
    if not np.all(inside):
        t_end = tangent_field(curve)[-1]
        t_end = t_end / curve.model.norm(curve.nodes[-1], t_end)
        for idx in np.nonzero(~inside)[0]:
            out[idx] = curve.model.exp_map(curve.nodes[-1], t_end, targets[idx] - total)
    return out


def reparametrize_arclength(curve: DiscreteCurve, max_passes: int = 60, move_tol: float = 1e-13) -> DiscreteCurve:
    """Resample nodes to uniform arclength spacing, endpoints unchanged.

    Iterates the resampling to its fixed point so the result is idempotent to
    near machine precision.
    """
    n_seg = curve.segment_count
    work = curve
    scale = max(1.0, float(np.max(np.abs(curve.nodes))))
    for _ in range(max_passes):
        s = cumulative_arclength(work)
        targets = np.linspace(0.0, s[-1], n_seg + 1)
        new_nodes = _arclength_samples(work, targets)
        new_nodes[0] = work.nodes[0]
        new_nodes[-1] = work.nodes[-1]
        move = float(np.max(np.abs(new_nodes - work.nodes)))
        work = work.with_nodes(new_nodes)
        if move <= move_tol * scale:
            break
    return work


def resample_fixed_spacing(curve: DiscreteCurve, spacing: float) -> DiscreteCurve:
    """Resample at arclengths 0, spacing, 2*spacing, ... along the curve.

    Unlike reparametrize_arclength this pins every segment to the given
    length, extrapolating geodesically past the old endpoint when the curve
    is too short; the caller is expected to re-clamp boundary nodes after.
    """
    targets = spacing * np.arange(curve.segment_count + 1, dtype=float)
    return curve.with_nodes(_arclength_samples(curve, targets))


def nearest_point(curve: DiscreteCurve, x, window=None):
    """Closest point on the piecewise-geodesic interpolation of the polyline.

    window restricts the search to segments between node indices (lo, hi);
    None searches the whole curve.  Returns (param, distance) where param is
    a fractional node index lo <= param <= hi.
    """
    x = curve.model.check_point(np.asarray(x, dtype=float))
    n_nodes = curve.nodes.shape[0]
    lo, hi = (0, n_nodes - 1) if window is None else (int(window[0]), int(window[1]))
    lo = max(lo, 0)
    hi = min(hi, n_nodes - 1)
    if hi <= lo:
        raise EmptyWindow(f"window ({lo}, {hi}) contains no segment")

    if curve.model.model_id == "euclidean":
        a = curve.nodes[lo:hi]
        b = curve.nodes[lo + 1 : hi + 1]
        ab = b - a
        denom = np.sum(ab * ab, axis=1)
        denom[denom == 0.0] = 1.0
        t = np.clip(np.sum((x - a) * ab, axis=1) / denom, 0.0, 1.0)
        feet = a + t[:, None] * ab
        d2 = np.sum((feet - x) ** 2, axis=1)
        j = int(np.argmin(d2))
        return lo + j + float(t[j]), float(np.sqrt(d2[j]))

    dists = np.asarray(curve.model.distance(x, curve.nodes[lo : hi + 1]))
    j_best = lo + int(np.argmin(dists))
    best_param = float(j_best)
    best_dist = float(dists[j_best - lo])
    for j in range(max(lo, j_best - 1), min(hi, j_best + 1) + 1):
        if j == hi:
            continue
        a_pt = curve.nodes[j]
        v = curve.model.log_map(a_pt, curve.nodes[j + 1])

        def seg_dist(t):
            return float(curve.model.distance(x, curve.model.exp_map(a_pt, v, t)))

        res = minimize_scalar(seg_dist, bounds=(0.0, 1.0), method="bounded", options={"xatol": 1e-12})
        if res.fun < best_dist:
            best_dist = float(res.fun)
            best_param = j + float(res.x)
    return best_param, best_dist


# -- curve CSV format ----------------------------------------------------

def curve_csv_header(dimension: int) -> list[str]:
    return ["index", "s"] + [f"x_{d}" for d in range(dimension)] + ["kappa"]


def write_curve_csv(curve: DiscreteCurve, path) -> None:
    """Write the curve in the package CSV format (kappa empty at end rows)."""
    kappa = curvature_profile(curve)
    h = curve.spacing
    n_nodes = curve.nodes.shape[0]
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(curve_csv_header(curve.model.dimension))
        for i in range(n_nodes):
            kap = "" if i == 0 or i == n_nodes - 1 else repr(float(kappa[i - 1]))
            writer.writerow([i, repr(i * h)] + [repr(float(c)) for c in curve.nodes[i]] + [kap])


def read_curve_csv(path, model: ManifoldModel) -> DiscreteCurve:
    """Load a curve CSV written by write_curve_csv; raises ValueError naming any missing column."""
    with open(path, newline="") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError("curve CSV is empty, header row is mandatory") from None
        expected = curve_csv_header(model.dimension)
        for col in expected:
            if col not in header:
                raise ValueError(f"curve CSV is missing column {col!r}")
        idx = {col: header.index(col) for col in expected}
        rows = list(reader)
    if not rows:
        raise ValueError("curve CSV contains no node rows")
    nodes = np.array([[float(row[idx[f"x_{d}"]]) for d in range(model.dimension)] for row in rows])
    s_last = float(rows[-1][idx["s"]])
    if s_last <= 0:
        raise ValueError("curve CSV s column does not end at a positive length")
    return DiscreteCurve(model, nodes, s_last)
