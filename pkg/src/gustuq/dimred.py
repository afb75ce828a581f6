"""Univariate dimension reduction (UDR) and its gradient-enhanced variant (GUDR).

The model is approximated additively about the input-space midpoint:

    f(x) ~= sum_i g_i(x_i) - (d - 1) f(mu)

where g_i interpolates the univariate slice through the midpoint at
Gauss-Legendre nodes (plus the midpoint itself, so the approximation is
exact at the center).  GUDR additionally matches the slice derivative at
each node, doubling the polynomial exactness per node.  Each slice is
stored as orthonormal-Legendre coefficients (an exact quadrature
projection of the interpolant), which makes moments analytic and gives
the additive chaos surrogate used for quantiles.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import KroghInterpolator

from .core import InputSpace, UncertainInput, nearest_rank_quantile, substream
from .pce import legendre_table

__all__ = [
    "QuadratureRule",
    "gauss_legendre",
    "UnivariateSlice",
    "UDRApprox",
    "udr_build",
    "gudr_build",
    "udr_build_scalar",
    "gudr_build_scalar",
    "dr_moments",
    "dr_quantile",
]

_NODE_TOL = 1e-12


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Legendre nodes and weights on [-1, 1] (weights sum to 2)."""

    order: int
    nodes: np.ndarray
    weights: np.ndarray


def gauss_legendre(k: int) -> QuadratureRule:
    """k-point Gauss-Legendre rule, exact for polynomials of degree <= 2k-1."""
    if not 1 <= k <= 20:
        raise ValueError(f"quadrature order must be in [1, 20], got {k}")
    nodes, weights = np.polynomial.legendre.leggauss(k)
    return QuadratureRule(order=k, nodes=nodes, weights=weights)


@dataclass(frozen=True)
class UnivariateSlice:
    """One dimension's slice data and its interpolant in coefficient form."""

    dimension: int
    nodes: np.ndarray  # standard coordinates
    node_values: np.ndarray
    node_derivatives: np.ndarray | None  # d f / d xi, present for GUDR
    coefficients: np.ndarray  # orthonormal Legendre expansion of the interpolant

    def __call__(self, xi) -> np.ndarray:
        table = legendre_table(np.atleast_1d(xi), self.coefficients.size - 1)
        return table @ self.coefficients


@dataclass(frozen=True)
class UDRApprox:
    """Additive decomposition of one scalar output about the midpoint."""

    space: InputSpace
    center_value: float
    slices: tuple[UnivariateSlice, ...]

    def __call__(self, xi) -> np.ndarray:
        """Evaluate the additive approximation at standard points (n, d) or (d,)."""
        xi = np.asarray(xi, dtype=float)
        single = xi.ndim == 1
        pts = np.atleast_2d(xi)
        d = self.space.dimension
        out = np.full(pts.shape[0], -(d - 1) * self.center_value)
        for s in self.slices:
            out += s(pts[:, s.dimension])
        return float(out[0]) if single else out

    def to_json(self) -> str:
        return json.dumps({
            "inputs": [[u.name, u.lower, u.upper] for u in self.space.inputs],
            "center_value": self.center_value,
            "slices": [{
                "dimension": s.dimension,
                "nodes": s.nodes.tolist(),
                "node_values": s.node_values.tolist(),
                "node_derivatives": None if s.node_derivatives is None
                                    else s.node_derivatives.tolist(),
                "coefficients": s.coefficients.tolist(),
            } for s in self.slices],
        })

    @classmethod
    def from_json(cls, doc: str) -> "UDRApprox":
        data = json.loads(doc)
        space = InputSpace(tuple(UncertainInput(n, lo, hi) for n, lo, hi in data["inputs"]))
        slices = tuple(
            UnivariateSlice(
                dimension=s["dimension"],
                nodes=np.array(s["nodes"], dtype=float),
                node_values=np.array(s["node_values"], dtype=float),
                node_derivatives=None if s["node_derivatives"] is None
                                 else np.array(s["node_derivatives"], dtype=float),
                coefficients=np.array(s["coefficients"], dtype=float),
            ) for s in data["slices"])
        return cls(space=space, center_value=float(data["center_value"]), slices=slices)


def _project_interpolant(conditions_x, conditions_y, degree: int) -> np.ndarray:
    """Orthonormal Legendre coefficients of the Krogh interpolant.

    ``conditions_x`` may repeat abscissae; a repeated entry's value is the
    next derivative there. The projection quadrature is exact for the
    interpolant times any basis polynomial of the same degree.
    """
    interp = KroghInterpolator(conditions_x, conditions_y)
    q_order = degree + 1
    nodes, weights = np.polynomial.legendre.leggauss(q_order)
    g = interp(nodes)
    table = legendre_table(nodes, degree)
    return 0.5 * (weights * g) @ table


def _slice_conditions(nodes, values, center_value, derivs=None):
    """Interpolation conditions in ascending abscissa order, center included.

    Skips the center when a quadrature node already sits at 0 (odd
    orders); otherwise repeated abscissae would be misread as derivative
    data.
    """
    xs, ys = [], []
    inserted_center = False
    for x, v, *rest in sorted(
            zip(nodes, values, *( [derivs] if derivs is not None else [] )),
            key=lambda t: t[0]):
        if not inserted_center and x > 0 and abs(x) > _NODE_TOL:
            xs.append(0.0)
            ys.append(center_value)
            inserted_center = True
        xs.append(x)
        ys.append(v)
        if rest:
            xs.append(x)
            ys.append(rest[0])
        if abs(x) <= _NODE_TOL:
            inserted_center = True
    if not inserted_center:
        xs.append(0.0)
        ys.append(center_value)
    return np.array(xs), np.array(ys)


def _slice_points(space: InputSpace, nodes: np.ndarray, dim: int) -> np.ndarray:
    mu = space.midpoint
    half_width = 0.5 * (space.upper - space.lower)
    pts = np.tile(mu, (nodes.size, 1))
    pts[:, dim] = mu[dim] + nodes * half_width[dim]
    return pts


def _assemble(space: InputSpace, rule: QuadratureRule, center_value: float,
              node_values: list[np.ndarray],
              node_derivatives: list[np.ndarray] | None) -> UDRApprox:
    slices = []
    for i in range(space.dimension):
        derivs = None if node_derivatives is None else node_derivatives[i]
        xs, ys = _slice_conditions(rule.nodes, node_values[i], center_value, derivs)
        coeffs = _project_interpolant(xs, ys, degree=len(xs) - 1)
        slices.append(UnivariateSlice(dimension=i, nodes=rule.nodes,
                                      node_values=node_values[i],
                                      node_derivatives=derivs,
                                      coefficients=coeffs))
    return UDRApprox(space=space, center_value=center_value, slices=tuple(slices))


def _build_scalar(f, space: InputSpace, k: int, df=None) -> UDRApprox:
    rule = gauss_legendre(k)
    half_width = 0.5 * (space.upper - space.lower)
    center_value = float(f(space.midpoint))
    node_values = []
    node_derivatives = [] if df is not None else None
    for i in range(space.dimension):
        pts = _slice_points(space, rule.nodes, i)
        node_values.append(np.array([float(f(x)) for x in pts]))
        if df is not None:
            # chain rule: the slice lives in the standard coordinate
            node_derivatives.append(
                np.array([float(df(x, i)) for x in pts]) * half_width[i])
    return _assemble(space, rule, center_value, node_values, node_derivatives)


def udr_build_scalar(f, space: InputSpace, k: int) -> UDRApprox:
    """UDR of a scalar function f(physical point) using d*k + 1 evaluations."""
    if k < 1:
        raise ValueError("quadrature order must be at least 1")
    return _build_scalar(f, space, k)


def gudr_build_scalar(f, df, space: InputSpace, k: int) -> UDRApprox:
    """GUDR of a scalar function; df(x, i) is the physical partial along dimension i."""
    if k < 1:
        raise ValueError("quadrature order must be at least 1")
    return _build_scalar(f, space, k, df=df)


def _build_from_oracle(oracle, space: InputSpace, k: int,
                       with_gradients: bool) -> tuple[UDRApprox, UDRApprox]:
    rule = gauss_legendre(k)
    half_width = 0.5 * (space.upper - space.lower)
    center = oracle.evaluate(space.midpoint).as_array()
    node_values = [[] for _ in range(2)]
    node_derivatives = [[] for _ in range(2)] if with_gradients else None
    for i in range(space.dimension):
        pts = _slice_points(space, rule.nodes, i)
        recs = np.array([oracle.evaluate(x).as_array() for x in pts])
        for j in range(2):
            node_values[j].append(recs[:, j])
        if with_gradients:
            grads = np.array([np.asarray(oracle.gradient(x)) for x in pts])
            for j in range(2):
                node_derivatives[j].append(grads[:, j, i] * half_width[i])
    return tuple(
        _assemble(space, rule, float(center[j]), node_values[j],
                  None if node_derivatives is None else node_derivatives[j])
        for j in range(2))


def udr_build(oracle, space: InputSpace, k: int) -> tuple[UDRApprox, UDRApprox]:
    """UDR of both benchmark QoIs from exactly d*k + 1 oracle evaluations."""
    return _build_from_oracle(oracle, space, k, with_gradients=False)


def gudr_build(oracle, space: InputSpace, k: int) -> tuple[UDRApprox, UDRApprox]:
    """GUDR of both QoIs; adds d*k gradient evaluations at the slice nodes."""
    if not hasattr(oracle, "gradient"):
        raise TypeError("GUDR requires an oracle with gradient capability")
    return _build_from_oracle(oracle, space, k, with_gradients=True)


def dr_moments(approx: UDRApprox) -> tuple[float, float]:
    """(mean, std) of the additive approximation, exact for its interpolants.

    Independence of the additive terms makes the variance the sum of the
    per-slice variances; each slice's moments read off its orthonormal
    coefficients.
    """
    d = approx.space.dimension
    mean = -(d - 1) * approx.center_value
    var = 0.0
    for s in approx.slices:
        mean += float(s.coefficients[0])
        var += float(np.sum(s.coefficients[1:] ** 2))
    return mean, float(np.sqrt(var))


def dr_quantile(approx: UDRApprox, p: float, n_samples: int = 10**6,
                seed: int = 0) -> float:
    """Nearest-rank quantile of the additive chaos surrogate, seeded sampling."""
    rng = substream(seed, "dr-quantile")
    d = approx.space.dimension
    xi = rng.random((n_samples, d)) * 2.0 - 1.0
    return nearest_rank_quantile(approx(xi), p)
