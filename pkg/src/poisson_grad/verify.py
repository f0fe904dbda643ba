"""Post-hoc certification of candidate solutions.

Three independent checks can be run against any field: the node-wise
residual of the critical-point equation laplacian(u) = grad F(t, u), the
periodic face matching of an imported closed grid (values and one-sided
difference quotients), and the discrete Wirtinger inequality

    |u - mean(u)|_L2  <=  C_h * |D u|_L2,
    C_h = max_alpha h_alpha / (2 sin(pi / N_alpha)),

whose constant is exact for the forward-difference operator: the lowest
nonzero Fourier mode of the slackest axis achieves equality.  As the grid
is refined C_h converges to max_alpha T_alpha / (2 pi) at rate O(N^-2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .action import _guarded, action_gradient, stacked_diff_norm
from .grid import (
    Field,
    GridSpec,
    backward_diff,
    forward_diff,
    l2_norm,
    node_coordinates,
    split_mean,
)
from .potential import Potential

__all__ = [
    "ResidualReport",
    "el_residual",
    "BoundaryReport",
    "boundary_check",
    "WirtingerReport",
    "wirtinger_constant",
    "wirtinger_check",
    "Certificate",
    "certify",
]


@dataclass(frozen=True)
class ResidualReport:
    l2: float
    linf: float


def el_residual(u: Field, pot: Potential) -> tuple[Field, ResidualReport]:
    """Residual R = laplacian(u) - grad F(t, u) with L2 and Linf norms.

    The residual is assembled independently of action_gradient: the
    Laplacian as the backward difference of the forward difference rather
    than the direct stencil, and grad F by a fresh potential evaluation.
    The identity R = -action_gradient(u) is then asserted to 1e-13 as a
    cross-check of the two assemblies.
    """
    spec = u.spec
    lap = np.zeros_like(u.values)
    for axis in range(spec.p):
        lap += backward_diff(forward_diff(u, axis), axis).values
    grad_f = _guarded(pot.gradient, u, node_coordinates(spec))
    residual = Field(spec, lap - grad_f)
    grad = action_gradient(u, pot)
    mismatch = float(np.max(np.abs(residual.values + grad.values)))
    scale = 1.0 + float(np.max(np.abs(grad.values)))
    if mismatch > 1e-13 * scale:
        raise RuntimeError(
            f"residual/gradient assemblies disagree: {mismatch:.3e} > 1e-13 * {scale:.3e}"
        )
    return residual, ResidualReport(
        l2=l2_norm(residual), linf=float(np.max(np.abs(residual.values)))
    )


@dataclass(frozen=True)
class BoundaryAxis:
    axis: int
    value_mismatch: float
    quotient_mismatch: float


@dataclass(frozen=True)
class BoundaryReport:
    axes: tuple[BoundaryAxis, ...]
    threshold: float
    passed: bool


def boundary_check(closed: np.ndarray, spec: GridSpec) -> BoundaryReport:
    """Face matching for a closed-grid import (N_alpha + 1 nodes per axis).

    Per axis, reports the worst gap between the two faces' values and
    between the one-sided difference quotients taken at matching offsets:
    the forward quotient leaving the t = 0 face, (u_1 - u_0) / h, against
    its wrap continuation leaving the t = T face, (u_1 - u_N) / h.  For a
    closed export of an internal field both gaps are exactly zero; the
    check has teeth only for externally produced data.  Pass threshold is
    1e-9 * (1 + max |u|).
    """
    arr = np.asarray(closed, dtype=np.float64)
    closed_shape = tuple(N + 1 for N in spec.nodes)
    if spec.n == 1 and arr.shape == closed_shape:
        arr = arr[..., np.newaxis]
    if arr.shape != closed_shape + (spec.n,):
        raise ValueError(
            f"closed grid shape {arr.shape} does not match expected "
            f"{closed_shape + (spec.n,)}"
        )
    tol = 1e-9 * (1.0 + float(np.max(np.abs(arr))))
    axes = []
    passed = True
    for a in range(spec.p):
        h = spec.spacings[a]
        lo = np.take(arr, 0, axis=a)
        hi = np.take(arr, spec.nodes[a], axis=a)
        first = np.take(arr, 1, axis=a)
        value_gap = float(np.max(np.abs(lo - hi)))
        quotient_gap = float(np.max(np.abs((first - lo) / h - (first - hi) / h)))
        axes.append(BoundaryAxis(a, value_gap, quotient_gap))
        passed = passed and value_gap <= tol and quotient_gap <= tol
    return BoundaryReport(axes=tuple(axes), threshold=tol, passed=passed)


@dataclass(frozen=True)
class WirtingerReport:
    lhs: float
    rhs: float
    constant: float
    passed: bool


def wirtinger_constant(spec: GridSpec) -> float:
    """Sharp zero-mean constant max_alpha h_alpha / (2 sin(pi / N_alpha))."""
    return max(
        h / (2.0 * math.sin(math.pi / N)) for h, N in zip(spec.spacings, spec.nodes)
    )


def wirtinger_floor(spec: GridSpec, mean_scale: float) -> float:
    """Absolute allowance for the zero-mean bound: removing the mean leaves
    eps-level residue proportional to its magnitude, so near-constant fields
    carry lhs ~ eps * |mean| * sqrt(Vol) against an exactly zero rhs."""
    return 1e-13 * math.sqrt(spec.volume) * (1.0 + abs(mean_scale))


def wirtinger_check(u: Field) -> WirtingerReport:
    """Check |u - mean(u)| <= C_h |D(u - mean(u))|, with 1e-12 relative slack
    plus the roundoff floor of wirtinger_floor."""
    ubar, tilde = split_mean(u)
    constant = wirtinger_constant(u.spec)
    lhs = l2_norm(tilde)
    rhs = constant * stacked_diff_norm(tilde)
    atol = wirtinger_floor(u.spec, float(np.max(np.abs(ubar))))
    return WirtingerReport(
        lhs=lhs, rhs=rhs, constant=constant, passed=lhs <= rhs * (1.0 + 1e-12) + atol
    )


@dataclass(frozen=True)
class Certificate:
    residual_l2: float
    residual_linf: float
    residual_tol: float
    residual_ok: bool
    wirtinger: WirtingerReport
    boundary: BoundaryReport | None


def certify(
    u: Field,
    pot: Potential,
    residual_tol: float,
    closed: np.ndarray | None = None,
) -> Certificate:
    """Bundle the residual, Wirtinger, and (optionally) boundary checks."""
    _, norms = el_residual(u, pot)
    return Certificate(
        residual_l2=norms.l2,
        residual_linf=norms.linf,
        residual_tol=residual_tol,
        residual_ok=norms.l2 <= residual_tol,
        wirtinger=wirtinger_check(u),
        boundary=None if closed is None else boundary_check(closed, u.spec),
    )
