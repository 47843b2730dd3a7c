"""Closed-form solutions used as oracles for the solver.

For the linear problem

    (D^(alpha,beta) phi)(x) - lambda phi(x) = f(x),   (J^(1-gamma) phi)(a) = c,

the solution is

    phi(x) = c z^(gamma-1) E_{alpha,gamma}[lambda z^alpha]
             + int_a^x t^(rho-1) ((x^rho-t^rho)/rho)^(alpha-1)
                       E_{alpha,alpha}[lambda ((x^rho-t^rho)/rho)^alpha] f(t) dt,

with z = (x^rho - a^rho)/rho.  The source integral shares the product-
integration machinery of the operators module: the scalar Mittag-Leffler
factor is expanded termwise and folded into the kernel panel weights, so
there is a single singular-kernel code path in the package.

The power-weighted problem (D^(alpha,0) phi)(x) = lambda z^xi phi(x) with
(J^(1-alpha) phi)(a) = c is solved by the Kilbas-Saigo function:

    phi(x) = c/Gamma(alpha) z^(alpha-1) E_{alpha, l, m}[lambda z^(alpha+xi)]

with l = 1 + (xi-1)/alpha and m = 1 + xi/alpha, whose series coefficients
are c_j = prod_{r=1..j} Gamma[r(alpha+xi)] / Gamma[r(alpha+xi) + alpha].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from .errors import ValidationError
from .frame import Grid, GridFn, HKParams, make_graded_grid, z_of_x
from .operators import _kernel_apply_left
from .specfun import KSQuery, MLQuery, log_gamma, ml2, ml_ks

__all__ = [
    "LinearProblemSpec",
    "PowerWeightedSpec",
    "homogeneous_solution",
    "linear_solution",
    "linear_solution_on_grid",
    "power_weighted_solution",
    "cj_coefficients",
]


@dataclass(frozen=True)
class LinearProblemSpec:
    """Linear Cauchy problem with constant coefficient and additive source."""

    params: HKParams
    lam: float
    c: float
    source: Optional[Callable] = None


@dataclass(frozen=True)
class PowerWeightedSpec:
    """Power-weighted coefficient problem; the initial condition uses
    J^(1-alpha), which fixes beta = 0 (gamma = alpha)."""

    params: HKParams
    lam: float
    xi: float
    c: float

    def __post_init__(self):
        if self.params.beta != 0.0:
            raise ValidationError(
                f"power-weighted problem requires beta = 0 (got {self.params.beta})"
            )
        if not self.xi > -self.params.alpha:
            raise ValidationError(
                f"power weight must satisfy xi > -alpha (got xi={self.xi}, alpha={self.params.alpha})"
            )


def _check_in_domain(params: HKParams, x) -> np.ndarray:
    xa = np.asarray(x, dtype=float)
    if np.any(xa <= params.a) or np.any(xa > params.b * (1 + 1e-12)):
        raise ValidationError(f"x must satisfy a < x <= b (got {x})")
    return xa


def homogeneous_solution(spec: LinearProblemSpec, x):
    """phi(x) = c z^(gamma-1) E_{alpha,gamma}[lambda z^alpha] (zero source)."""
    if spec.source is not None:
        raise ValidationError("homogeneous solution requires source = None")
    params = spec.params
    xa = _check_in_domain(params, x)
    z = np.atleast_1d(np.asarray(z_of_x(params, xa), dtype=float))
    g = params.gamma
    out = np.empty_like(z)
    for i, zz in enumerate(z):
        out[i] = spec.c * zz ** (g - 1.0) * ml2(MLQuery(params.alpha, g, spec.lam * zz**params.alpha))
    out = out.reshape(np.shape(np.asarray(xa)))
    return out if isinstance(x, np.ndarray) else float(out)


def _ml_kernel_terms(alpha: float, lam: float, z_top: float, tol: float = 1e-18) -> tuple:
    """Termwise expansion of w^(alpha-1) E_{alpha,alpha}(lam w^alpha).

    Term k contributes lam^k / Gamma(alpha(k+1)) * w^(alpha(k+1)-1); the
    expansion is truncated once the largest panel contribution is negligible.
    """
    terms = []
    first_scale = None
    for k in range(0, 300):
        e = alpha * (k + 1.0)
        coef = lam**k * math.exp(-log_gamma(e))
        scale = abs(coef) * z_top**e
        terms.append((coef, e))
        if first_scale is None:
            first_scale = max(scale, 1e-300)
        if k >= 2 and scale <= tol * first_scale:
            break
    return tuple(terms)


def linear_solution(spec: LinearProblemSpec, x: float, *, n: int = 2048,
                    grading: Optional[float] = None) -> float:
    """Pointwise solution of the linear problem, source integral by quadrature.

    ``n``/``grading`` size the internal product-integration mesh on [a, x].
    """
    params = spec.params
    x = float(x)
    _check_in_domain(params, x)
    hom = homogeneous_solution(replace(spec, source=None), x)
    if spec.source is None:
        return float(hom)
    sub = HKParams(params.alpha, params.beta, params.rho, params.a, x)
    grid = make_graded_grid(sub, n, grading)
    f = GridFn.from_x_function(grid, spec.source)
    terms = _ml_kernel_terms(params.alpha, spec.lam, grid.nodes_z[-1])
    return float(hom + _kernel_apply_left(f, terms)[-1])


def linear_solution_on_grid(spec: LinearProblemSpec, grid: Grid) -> GridFn:
    """The linear solution sampled on a full grid (shared-panel evaluation)."""
    params = grid.params
    g = params.gamma
    z = grid.nodes_z
    weighted = np.array(
        [spec.c * ml2(MLQuery(params.alpha, g, spec.lam * zz**params.alpha)) for zz in z]
    )
    if spec.source is not None:
        f = GridFn.from_x_function(grid, spec.source)
        terms = _ml_kernel_terms(params.alpha, spec.lam, z[-1])
        weighted = weighted + z ** (1.0 - g) * _kernel_apply_left(f, terms)
    return GridFn(grid, g - 1.0, weighted)


def power_weighted_solution(spec: PowerWeightedSpec, x):
    """phi(x) = c/Gamma(alpha) z^(alpha-1) E_{alpha,l,m}[lambda z^(alpha+xi)]."""
    params = spec.params
    xa = _check_in_domain(params, x)
    alpha = params.alpha
    l = 1.0 + (spec.xi - 1.0) / alpha
    m = 1.0 + spec.xi / alpha
    pref = spec.c * math.exp(-log_gamma(alpha))
    z = np.atleast_1d(np.asarray(z_of_x(params, xa), dtype=float))
    out = np.empty_like(z)
    for i, zz in enumerate(z):
        out[i] = pref * zz ** (alpha - 1.0) * ml_ks(
            KSQuery(alpha, l, m, spec.lam * zz ** (alpha + spec.xi))
        )
    out = out.reshape(np.shape(np.asarray(xa)))
    return out if isinstance(x, np.ndarray) else float(out)


def cj_coefficients(alpha: float, xi: float, j_max: int) -> np.ndarray:
    """c_0 = 1 and c_j = prod_{r=1..j} Gamma[r(alpha+xi)]/Gamma[r(alpha+xi)+alpha].

    These are the series coefficients of the power-weighted solution in
    powers of lambda z^(alpha+xi); they must match the Kilbas-Saigo internal
    product under the l, m substitution above.
    """
    if not alpha + xi > 0.0:
        raise ValidationError(f"coefficients need alpha + xi > 0 (got {alpha + xi})")
    if j_max < 0:
        raise ValidationError(f"j_max must be nonnegative (got {j_max})")
    rs = np.arange(1, j_max + 1, dtype=float)
    args = rs * (alpha + xi)
    log_factors = log_gamma(args) - log_gamma(args + alpha)
    return np.concatenate(([1.0], np.exp(np.cumsum(log_factors))))
