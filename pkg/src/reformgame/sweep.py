"""Comparative statics: parameter grids, response curves, sensitivities."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterable, NamedTuple, Sequence

from .equilibrium import closed_form_threshold, equilibrium_report
from .model import DomainError, ModelParams, ParameterError, success_probability

__all__ = [
    "Monotonicity",
    "SweepPoint",
    "SweepSeries",
    "SWEEPABLE_PARAMETERS",
    "monotonicity_check",
    "grid_sweep",
    "SuccessResponse",
    "success_response_series",
    "finite_difference_sensitivity",
]

# Numeric ModelParams fields a grid may vary.
SWEEPABLE_PARAMETERS = (
    "a",
    "phi",
    "theta",
    "gamma",
    "kappa_max",
    "Gamma_gain",
    "p1",
    "p2",
    "s",
    "q",
    "w",
    "G2",
    "G3",
)

# Verdicts must not flip on solver noise; the solver tolerance is 1e-12.
MONOTONICITY_TOL = 1e-12


class Monotonicity(str, Enum):
    INCREASING = "Increasing"
    DECREASING = "Decreasing"
    NON_MONOTONE = "NonMonotone"
    CONSTANT = "Constant"


@dataclass(frozen=True)
class SweepPoint:
    kappa_star: float
    x_star: float
    psi_star: float


@dataclass(frozen=True)
class SweepSeries:
    """Equilibrium quantities along one parameter grid.

    ``values`` keeps only the grid points that produced a valid model;
    points rejected by validation are listed in ``skipped`` with the
    violated constraint. ``monotonicity`` classifies the ``target`` column.
    """

    parameter_name: str
    values: tuple[float, ...]
    outputs: tuple[SweepPoint, ...]
    monotonicity: Monotonicity
    target: str = "kappa_star"
    skipped: tuple[tuple[float, str], ...] = ()


def monotonicity_check(
    series: Sequence[float], tol: float = MONOTONICITY_TOL
) -> Monotonicity:
    """Classify a sequence as strictly increasing, strictly decreasing,
    constant (all pairwise differences within tol), or non-monotone.

    The classification is strict: a tie inside an otherwise rising or
    falling sequence counts as non-monotone. A singleton is constant.
    """
    if len(series) == 0:
        raise DomainError("cannot classify an empty series")
    signs = set()
    for prev, cur in zip(series, series[1:]):
        if cur - prev > tol:
            signs.add(1)
        elif prev - cur > tol:
            signs.add(-1)
        else:
            signs.add(0)
    if not signs or signs == {0}:
        return Monotonicity.CONSTANT
    if signs == {1}:
        return Monotonicity.INCREASING
    if signs == {-1}:
        return Monotonicity.DECREASING
    return Monotonicity.NON_MONOTONE


def grid_sweep(
    base: ModelParams, parameter_name: str, values: Iterable[float]
) -> SweepSeries:
    """Solve the equilibrium at each grid value of one parameter.

    Grid points whose parameter set fails validation are skipped and
    reported; a grid with no valid point at all is an error. The
    monotonicity verdict applies to kappa_star over the retained points.
    """
    if parameter_name not in SWEEPABLE_PARAMETERS:
        raise DomainError(
            f"unknown sweep parameter {parameter_name!r}; "
            f"expected one of {', '.join(SWEEPABLE_PARAMETERS)}"
        )
    grid = [float(v) for v in values]
    if not grid:
        raise DomainError("sweep grid is empty")
    if any(b - a <= 0 for a, b in zip(grid, grid[1:])):
        raise DomainError("sweep grid values must be strictly increasing")

    kept: list[float] = []
    points: list[SweepPoint] = []
    skipped: list[tuple[float, str]] = []
    for value in grid:
        candidate = replace(base, **{parameter_name: value})
        try:
            report = equilibrium_report(candidate)
        except ParameterError as exc:
            skipped.append((value, str(exc)))
            continue
        eq = report.equilibrium
        kept.append(value)
        points.append(
            SweepPoint(kappa_star=eq.kappa_star, x_star=eq.x_star, psi_star=eq.psi_star)
        )
    if not kept:
        raise ParameterError(
            "sweep_grid",
            f"no valid grid point for {parameter_name}; first rejection: {skipped[0][1]}",
        )
    verdict = monotonicity_check([p.kappa_star for p in points])
    return SweepSeries(
        parameter_name=parameter_name,
        values=tuple(kept),
        outputs=tuple(points),
        monotonicity=verdict,
        target="kappa_star",
        skipped=tuple(skipped),
    )


class SuccessResponse(NamedTuple):
    certainty: SweepSeries
    complementarity: SweepSeries
    participation: SweepSeries


def _psi_series(name: str, grid: Sequence[float], psi: Sequence[float],
                x_of: Sequence[float]) -> SweepSeries:
    points = tuple(
        SweepPoint(kappa_star=math.nan, x_star=x, psi_star=p)
        for x, p in zip(x_of, psi)
    )
    return SweepSeries(
        parameter_name=name,
        values=tuple(float(v) for v in grid),
        outputs=points,
        monotonicity=monotonicity_check(list(psi)),
        target="psi_star",
    )


def success_response_series(
    a_values: Sequence[float],
    phi_values: Sequence[float],
    x_values: Sequence[float],
    base_a: float = 0.5,
    base_phi: float = 2.0,
    base_x: float = 0.5,
) -> SuccessResponse:
    """Success-probability curves against each of its three inputs.

    Produces one series per input, holding the other two at the base point:
    linear and increasing in the certainty degree, decreasing in the
    complementarity degree for a fixed interior fraction, increasing and
    convex in the participating fraction.
    """
    for grid, label in ((a_values, "a"), (phi_values, "phi"), (x_values, "x")):
        if not len(grid):
            raise DomainError(f"empty grid for {label}")
    psi_a = [success_probability(a, base_phi, base_x) for a in a_values]
    psi_phi = [success_probability(base_a, phi, base_x) for phi in phi_values]
    psi_x = [success_probability(base_a, base_phi, x) for x in x_values]
    return SuccessResponse(
        certainty=_psi_series("a", a_values, psi_a, [base_x] * len(a_values)),
        complementarity=_psi_series("phi", phi_values, psi_phi, [base_x] * len(phi_values)),
        participation=_psi_series("x", x_values, psi_x, list(x_values)),
    )


def finite_difference_sensitivity(
    base: ModelParams, parameter_name: str, h: float
) -> float:
    """Numerical derivative of the equilibrium threshold in one parameter.

    Uses a central difference of the closed-form threshold under the base
    parameters' convention. When one side of the stencil leaves the valid
    parameter region (a boundary value such as theta = 0), the one-sided
    difference on the valid side is used instead.
    """
    if parameter_name not in SWEEPABLE_PARAMETERS:
        raise DomainError(f"unknown sensitivity parameter {parameter_name!r}")
    if h <= 0.0:
        raise DomainError(f"step h must be > 0, got {h}")

    center = float(getattr(base, parameter_name))

    def threshold_at(value: float) -> float:
        return closed_form_threshold(replace(base, **{parameter_name: value}))

    plus_ok = minus_ok = True
    try:
        upper = threshold_at(center + h)
    except ParameterError:
        plus_ok = False
    try:
        lower = threshold_at(center - h)
    except ParameterError:
        minus_ok = False

    if plus_ok and minus_ok:
        return (upper - lower) / (2.0 * h)
    if plus_ok:
        return (upper - threshold_at(center)) / h
    if minus_ok:
        return (threshold_at(center) - lower) / h
    raise ParameterError(
        "sensitivity_stencil",
        f"{parameter_name} = {center} +/- {h} leaves the valid parameter region on both sides",
    )
