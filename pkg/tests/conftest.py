"""Shared fixtures: the baseline parameter set and a random-params generator."""

from __future__ import annotations

from dataclasses import replace

import pytest

from reformgame import (
    LeaderType,
    ModelParams,
    PosteriorConvention,
    ThresholdConvention,
)

# Canonical parameter set used across the suite; its equilibrium has the
# closed form kappa* = 0.2 / (1/(0.5*0.8*1) - 0.8) = 2/17.
BASELINE = ModelParams(
    a=0.5,
    phi=2.0,
    theta=0.2,
    gamma=0.8,
    kappa_max=1.0,
    Gamma_gain=1.0,
    p1=0.3,
    p2=0.4,
    s=0.5,
    q=1.0,
    w=1.0,
    G2=0.0,
    G3=1.0,
)


def make_params(**overrides) -> ModelParams:
    return replace(BASELINE, **overrides)


def random_valid_params(
    rng,
    leader_type: LeaderType | None = None,
    threshold_convention: ThresholdConvention | None = None,
    posterior_convention: PosteriorConvention | None = None,
) -> ModelParams:
    """Draw a parameter set satisfying every model constraint.

    Gains are drawn as a fraction (at most 0.95) of their strict upper
    bounds, which caps the contraction modulus of the best-response map at
    0.95 and keeps every optimal information effort interior.
    """
    a = rng.uniform(0.05, 0.95)
    gamma = rng.uniform(0.05, 0.95)
    kappa_max = rng.uniform(0.5, 5.0)
    p1 = rng.uniform(0.0, 0.9)
    q = rng.uniform(0.5, 3.0)
    if leader_type is None:
        leader_type = (LeaderType.PARTISAN, LeaderType.NON_PARTISAN)[int(rng.integers(2))]
    if threshold_convention is None:
        threshold_convention = (
            ThresholdConvention.PAPER_LITERAL,
            ThresholdConvention.DERIVED_CONSISTENT,
        )[int(rng.integers(2))]
    if posterior_convention is None:
        posterior_convention = (
            PosteriorConvention.PAPER,
            PosteriorConvention.BAYES,
        )[int(rng.integers(2))]
    reformer_bound = q / ((1.0 - p1) * a * gamma)
    return ModelParams(
        a=a,
        phi=rng.uniform(1.1, 5.0),
        theta=rng.uniform(0.0, 1.0),
        gamma=gamma,
        kappa_max=kappa_max,
        Gamma_gain=rng.uniform(0.05, 0.95) * kappa_max / (a * gamma),
        p1=p1,
        p2=rng.uniform(0.05, 0.95),
        s=rng.uniform(0.05, 0.95),
        q=q,
        w=rng.uniform(0.0, 2.0),
        G2=(
            rng.uniform(0.05, 0.95) * reformer_bound
            if leader_type is LeaderType.PARTISAN
            else 0.0
        ),
        G3=rng.uniform(0.05, 0.95) * reformer_bound,
        leader_type=leader_type,
        threshold_convention=threshold_convention,
        posterior_convention=posterior_convention,
    )


@pytest.fixture
def baseline() -> ModelParams:
    return BASELINE
