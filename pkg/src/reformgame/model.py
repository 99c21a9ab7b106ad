"""Core types and closed-form primitives of the reform participation model.

The model describes a policy maker (partisan or non-partisan) who may call
on a population to join an institutional reform. The world is in one of
three states: change impossible (E1), change benefiting a minority (E2),
or change benefiting the majority (E3). A fraction ``theta`` of the
population are committed followers with zero participation cost; everyone
else draws a cost uniformly on ``[0, kappa_max]``. A fraction ``gamma``
of the population is reached by the call to action. The reform succeeds
with probability ``a * x**phi / phi`` where ``x`` is the participating
fraction.

Everything in this module is a pure function of its inputs and safe to
call concurrently; parameter objects are immutable after construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

__all__ = [
    "DomainError",
    "ParameterError",
    "LeaderType",
    "ThresholdConvention",
    "PosteriorConvention",
    "WorldState",
    "Beneficiary",
    "StateGainAllocation",
    "ModelParams",
    "CostReport",
    "GAIN_ALLOCATION",
    "gain_allocation",
    "success_probability",
    "info_acquisition_cost",
    "partisan_participation_cost",
    "posterior_change_state",
    "state_probabilities",
    "optimal_info_effort",
    "validate_params",
]

# Open-interval parameters (a, gamma, s) must stay at least this far from
# their endpoints; the endpoints are degenerate (total uncertainty or
# total certainty) and break the closed forms.
BOUNDARY_MARGIN = 1e-12


class DomainError(ValueError):
    """An operation was called outside its mathematical domain."""


class ParameterError(DomainError):
    """A model parameter set violates a named constraint.

    ``constraint`` identifies which rule failed (e.g. ``participant_gain_bound``)
    so callers can react to specific violations rather than parse messages.
    """

    def __init__(self, constraint: str, message: str):
        super().__init__(f"{constraint}: {message}")
        self.constraint = constraint


class LeaderType(str, Enum):
    """Preference type of the policy maker issuing the call to action."""

    PARTISAN = "partisan"
    NON_PARTISAN = "non-partisan"


class ThresholdConvention(str, Enum):
    """Which closed form of the participation threshold to report.

    PAPER_LITERAL keeps the published expression, whose bracket adds the
    ``(1 - theta)/kappa_max`` term. DERIVED_CONSISTENT subtracts it, which
    is the unique solution of the participation recursion and the form the
    fixed-point solver converges to.
    """

    PAPER_LITERAL = "paper-literal"
    DERIVED_CONSISTENT = "derived-consistent"


class PosteriorConvention(str, Enum):
    """How the majority updates beliefs after a partisan's call.

    PAPER evaluates the published conditional probability as written.
    BAYES applies Bayes' rule to the state priors with a partisan who
    calls in both change states; the two disagree (the published form
    returns the minority-state weight at s = 0).
    """

    PAPER = "paper"
    BAYES = "bayes"


class WorldState(Enum):
    """Underlying state of the world: who a successful reform can benefit."""

    E1 = "E1"  # change impossible, status quo persists
    E2 = "E2"  # change possible, gains reach the minority only
    E3 = "E3"  # change possible, gains reach the majority

    def __repr__(self) -> str:  # keeps result records compact
        return self.value


class Beneficiary(str, Enum):
    LOBBYISTS_ONLY = "lobbyists-only"
    MINORITY_PLUS_POLICY_MAKER = "minority-plus-policy-maker"
    MAJORITY_INCLUDING_MINORITY = "majority-including-minority"


@dataclass(frozen=True)
class StateGainAllocation:
    """Who captures the gains of a successful reform in a given state."""

    state: WorldState
    beneficiary: Beneficiary


GAIN_ALLOCATION: dict[WorldState, Beneficiary] = {
    WorldState.E1: Beneficiary.LOBBYISTS_ONLY,
    WorldState.E2: Beneficiary.MINORITY_PLUS_POLICY_MAKER,
    WorldState.E3: Beneficiary.MAJORITY_INCLUDING_MINORITY,
}


def gain_allocation(state: WorldState) -> StateGainAllocation:
    return StateGainAllocation(state=state, beneficiary=GAIN_ALLOCATION[state])


@dataclass(frozen=True)
class ModelParams:
    """All exogenous quantities of the model.

    Fields:
        a: certainty degree of the reform process, in (0, 1).
        phi: complementarity degree between participants, > 1.
        theta: share of committed followers (zero participation cost), in [0, 1].
        gamma: fraction of the population reached by the call, in (0, 1).
        kappa_max: upper bound of the uniform participation-cost support, > 0.
        Gamma_gain: a participant's gain from a successful reform, > 0.
        p1: probability that change is impossible (state E1), in [0, 1].
        p2: conditional branch probability separating E2 from E3, in [0, 1].
        s: perceived probability that the policy maker's preferences
           coincide with the majority's, in (0, 1).
        q: ability scale in the information-acquisition cost, > 0.
        w: ex-post participation cost scale, >= 0.
        G2, G3: the policy maker's gains from successful change in E2 / E3.
        leader_type: partisan or non-partisan.
        threshold_convention: closed form reported for the threshold.
        posterior_convention: belief-update rule after a partisan's call.

    Construction does not validate; call :func:`validate_params`.
    """

    a: float
    phi: float
    theta: float
    gamma: float
    kappa_max: float
    Gamma_gain: float
    p1: float
    p2: float
    s: float
    q: float
    w: float
    G2: float
    G3: float
    leader_type: LeaderType = LeaderType.NON_PARTISAN
    threshold_convention: ThresholdConvention = ThresholdConvention.DERIVED_CONSISTENT
    posterior_convention: PosteriorConvention = PosteriorConvention.PAPER


@dataclass(frozen=True)
class CostReport:
    """Standalone cost metrics attached to an equilibrium report.

    ``info_cost`` is the policy maker's information-acquisition cost at the
    optimal effort; ``partisan_cost`` is the ex-post participation cost of
    the follower core. Neither enters the equilibrium computation.
    """

    info_cost: float
    partisan_cost: float


def success_probability(a: float, phi: float, x: float) -> float:
    """Probability that the reform succeeds given participating fraction x.

    Equals ``a * x**phi / phi``, which lies in [0, a/phi]: increasing and
    convex in x, linear in a, decreasing in phi for x in (0, 1).
    """
    if not (0.0 < a < 1.0):
        raise DomainError(f"certainty degree a must lie strictly in (0, 1), got {a}")
    if not phi > 1.0:
        raise DomainError(f"complementarity degree phi must be > 1, got {phi}")
    if not (0.0 <= x <= 1.0):
        raise DomainError(f"participating fraction x must lie in [0, 1], got {x}")
    return a * x**phi / phi


def info_acquisition_cost(q: float, pi: float) -> float:
    """Cost of acquiring state information with probability pi: q * pi**2 / 2."""
    if not q > 0.0:
        raise DomainError(f"ability scale q must be > 0, got {q}")
    if not (0.0 <= pi <= 1.0):
        raise DomainError(f"acquisition probability pi must lie in [0, 1], got {pi}")
    return 0.5 * q * pi * pi


def partisan_participation_cost(w: float, theta: float) -> float:
    """Ex-post participation cost of the follower core: w * theta**2 / 2."""
    if w < 0.0:
        raise DomainError(f"cost scale w must be >= 0, got {w}")
    if not (0.0 <= theta <= 1.0):
        raise DomainError(f"follower share theta must lie in [0, 1], got {theta}")
    return 0.5 * w * theta * theta


def posterior_change_state(
    s: float,
    p2: float,
    convention: PosteriorConvention = PosteriorConvention.PAPER,
) -> float:
    """Majority's belief that the state is E3 after receiving the call.

    Under the PAPER convention this is ``p2 / (p2 + (1 - s) * (1 - p2))``,
    the published expression. Under BAYES it is
    ``(1 - p2) / ((1 - p2) + (1 - s) * p2)``: Bayes' rule over the state
    priors when a partisan calls in both change states and an aligned one
    (probability s) only in E3. Both return 1 at s = 1; at s = 0 the first
    returns p2 and the second 1 - p2.
    """
    if not (0.0 <= s <= 1.0):
        raise DomainError(f"alignment probability s must lie in [0, 1], got {s}")
    if not (0.0 <= p2 <= 1.0):
        raise DomainError(f"branch probability p2 must lie in [0, 1], got {p2}")
    if convention is PosteriorConvention.PAPER:
        denom = p2 + (1.0 - s) * (1.0 - p2)
        if denom == 0.0:
            raise DomainError("posterior undefined: s = 1 with p2 = 0 empties the denominator")
        return p2 / denom
    denom = (1.0 - p2) + (1.0 - s) * p2
    if denom == 0.0:
        raise DomainError("posterior undefined: s = 1 with p2 = 1 empties the denominator")
    return (1.0 - p2) / denom


def state_probabilities(p1: float, p2: float) -> tuple[float, float, float]:
    """Prior probabilities of (E1, E2, E3): (p1, (1-p1)*p2, (1-p1)*(1-p2))."""
    if not (0.0 <= p1 <= 1.0):
        raise DomainError(f"p1 must lie in [0, 1], got {p1}")
    if not (0.0 <= p2 <= 1.0):
        raise DomainError(f"p2 must lie in [0, 1], got {p2}")
    return (p1, (1.0 - p1) * p2, (1.0 - p1) * (1.0 - p2))


def optimal_info_effort(params: ModelParams, state: WorldState) -> float:
    """Optimal probability of acquiring information about a change state.

    The policy maker's expected benefit from knowing the state is
    ``(1 - p1) * a * gamma * G_i`` for the gain ``G_i`` attached to the
    state; against the quadratic acquisition cost the maximizer is
    ``min(1, (1 - p1) * a * gamma * G_i / q)``. Under the reformer gain
    bound the interior solution is strictly below 1.
    """
    if params.q <= 0.0:
        raise DomainError(f"ability scale q must be > 0, got {params.q}")
    if state is WorldState.E1:
        raise DomainError("no reform gain is defined for the status-quo state")
    gain = params.G2 if state is WorldState.E2 else params.G3
    if gain == 0.0:
        return 0.0
    return min(1.0, (1.0 - params.p1) * params.a * params.gamma * gain / params.q)


def _require_interval(
    name: str, value: float, lo: float, hi: float, open_ends: bool
) -> None:
    if not isinstance(value, (int, float)) or isinstance(value, bool) or not math.isfinite(value):
        raise ParameterError("field_range", f"{name} must be a finite number, got {value!r}")
    if open_ends:
        if not (lo + BOUNDARY_MARGIN <= value <= hi - BOUNDARY_MARGIN):
            raise ParameterError(
                "field_range", f"{name} must lie strictly inside ({lo}, {hi}), got {value}"
            )
    elif not (lo <= value <= hi):
        raise ParameterError("field_range", f"{name} must lie in [{lo}, {hi}], got {value}")


def validate_params(params: ModelParams) -> ModelParams:
    """Check every model invariant and return the parameters unchanged.

    Raises :class:`ParameterError` with a distinct ``constraint`` name for:
    out-of-interval fields (``field_range``), a leader type inconsistent
    with its gain profile (``leader_gain_profile``), a participant gain too
    large for partial participation (``participant_gain_bound``), and a
    policy-maker gain breaking the interior information-effort solution
    (``reformer_gain_bound``). Comparisons are exact; the bounds are strict.
    """
    _require_interval("a", params.a, 0.0, 1.0, open_ends=True)
    _require_interval("gamma", params.gamma, 0.0, 1.0, open_ends=True)
    _require_interval("s", params.s, 0.0, 1.0, open_ends=True)
    _require_interval("theta", params.theta, 0.0, 1.0, open_ends=False)
    _require_interval("p1", params.p1, 0.0, 1.0, open_ends=False)
    _require_interval("p2", params.p2, 0.0, 1.0, open_ends=False)
    if not params.phi > 1.0:
        raise ParameterError("field_range", f"phi must be > 1, got {params.phi}")
    for name, value in (
        ("kappa_max", params.kappa_max),
        ("Gamma_gain", params.Gamma_gain),
        ("q", params.q),
    ):
        if not value > 0.0:
            raise ParameterError("field_range", f"{name} must be > 0, got {value}")
    if params.w < 0.0:
        raise ParameterError("field_range", f"w must be >= 0, got {params.w}")
    for name, value in (("G2", params.G2), ("G3", params.G3)):
        if value < 0.0:
            raise ParameterError("field_range", f"{name} must be >= 0, got {value}")

    if params.leader_type is LeaderType.NON_PARTISAN:
        if params.G2 != 0.0 or not params.G3 > 0.0:
            raise ParameterError(
                "leader_gain_profile",
                f"a non-partisan policy maker requires G2 = 0 and G3 > 0, "
                f"got G2 = {params.G2}, G3 = {params.G3}",
            )
    else:
        if not (params.G2 > 0.0 and params.G3 > 0.0):
            raise ParameterError(
                "leader_gain_profile",
                f"a partisan policy maker requires G2 > 0 and G3 > 0, "
                f"got G2 = {params.G2}, G3 = {params.G3}",
            )

    participant_bound = params.kappa_max / (params.a * params.gamma)
    if not params.Gamma_gain < participant_bound:
        raise ParameterError(
            "participant_gain_bound",
            f"Gamma_gain must be < kappa_max/(a*gamma) = {participant_bound}, "
            f"got {params.Gamma_gain}",
        )

    if params.p1 < 1.0:
        reformer_bound = params.q / ((1.0 - params.p1) * params.a * params.gamma)
        for name, gain in (("G2", params.G2), ("G3", params.G3)):
            if gain > 0.0 and not gain < reformer_bound:
                raise ParameterError(
                    "reformer_gain_bound",
                    f"{name} must be < q/((1-p1)*a*gamma) = {reformer_bound}, "
                    f"got {gain}",
                )

    return params
