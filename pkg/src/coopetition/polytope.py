"""The cooperative envy-free bid polytope and its equilibrium structure.

For the efficient winning ad T, a bid vector over T's members is cooperative
envy-free (CEF) when, against every rival ad, the members of T outside that
rival collectively outbid the rival's outside value: for each rival ad S,

    sum of bids over (T minus S)  >=  sum of values over (S minus T).

Together with individual rationality (0 <= bid <= value) this carves a
polytope out of the box of member bids. A profile in the polytope is a
first-price equilibrium exactly when no member with a positive bid could
lower it and keep winning, i.e. every such member is pinned by some rival ad
it does not belong to whose total ties the winner's. Pinned-everywhere points
are precisely the Pareto-minimal points of the polytope, which is why
minimizing any strictly positive linear objective over it lands on one.

Non-winners take no action in this analysis: their bids are fixed at their
values, the standing threat level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from .mechanisms import efficient_winner
from .model import AuctionInstance, BidProfile, check_bids, format_scalar
from .simplex import solve_min, solve_square_system


@dataclass(frozen=True)
class CefConstraint:
    """One rival ad's envy-free row: sum of bids over `bidders` >= rhs."""

    ad: int
    bidders: tuple[int, ...]
    rhs: Fraction

    def slack(self, bids: Sequence[Fraction]) -> Fraction:
        return sum((bids[i] for i in self.bidders), Fraction(0)) - self.rhs


@dataclass(frozen=True)
class CefPolytope:
    """CEF + IR + non-negativity constraints over the winner's member bids."""

    instance: AuctionInstance
    winner: int
    constraints: tuple[CefConstraint, ...]

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(sorted(self.instance.members(self.winner)))


@dataclass(frozen=True)
class EquilibriumCertificate:
    """Why nobody lowers: each member is at zero (None) or names a tying
    rival ad it does not belong to."""

    witnesses: Mapping[int, int | None]


@dataclass(frozen=True)
class EquilibriumResult:
    ok: bool
    certificate: EquilibriumCertificate | None
    failure: str | None

    def __bool__(self) -> bool:
        return self.ok


def build_polytope(instance: AuctionInstance) -> CefPolytope:
    """Collect the envy-free rows for the efficient winner.

    Rival ads containing all of the winner's members yield the vacuous row
    0 >= 0 (efficiency forces their outside value to zero) and are dropped.
    """
    winner = efficient_winner(instance)
    winner_members = instance.members(winner)
    constraints = []
    for j in range(instance.m):
        if j == winner:
            continue
        rival = instance.members(j)
        bidders = tuple(sorted(winner_members - rival))
        rhs = sum((instance.values[i] for i in rival - winner_members), Fraction(0))
        if not bidders:
            assert rhs == 0, "an ad covering the winner cannot out-value it"
            continue
        constraints.append(CefConstraint(ad=j, bidders=bidders, rhs=rhs))
    return CefPolytope(instance=instance, winner=winner, constraints=tuple(constraints))


def canonical_bids(polytope: CefPolytope, bids: Sequence[Fraction]) -> BidProfile:
    """Replace non-winner bids with their values; member bids pass through."""
    instance = polytope.instance
    profile = check_bids(instance, bids)
    members = instance.members(polytope.winner)
    return tuple(
        profile[i] if i in members else instance.values[i] for i in range(instance.n)
    )


def is_ir(instance: AuctionInstance, bids: Sequence[Fraction]) -> bool:
    """Every bid within [0, value]."""
    return first_ir_violation(instance, bids) is None


def first_ir_violation(instance: AuctionInstance, bids: Sequence[Fraction]) -> int | None:
    profile = check_bids(instance, bids)
    for i, bid in enumerate(profile):
        if bid < 0 or bid > instance.values[i]:
            return i
    return None


def is_cef(polytope: CefPolytope, bids: Sequence[Fraction]) -> bool:
    """Every envy-free row satisfied (non-winner bids are irrelevant here)."""
    return first_cef_violation(polytope, bids) is None


def first_cef_violation(
    polytope: CefPolytope, bids: Sequence[Fraction]
) -> CefConstraint | None:
    profile = check_bids(polytope.instance, bids)
    for constraint in polytope.constraints:
        if constraint.slack(profile) < 0:
            return constraint
    return None


def is_equilibrium(polytope: CefPolytope, bids: Sequence[Fraction]) -> EquilibriumResult:
    """Check the no-unilateral-lowering condition and produce a certificate.

    Non-winner bids are canonicalized to their values first. Fails fast with
    a reason when the profile is not IR or not CEF; otherwise every member
    with a positive bid must be pinned by a tying rival ad that excludes it.
    """
    instance = polytope.instance
    profile = canonical_bids(polytope, bids)
    violator = first_ir_violation(instance, profile)
    if violator is not None:
        name = instance.names[violator]
        return EquilibriumResult(
            ok=False,
            certificate=None,
            failure=(
                f"not IR: {name!r} bids {format_scalar(profile[violator])}, outside "
                f"[0, {format_scalar(instance.values[violator])}]"
            ),
        )
    violated = first_cef_violation(polytope, profile)
    if violated is not None:
        return EquilibriumResult(
            ok=False,
            certificate=None,
            failure=(
                f"not CEF: against {instance.label(violated.ad)} the uncovered members "
                f"bid {format_scalar(violated.slack(profile) + violated.rhs)}, below the "
                f"outside value {format_scalar(violated.rhs)}"
            ),
        )
    witnesses: dict[int, int | None] = {}
    for k in polytope.members:
        if profile[k] == 0:
            witnesses[k] = None
            continue
        witness = next(
            (
                c.ad
                for c in polytope.constraints
                if k in c.bidders and c.slack(profile) == 0
            ),
            None,
        )
        if witness is None:
            return EquilibriumResult(
                ok=False,
                certificate=None,
                failure=(
                    f"{instance.names[k]!r} bids {format_scalar(profile[k])} but no rival "
                    f"ad excluding it ties the winner: lowering would be profitable"
                ),
            )
        witnesses[k] = witness
    return EquilibriumResult(
        ok=True, certificate=EquilibriumCertificate(witnesses=witnesses), failure=None
    )


def sample_pareto_equilibrium(
    polytope: CefPolytope, weights: Sequence[Fraction]
) -> BidProfile:
    """Minimize a strictly positive weighting of member bids over the polytope.

    Any such optimum is Pareto-minimal, hence an equilibrium; the result is
    re-verified before returning. Weights are given per winner member in
    advertiser order.
    """
    members = polytope.members
    if len(weights) != len(members):
        raise ValueError(
            f"expected {len(members)} weights (one per winning member), got {len(weights)}"
        )
    weights = [Fraction(w) for w in weights]
    if any(w <= 0 for w in weights):
        raise ValueError("weights must be strictly positive")
    position = {member: p for p, member in enumerate(members)}
    dimension = len(members)
    ge_rows = []
    for constraint in polytope.constraints:
        coeffs = [Fraction(0)] * dimension
        for i in constraint.bidders:
            coeffs[position[i]] = Fraction(1)
        ge_rows.append((coeffs, constraint.rhs))
    le_rows = []
    for p, member in enumerate(members):
        coeffs = [Fraction(0)] * dimension
        coeffs[p] = Fraction(1)
        le_rows.append((coeffs, polytope.instance.values[member]))
    _, solution = solve_min(weights, ge=ge_rows, le=le_rows)
    bids = list(polytope.instance.values)
    for p, member in enumerate(members):
        bids[member] = solution[p]
    profile = tuple(bids)
    verdict = is_equilibrium(polytope, profile)
    if not verdict.ok:
        raise RuntimeError(f"optimizer left the equilibrium set: {verdict.failure}")
    return profile


def enumerate_vertices(
    polytope: CefPolytope, combination_budget: int = 500_000
) -> list[tuple[Fraction, ...]]:
    """All vertices of the polytope, as member-bid vectors in member order.

    Brute force over d-subsets of tight constraints; intended for desk-scale
    instances. Envy-free rows with rhs 0 are implied generators (tight only
    when each of their coordinates is zero) and are skipped.
    """
    members = polytope.members
    dimension = len(members)
    position = {member: p for p, member in enumerate(members)}
    uppers = [polytope.instance.values[member] for member in members]

    rows: list[tuple[tuple[Fraction, ...], Fraction]] = []
    for constraint in polytope.constraints:
        if constraint.rhs == 0:
            continue
        coeffs = [Fraction(0)] * dimension
        for i in constraint.bidders:
            coeffs[position[i]] = Fraction(1)
        rows.append((tuple(coeffs), constraint.rhs))
    for p in range(dimension):
        unit = tuple(
            Fraction(1) if q == p else Fraction(0) for q in range(dimension)
        )
        rows.append((unit, Fraction(0)))
        if uppers[p] != 0:
            rows.append((unit, uppers[p]))
    rows = list(dict.fromkeys(rows))

    total = math.comb(len(rows), dimension)
    if total > combination_budget:
        raise RuntimeError(
            f"vertex enumeration needs {total} constraint combinations, "
            f"budget is {combination_budget}"
        )

    found: set[tuple[Fraction, ...]] = set()
    for chosen in combinations(rows, dimension):
        solution = solve_square_system([row[0] for row in chosen], [row[1] for row in chosen])
        if solution is None:
            continue
        if any(x < 0 or x > u for x, u in zip(solution, uppers)):
            continue
        point = tuple(solution)
        if all(
            sum((point[position[i]] for i in c.bidders), Fraction(0)) >= c.rhs
            for c in polytope.constraints
        ):
            found.add(point)
    return sorted(found)


def revenue_range(polytope: CefPolytope) -> tuple[Fraction, Fraction]:
    """Smallest and largest winner revenue over the equilibrium set.

    The minimum comes from the exact LP with unit weights; the maximum from
    polytope vertices filtered down to equilibria (the equilibrium set is a
    union of faces, so a linear maximum over it sits at a polytope vertex).
    """
    members = polytope.members
    cheapest = sample_pareto_equilibrium(polytope, [Fraction(1)] * len(members))
    low = sum((cheapest[i] for i in members), Fraction(0))
    high = low
    instance = polytope.instance
    for vertex in enumerate_vertices(polytope):
        bids = list(instance.values)
        for p, member in enumerate(members):
            bids[member] = vertex[p]
        if is_equilibrium(polytope, tuple(bids)).ok:
            high = max(high, sum(vertex, Fraction(0)))
    return low, high
