"""Winner determination and the two baseline payment rules.

Ties in total value break toward the lowest ad id, everywhere, so repeated
runs are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .model import AuctionInstance, Outcome, check_bids, settle, total_bid, total_value


@dataclass(frozen=True)
class VcgResult:
    """Truthful-values clearing: winner, per-advertiser payments, revenue."""

    winner: int
    payments: tuple[Fraction, ...]
    revenue: Fraction

    def __post_init__(self) -> None:
        if any(p < 0 for p in self.payments):
            raise ValueError("payments must be non-negative")
        if sum(self.payments, Fraction(0)) != self.revenue:
            raise ValueError("revenue must equal the sum of payments")


def efficient_winner(instance: AuctionInstance) -> int:
    """The ad with the largest total member value; lowest id wins ties."""
    best = 0
    best_value = total_value(instance, 0)
    for j in range(1, instance.m):
        value = total_value(instance, j)
        if value > best_value:
            best, best_value = j, value
    return best


def welfare_ties(instance: AuctionInstance) -> tuple[int, ...]:
    """All ads achieving the maximum total value (length > 1 means a tie)."""
    top = total_value(instance, efficient_winner(instance))
    return tuple(j for j in range(instance.m) if total_value(instance, j) == top)


def vcg(instance: AuctionInstance) -> VcgResult:
    """Charge each winning member the externality it imposes.

    A member of the winning ad pays the shortfall between the best total the
    other advertisers could reach without it and what they actually get; when
    the winning ad faces no real competition everyone pays zero, so two
    advertisers sharing an ad can ride each other's values all the way to
    free clicks.
    """
    winner = efficient_winner(instance)
    welfare = total_value(instance, winner)
    payments = [Fraction(0)] * instance.n
    for i in instance.members(winner):
        best_without = max(
            sum((instance.values[k] for k in instance.members(j) if k != i), Fraction(0))
            for j in range(instance.m)
        )
        shortfall = best_without - (welfare - instance.values[i])
        payments[i] = max(Fraction(0), shortfall)
    payments_t = tuple(payments)
    return VcgResult(
        winner=winner, payments=payments_t, revenue=sum(payments_t, Fraction(0))
    )


def first_price_clear(instance: AuctionInstance, bids: Sequence[Fraction]) -> Outcome:
    """Show the ad with the highest total bid; members pay their own bids."""
    profile = check_bids(instance, bids)
    best = 0
    best_total = total_bid(instance, profile, 0)
    for j in range(1, instance.m):
        bid_total = total_bid(instance, profile, j)
        if bid_total > best_total:
            best, best_total = j, bid_total
    return settle(instance, best, profile)


def revenue_lower_bound(instance: AuctionInstance) -> Fraction:
    """Outside pressure on the winner: the best rival total among advertisers
    that are not in the winning ad. Zero when there is no rival ad."""
    winner = efficient_winner(instance)
    winner_members = instance.members(winner)
    bound = Fraction(0)
    for j in range(instance.m):
        if j == winner:
            continue
        outside = sum(
            (instance.values[i] for i in instance.members(j) if i not in winner_members),
            Fraction(0),
        )
        bound = max(bound, outside)
    return bound
