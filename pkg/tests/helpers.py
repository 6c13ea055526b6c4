"""Shared fixtures: canonical instances and a seeded random-instance source."""

from __future__ import annotations

import random
import string
from fractions import Fraction

from coopetition import AuctionInstance

F = Fraction


def make_instance(values: dict[str, object], ads: list[list[str]]) -> AuctionInstance:
    return AuctionInstance.build(
        {name: F(value) for name, value in values.items()}, ads
    )


# {(A:2,B:2),(E:3)}: two cooperating bidders against a stronger single bidder.
def ab_e() -> AuctionInstance:
    return make_instance({"A": 2, "B": 2, "E": 3}, [["A", "B"], ["E"]])


# {(A:1,B:1,C:1,D:1),(E:2.9)}: four riders whose VCG payments all collapse to 0.
def four_ones() -> AuctionInstance:
    return make_instance(
        {"A": 1, "B": 1, "C": 1, "D": 1, "E": "2.9"},
        [["A", "B", "C", "D"], ["E"]],
    )


# {(A:1,B:1,C:1),(A:1,D:1),(B:1,E:1)}: overlapping rivals, a 1-parameter
# equilibrium family, revenue range (1, 2).
def triangle() -> AuctionInstance:
    return make_instance(
        {"A": 1, "B": 1, "C": 1, "D": 1, "E": 1},
        [["A", "B", "C"], ["A", "D"], ["B", "E"]],
    )


# {(A:100,B:100),(C:99)}: the (x, 99-x) equilibrium segment.
def hundreds() -> AuctionInstance:
    return make_instance({"A": 100, "B": 100, "C": 99}, [["A", "B"], ["C"]])


def single_ad() -> AuctionInstance:
    return make_instance({"A": 5}, [["A"]])


_DENOMINATORS = (1, 1, 2, 3, 4, 5, 8, 10)


def random_value(rng: random.Random, high: int = 40) -> Fraction:
    return Fraction(rng.randint(0, high), rng.choice(_DENOMINATORS))


def random_instance(
    rng: random.Random,
    max_n: int = 8,
    max_m: int = 6,
    value_pool: list[Fraction] | None = None,
) -> AuctionInstance:
    """A valid instance: distinct non-empty ads that jointly cover everyone."""
    for _ in range(1000):
        n = rng.randint(1, max_n)
        names = list(string.ascii_uppercase[:n])
        if value_pool is None:
            values = {name: random_value(rng) for name in names}
        else:
            values = {name: rng.choice(value_pool) for name in names}
        m = rng.randint(1, max_m)
        ads: list[frozenset[str]] = []
        for _ in range(m):
            size = rng.randint(1, n)
            ads.append(frozenset(rng.sample(names, size)))
        covered = set().union(*ads)
        for name in names:
            if name not in covered:
                j = rng.randrange(len(ads))
                ads[j] = ads[j] | {name}
        if len(set(ads)) != len(ads):
            continue
        return AuctionInstance.build(values, [sorted(ad) for ad in ads])
    raise AssertionError("random instance generation kept colliding")
