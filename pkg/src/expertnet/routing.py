"""Greedy decentralized search, with and without difficulty-misreading errors.

Each holder who cannot solve the query forwards it to the contact
maximizing min(e_i - tau, 0), ties broken by largest skill in the query
area and then by smallest id.  Because that score is non-decreasing in
the contact's skill and the first tie-break is the skill itself, the
chosen hop is always the contact with the maximum skill in the query
area, regardless of the (true or misread) difficulty.  `area_successors`
exploits this for bulk simulation; `route` stays faithful to the
step-by-step definition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import NormalDist

import numpy as np

from .core import ExpertNetwork, Query

RESOLVED = "resolved"
ABORTED_HOP_CAP = "aborted_hop_cap"

_STD_NORMAL = NormalDist()


@dataclass(frozen=True)
class ErrorModel:
    """Difficulty-misreading model: an unqualified holder with skill e in
    the query area perceives the difficulty as a sample from a Gaussian
    with mean tau and standard deviation c * (tau - e), truncated below
    at e.  c = 0 is exact mode."""

    c: float = 0.0

    def __post_init__(self) -> None:
        if self.c < 0:
            raise ValueError("c must be >= 0")


@dataclass(frozen=True)
class RouteResult:
    path: tuple[int, ...]
    hops: int
    status: str


def next_hop(u: int, query: Query, net: ExpertNetwork, tau_eff: int) -> int:
    """Best next holder among u's contacts for perceived difficulty tau_eff."""
    contacts = net.contacts(u)
    if not contacts:
        raise RuntimeError(f"expert {u} has no contacts")
    area = query.area - 1
    best_key = None
    best = -1
    for w in contacts:
        s = net.experts[w][area]
        score = min(s - tau_eff, 0)
        key = (score, s, -w)
        if best_key is None or key > best_key:
            best_key = key
            best = w
    return best


def sample_truncated_normal(
    mean: float, std: float, lower: float, rng: np.random.Generator
) -> float:
    """One draw from N(mean, std) conditioned on being >= lower, by inverse CDF."""
    if std <= 0:
        raise ValueError("std must be > 0")
    p_lower = _STD_NORMAL.cdf((lower - mean) / std)
    p = p_lower + rng.random() * (1.0 - p_lower)
    p = min(max(p, 1e-300), 1.0 - 1e-16)  # inv_cdf rejects exact 0/1
    return mean + std * _STD_NORMAL.inv_cdf(p)


def sample_misread_tau(skill: int, tau: int, c: float, rng: np.random.Generator) -> int:
    """Perceived difficulty of a holder with the given skill (skill < tau).

    Rounded half away from zero to keep score arithmetic integral; never
    below the holder's own skill.
    """
    if c < 0:
        raise ValueError("c must be >= 0")
    if c == 0:
        return tau
    x = sample_truncated_normal(mean=tau, std=c * (tau - skill), lower=skill, rng=rng)
    return math.floor(x + 0.5)


def route(
    query: Query,
    start: int,
    net: ExpertNetwork,
    error: ErrorModel | None = None,
    rng: np.random.Generator | None = None,
) -> RouteResult:
    """Run decentralized search from `start` until a qualified expert holds the query.

    The loop exit always tests the true difficulty; under an error model
    each unqualified holder misreads the difficulty afresh and forwards
    accordingly.  With c = 0 no randomness is consumed.  Hop counts are
    capped at n as defense against substrates violating the progress
    guarantee.
    """
    c = error.c if error is not None else 0.0
    if c > 0 and rng is None:
        raise ValueError("error mode requires an rng")
    area, tau = query.area, query.tau
    u = start
    path = [u]
    while net.skill(u, area) < tau:
        if len(path) - 1 >= net.n:
            return RouteResult(tuple(path), len(path) - 1, ABORTED_HOP_CAP)
        tau_eff = tau
        if c > 0:
            tau_eff = sample_misread_tau(net.skill(u, area), tau, c, rng)
        u = next_hop(u, query, net, tau_eff)
        path.append(u)
    return RouteResult(tuple(path), len(path) - 1, RESOLVED)


def area_successors(net: ExpertNetwork, area: int) -> np.ndarray:
    """next_hop of every expert for queries in `area`, as an id array.

    Well-defined without a difficulty because the greedy rule always picks
    the maximum-skill contact (smallest id on ties); -1 marks experts with
    no contacts (cannot occur in the two generated models).
    """
    a = area - 1
    succ = np.full(net.n, -1, dtype=np.int64)
    for u in range(net.n):
        best_s = -1
        best = -1
        for w in net.contacts(u):
            s = net.experts[w][a]
            if s > best_s or (s == best_s and w < best):
                best_s = s
                best = w
        succ[u] = best
    return succ
