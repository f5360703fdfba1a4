"""Network builders and the long-range contact sampler.

Two substrates are supported:

* unified: n experts in an h x (n/h) grid; all experts in a column share
  one vector [j, (n/h)-1-j], so every expert has the same total ability.
  Local contacts (similarity degree 2) are exactly the experts in the
  same or adjacent columns.
* diversified: one expert per lattice point of [1, lam]^m; local contacts
  (similarity degree 1) form the m-dimensional grid.

On top of either substrate, each expert draws up to k long-range contacts
from her candidate set with probability proportional to the inverse r-th
power of the expertise distance.  Builders are deterministic given
(config, seed).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .core import DIVERSIFIED, UNIFIED, ExpertNetwork, ModelConfig


class InversePowerSampler:
    """Seeded categorical sampler over each expert's candidate set.

    Candidate w of expert u is drawn with probability proportional to
    d(u -> w)^(-r), where d is the one-sided expertise distance.  Weights
    and cumulative tables are precomputed once per (expert set, r) and can
    serve any number of network realizations.
    """

    def __init__(self, skills: np.ndarray, r: float):
        if r < 0:
            raise ValueError("r must be >= 0")
        self.r = float(r)
        self.n = len(skills)
        self.candidates: list[np.ndarray] = []
        self.cdf: list[np.ndarray] = []
        skills = np.asarray(skills, dtype=np.int64)
        for u in range(self.n):
            d = np.maximum(skills - skills[u], 0).sum(axis=1)
            ids = np.nonzero(d > 0)[0]  # d = 0 iff componentwise dominated (incl. self)
            if len(ids) == 0:
                self.candidates.append(ids)
                self.cdf.append(np.empty(0))
                continue
            w = d[ids].astype(np.float64) ** (-self.r)  # d >= 1, exact 1.0 weights at r = 0
            c = np.cumsum(w)
            self.candidates.append(ids.astype(np.int64))
            self.cdf.append(c / c[-1])

    def probabilities(self, u: int) -> dict[int, float]:
        """Exact per-candidate probabilities for expert u."""
        cdf = self.cdf[u]
        if len(cdf) == 0:
            return {}
        p = np.diff(cdf, prepend=0.0)
        return {int(w): float(q) for w, q in zip(self.candidates[u], p)}

    def draw(self, u: int, k: int, rng: np.random.Generator) -> tuple[int, ...]:
        """k independent draws for expert u (empty when u has no candidates)."""
        ids = self.candidates[u]
        if len(ids) == 0:
            return ()
        idx = np.searchsorted(self.cdf[u], rng.random(k), side="right")
        idx = np.minimum(idx, len(ids) - 1)  # guard cdf[-1] rounding below 1.0
        return tuple(int(w) for w in ids[idx])

    def draw_all(self, k: int, rng: np.random.Generator) -> tuple[tuple[int, ...], ...]:
        """One long-range realization: k draws per expert, in id order."""
        return tuple(self.draw(u, k, rng) for u in range(self.n))


def unified_vectors(n: int, h: int) -> tuple[tuple[int, int], ...]:
    """Expertise vectors in id order (id = row * (n/h) + column)."""
    cols = n // h
    return tuple((j, cols - 1 - j) for _ in range(h) for j in range(cols))


def _unified_substrate(n: int, h: int) -> tuple[tuple[int, ...], ...]:
    cols = n // h
    col_ids = [tuple(row * cols + j for row in range(h)) for j in range(cols)]
    local = []
    for row in range(h):
        for j in range(cols):
            u = row * cols + j
            members: list[int] = []
            for jj in (j - 1, j, j + 1):
                if 0 <= jj < cols:
                    members.extend(col_ids[jj])
            members.remove(u)
            local.append(tuple(sorted(members)))
    return tuple(local)


def diversified_vectors(m: int, lam: int) -> tuple[tuple[int, ...], ...]:
    """Lattice points of [1, lam]^m in id order (first area least significant)."""
    vectors = []
    for u in range(lam**m):
        v, x = [], u
        for _ in range(m):
            v.append(x % lam + 1)
            x //= lam
        vectors.append(tuple(v))
    return tuple(vectors)


def _diversified_substrate(m: int, lam: int) -> tuple[tuple[int, ...], ...]:
    n = lam**m
    local = []
    for u in range(n):
        members = []
        x, stride = u, 1
        for _ in range(m):
            digit = x % lam
            if digit > 0:
                members.append(u - stride)
            if digit < lam - 1:
                members.append(u + stride)
            x //= lam
            stride *= lam
        local.append(tuple(sorted(members)))
    return tuple(local)


def build_substrate(config: ModelConfig) -> ExpertNetwork:
    """Deterministic substrate (no long-range contacts yet)."""
    if config.kind == UNIFIED:
        assert config.h is not None
        experts = unified_vectors(config.n, config.h)
        local = _unified_substrate(config.n, config.h)
    else:
        assert config.lam is not None
        experts = diversified_vectors(config.m, config.lam)
        local = _diversified_substrate(config.m, config.lam)
    empty = tuple(() for _ in experts)
    return ExpertNetwork(config=config, experts=experts, local_contacts=local, long_range=empty)


def attach_long_range(
    substrate: ExpertNetwork, seed: int, sampler: InversePowerSampler | None = None
) -> ExpertNetwork:
    """A fresh long-range realization on an existing substrate.

    All experts draw from a single seeded stream in id order, so the
    result is reproducible across runs and platforms.
    """
    config = substrate.config
    if config.no_long_range:
        return substrate
    if sampler is None:
        sampler = InversePowerSampler(substrate.skill_matrix(), config.r)
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    long_range = sampler.draw_all(config.k, rng)
    return ExpertNetwork(
        config=replace(config, seed=seed),
        experts=substrate.experts,
        local_contacts=substrate.local_contacts,
        long_range=long_range,
    )


def build_network(config: ModelConfig) -> ExpertNetwork:
    return attach_long_range(build_substrate(config), config.seed)


def build_unified(
    n: int, h: int, seed: int = 0, k: int = 1, r: float = 0.0, no_long_range: bool = False
) -> ExpertNetwork:
    return build_network(ModelConfig.unified(n, h, k=k, r=r, seed=seed, no_long_range=no_long_range))


def build_diversified(
    m: int, lam: int, seed: int = 0, k: int = 1, r: float = 0.0, no_long_range: bool = False
) -> ExpertNetwork:
    if lam**m > 10**7:
        raise ValueError(f"lam**m = {lam}**{m} is too large to materialize")
    return build_network(
        ModelConfig.diversified(m, lam, k=k, r=r, seed=seed, no_long_range=no_long_range)
    )


def sample_long_range(
    u: int, net: ExpertNetwork, k: int, r: float, rng: np.random.Generator
) -> tuple[int, ...]:
    """k inverse r-th power draws for one expert (empty if no candidates).

    Duplicates and overlaps with local contacts are retained; k is a
    maximum on distinct long-range contacts, not a guarantee.
    """
    sampler = InversePowerSampler(net.skill_matrix(), r)
    return sampler.draw(u, k, rng)


# ---------------------------------------------------------------------------
# Total-ability distribution of the diversified model
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AbilityHistogram:
    """Expert count per total ability in a [1, lam]^m lattice."""

    counts: dict[int, int]
    m: int
    lam: int


def ability_count(phi: int, m: int, lam: int) -> int:
    """Number of lattice points of [1, lam]^m with coordinate sum phi.

    Inclusion-exclusion over coordinates forced above lam; exact integer
    arithmetic throughout.
    """
    if m < 1 or lam < 1:
        raise ValueError("require m >= 1 and lam >= 1")
    if phi < m or phi > m * lam:
        return 0
    total = 0
    for q in range(min(m, (phi - m) // lam) + 1):
        total += (-1) ** q * math.comb(m, q) * math.comb(phi - 1 - q * lam, m - 1)
    return total


def ability_histogram(m: int, lam: int) -> AbilityHistogram:
    counts = {phi: ability_count(phi, m, lam) for phi in range(m, m * lam + 1)}
    return AbilityHistogram(counts=counts, m=m, lam=lam)


def expected_ability(m: int, n: int) -> float:
    """Mean total ability over the diversified expert set, (m + m * n^(1/m)) / 2.

    n must be a perfect m-th power; the root is recovered exactly so the
    result matches enumeration with no floating error.
    """
    lam = round(n ** (1.0 / m))
    for cand in (lam - 1, lam, lam + 1):
        if cand >= 1 and cand**m == n:
            return (m + m * cand) / 2
    raise ValueError(f"n = {n} is not a perfect {m}-th power")


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def network_to_dict(net: ExpertNetwork) -> dict:
    cfg = net.config
    return {
        "config": {
            "kind": cfg.kind,
            "n": cfg.n,
            "h": cfg.h,
            "m": cfg.m,
            "lam": cfg.lam,
            "k": cfg.k,
            "r": cfg.r,
            "seed": cfg.seed,
            "no_long_range": cfg.no_long_range,
        },
        "experts": [list(v) for v in net.experts],
        "long_range": [list(ws) for ws in net.long_range],
    }


def network_from_dict(data: dict) -> ExpertNetwork:
    """Rebuild a network from its JSON form.

    Local contacts are recomputed from the config (they are a
    deterministic function of it); the stored expert vectors are checked
    against the rebuilt substrate.
    """
    c = data["config"]
    config = ModelConfig(
        kind=c["kind"], n=c["n"], m=c["m"], k=c["k"], r=c["r"], seed=c["seed"],
        h=c.get("h"), lam=c.get("lam"), no_long_range=c.get("no_long_range", False),
    )
    substrate = build_substrate(config)
    experts = tuple(tuple(v) for v in data["experts"])
    if experts != substrate.experts:
        raise ValueError("stored expert vectors do not match the config's substrate")
    long_range = tuple(tuple(ws) for ws in data["long_range"])
    if len(long_range) != config.n:
        raise ValueError("long_range must list one entry per expert")
    if any(len(ws) > config.k for ws in long_range):
        raise ValueError("an expert exceeds k long-range contacts")
    return ExpertNetwork(
        config=config, experts=experts,
        local_contacts=substrate.local_contacts, long_range=long_range,
    )


def save_network(net: ExpertNetwork, path: str | Path) -> None:
    Path(path).write_text(json.dumps(network_to_dict(net)) + "\n", encoding="utf-8")


def load_network(path: str | Path) -> ExpertNetwork:
    return network_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
