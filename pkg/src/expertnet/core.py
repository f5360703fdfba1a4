"""Domain types and expertise arithmetic for expert networks.

An expert is an integer-skill profile over m problem areas.  Local
("homophily") contacts link experts whose profiles differ by at most a
similarity degree in L1 norm; long-range ("heterophily") contacts are
sampled toward experts with some strictly superior skill.  Everything
here is immutable after construction so simulation workers can share
networks freely.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

UNIFIED = "unified"
DIVERSIFIED = "diversified"


def l1_norm(v: Sequence[int]) -> int:
    """Total ability of an expertise vector (entries are non-negative)."""
    return int(sum(v))


def expertise_distance(u: Sequence[int], w: Sequence[int]) -> int:
    """One-sided expertise distance from u to w.

    Sums, over all areas, how much w exceeds u.  Asymmetric in general:
    it measures w's superiority over u only.
    """
    if len(u) != len(w):
        raise ValueError(f"vector length mismatch: {len(u)} != {len(w)}")
    return int(sum(max(b - a, 0) for a, b in zip(u, w)))


def is_local_contact(u: Sequence[int], w: Sequence[int], delta: int) -> bool:
    """True iff the two profiles differ by at most delta in L1 norm.

    Operates on vectors only; callers must exclude expert self-links
    (two distinct experts may share a vector).
    """
    if len(u) != len(w):
        raise ValueError(f"vector length mismatch: {len(u)} != {len(w)}")
    return sum(abs(a - b) for a, b in zip(u, w)) <= delta


def dominates(u: Sequence[int], w: Sequence[int]) -> bool:
    """True iff w is componentwise <= u (w offers nothing above u)."""
    return all(b <= a for a, b in zip(u, w))


@dataclass(frozen=True)
class ModelConfig:
    """Parameters of one generated network.

    Unified: n experts in an h x (n/h) grid, m = 2, delta = 2.
    Diversified: one expert per lattice point of [1, lam]^m, delta = 1.
    """

    kind: str
    n: int
    m: int
    k: int
    r: float
    seed: int
    h: int | None = None
    lam: int | None = None
    no_long_range: bool = False

    def __post_init__(self) -> None:
        if self.kind == UNIFIED:
            if self.h is None or self.h < 1:
                raise ValueError("unified model requires h >= 1")
            if self.m != 2:
                raise ValueError("unified model requires m = 2")
            if self.n % self.h != 0:
                raise ValueError(f"n must be divisible by h (n={self.n}, h={self.h})")
            if self.n // self.h < 2:
                raise ValueError("unified model requires n/h >= 2")
        elif self.kind == DIVERSIFIED:
            if self.lam is None or self.lam < 2:
                raise ValueError("diversified model requires lam >= 2")
            if self.m < 1:
                raise ValueError("diversified model requires m >= 1")
            if self.n != self.lam**self.m:
                raise ValueError(f"n must equal lam**m (n={self.n}, lam={self.lam}, m={self.m})")
        else:
            raise ValueError(f"unknown model kind: {self.kind!r}")
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.r < 0:
            raise ValueError("r must be >= 0")

    @staticmethod
    def unified(
        n: int, h: int, k: int = 1, r: float = 0.0, seed: int = 0, no_long_range: bool = False
    ) -> "ModelConfig":
        return ModelConfig(
            kind=UNIFIED, n=n, m=2, k=k, r=r, seed=seed, h=h, no_long_range=no_long_range
        )

    @staticmethod
    def diversified(
        m: int, lam: int, k: int = 1, r: float = 0.0, seed: int = 0, no_long_range: bool = False
    ) -> "ModelConfig":
        return ModelConfig(
            kind=DIVERSIFIED, n=lam**m, m=m, k=k, r=r, seed=seed, lam=lam,
            no_long_range=no_long_range,
        )

    @property
    def delta(self) -> int:
        return 2 if self.kind == UNIFIED else 1

    @property
    def columns(self) -> int:
        """Column count n/h of the unified grid."""
        if self.kind != UNIFIED:
            raise ValueError("columns is defined for the unified model only")
        assert self.h is not None
        return self.n // self.h

    @property
    def max_skill(self) -> int:
        """Network-wide maximum per-area skill (also the max query difficulty)."""
        if self.kind == UNIFIED:
            return self.columns - 1
        assert self.lam is not None
        return self.lam


@dataclass(frozen=True)
class Query:
    """A problem in a single area with an integer difficulty level.

    Solvable by any expert whose skill in `area` is at least `tau`
    (anycast: the first such expert reached terminates routing).
    """

    area: int  # 1-based
    tau: int

    def __post_init__(self) -> None:
        if self.area < 1:
            raise ValueError("area must be >= 1")
        if self.tau < 1:
            raise ValueError("tau must be >= 1")


@dataclass
class ExpertNetwork:
    """An expert set with its deterministic substrate and sampled long-range contacts.

    Immutable after construction.  `experts[u]` is the expertise vector of
    expert u; ids are dense integers in construction order (row-major for
    unified, mixed-radix with the first area least significant for
    diversified).
    """

    config: ModelConfig
    experts: tuple[tuple[int, ...], ...]
    local_contacts: tuple[tuple[int, ...], ...]
    long_range: tuple[tuple[int, ...], ...]
    _skill_matrix: np.ndarray | None = field(default=None, repr=False, compare=False)

    @property
    def n(self) -> int:
        return len(self.experts)

    def contacts(self, u: int) -> tuple[int, ...]:
        """All contacts of u: local plus long-range (duplicates possible)."""
        return self.local_contacts[u] + self.long_range[u]

    def skill(self, u: int, area: int) -> int:
        """Skill of expert u in a 1-based area."""
        return self.experts[u][area - 1]

    def skill_matrix(self) -> np.ndarray:
        """(n, m) integer matrix of all expertise vectors (cached)."""
        if self._skill_matrix is None:
            self._skill_matrix = np.asarray(self.experts, dtype=np.int64)
        return self._skill_matrix


def candidate_set(u: int, net: ExpertNetwork) -> set[int]:
    """Potential long-range targets of u: experts not componentwise dominated by u.

    Equivalently all w with expertise_distance(u -> w) >= 1.
    """
    e = net.skill_matrix()
    mask = (e > e[u]).any(axis=1)
    mask[u] = False
    return set(np.nonzero(mask)[0].tolist())


def iter_experts(net: ExpertNetwork) -> Iterator[tuple[int, tuple[int, ...]]]:
    return enumerate(net.experts)
