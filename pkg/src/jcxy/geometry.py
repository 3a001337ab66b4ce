"""Coupling maps for the five molecule geometries.

Sites live on a 1-D lattice with unit nearest-neighbour distance; for the
ring variants the N sites sit on a regular polygon with side 1.  The spin
exchange between sites i and j is J*w(i,j) with a dimensionless weight

    open-nn        w = 1 for |i-j| = 1
    open-lr        w = 1/(j-i)^2
    ring-nn        w = 1 for neighbours around the ring
    ring-lr-arc    w = 1/D^2,  D = min(j-i, N-(j-i))   (steps along the ring)
    ring-lr-chord  w = 1/c^2,  c = 2R sin(pi (j-i)/N)  (straight-line chord),
                   R = 1/(2 sin(pi/N)) so the polygon side is 1

Weights are always positive; the sign of the interaction lives in J.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .basis import check_n_sites


class Topology(Enum):
    OPEN_NN = "open-nn"
    OPEN_LONG_RANGE = "open-lr"
    RING_NN = "ring-nn"
    RING_LONG_RANGE_ARC = "ring-lr-arc"
    RING_LONG_RANGE_CHORD = "ring-lr-chord"

    @property
    def is_ring(self) -> bool:
        return self in (
            Topology.RING_NN,
            Topology.RING_LONG_RANGE_ARC,
            Topology.RING_LONG_RANGE_CHORD,
        )

    @classmethod
    def from_name(cls, name: str) -> "Topology":
        try:
            return cls(name)
        except ValueError:
            valid = ", ".join(t.value for t in cls)
            raise ValueError(f"unknown topology {name!r}; expected one of: {valid}") from None


@dataclass(frozen=True)
class CouplingMap:
    """Unordered weighted bonds (i, j, w) with 1 <= i < j <= N."""

    n_sites: int
    pairs: tuple[tuple[int, int, float], ...]

    def __post_init__(self) -> None:
        check_n_sites(self.n_sites)
        seen = set()
        for i, j, w in self.pairs:
            if not (1 <= i < j <= self.n_sites):
                raise ValueError(f"bad pair ({i}, {j}) for {self.n_sites} sites")
            if (i, j) in seen:
                raise ValueError(f"duplicated bond ({i}, {j})")
            if not (w > 0 and math.isfinite(w)):
                raise ValueError(f"weight for bond ({i}, {j}) must be positive, got {w}")
            seen.add((i, j))


def _separation(i: int, j: int, n_sites: int, topology: Topology) -> int:
    """Effective site separation: minimum-image around a ring, |j-i| otherwise."""
    d = j - i
    if topology.is_ring:
        return min(d, n_sites - d)
    return d


def _weight(separation: int, n_sites: int, topology: Topology) -> float:
    if topology in (Topology.OPEN_NN, Topology.RING_NN):
        return 1.0
    if topology in (Topology.OPEN_LONG_RANGE, Topology.RING_LONG_RANGE_ARC):
        return 1.0 / separation**2
    # chord: distance across the polygon, unit side length
    radius = 1.0 / (2.0 * math.sin(math.pi / n_sites))
    chord = 2.0 * radius * math.sin(math.pi * separation / n_sites)
    return 1.0 / chord**2


def build_coupling_map(n_sites: int, topology: Topology) -> CouplingMap:
    """Bond list for a molecule of n_sites in the given geometry.

    A single site has no bonds.  A 2-site ring is the same as the open
    chain: the would-be second bond between the same pair is never added.
    """
    check_n_sites(n_sites)
    if n_sites == 1:
        return CouplingMap(n_sites=1, pairs=())

    pairs: list[tuple[int, int, float]] = []
    if topology == Topology.OPEN_NN:
        pairs = [(i, i + 1, 1.0) for i in range(1, n_sites)]
    elif topology == Topology.RING_NN:
        pairs = [(i, i + 1, 1.0) for i in range(1, n_sites)]
        if n_sites >= 3:
            pairs.append((1, n_sites, 1.0))
    else:
        for i in range(1, n_sites):
            for j in range(i + 1, n_sites + 1):
                sep = _separation(i, j, n_sites, topology)
                pairs.append((i, j, _weight(sep, n_sites, topology)))
    return CouplingMap(n_sites=n_sites, pairs=tuple(pairs))


def distance_profile(n_sites: int, topology: Topology) -> list[tuple[int, float]]:
    """Weight as a function of site separation, sorted by separation.

    For rings the separation is the minimum number of steps around the
    ring, so the profile has at most floor(N/2) entries.
    """
    cmap = build_coupling_map(n_sites, topology)
    profile: dict[int, float] = {}
    for i, j, w in cmap.pairs:
        sep = _separation(i, j, n_sites, topology)
        if sep in profile and profile[sep] != w:
            raise AssertionError(f"inconsistent weights at separation {sep}")
        profile[sep] = w
    return sorted(profile.items())
