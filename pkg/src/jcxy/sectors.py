"""Invariant eigenspaces and per-sector dense blocks.

The conserved quantity Inv = n_ph + M_z = 1/2 + total_mz splits the
configuration space into N+2 sectors, one per value of the total
magnetization of the mapped (N+1)-site chain.  Sectors are labelled by
2*total_mz (an exact integer) and their members are sorted by code.
Every nonzero of a correctly assembled Hamiltonian connects two states
in the same sector; an entry that straddles two sectors signals an
assembly bug and raises SectorStraddleError.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .basis import check_n_sites, dimension, sector_multiplicity
from .hamiltonian import GeneratorPair, SparseSymmetric


class SectorStraddleError(Exception):
    """A matrix entry connects two different invariant sectors."""


@dataclass(frozen=True)
class Sector:
    """One eigenspace of Inv: its quantum number and member codes."""

    twice_total_mz: int
    members: np.ndarray

    @property
    def total_mz(self) -> float:
        return self.twice_total_mz / 2

    @property
    def inv_value(self) -> float:
        return self.twice_total_mz / 2 + 0.5

    @property
    def dim(self) -> int:
        return int(self.members.size)


@lru_cache(maxsize=32)
def _twice_labels(n_sites: int) -> np.ndarray:
    dim = dimension(n_sites)
    return np.array([2 * c.bit_count() - (n_sites + 1) for c in range(dim)],
                    dtype=np.int64)


@lru_cache(maxsize=32)
def decompose(n_sites: int) -> tuple[Sector, ...]:
    """All N+2 sectors, ordered by increasing total_mz."""
    check_n_sites(n_sites)
    labels = _twice_labels(n_sites)
    sectors = []
    for twice in range(-(n_sites + 1), n_sites + 2, 2):
        members = np.flatnonzero(labels == twice)
        assert members.size == sector_multiplicity(n_sites, twice)
        sectors.append(Sector(twice_total_mz=twice, members=members))
    return tuple(sectors)


def extract_block(h: SparseSymmetric, sector: Sector) -> np.ndarray:
    """Dense symmetric block of h restricted to the sector members."""
    d = sector.dim
    pos = np.full(h.dim, -1, dtype=np.int64)
    pos[sector.members] = np.arange(d)
    in_row = pos[h.rows] >= 0
    in_col = pos[h.cols] >= 0
    if np.any(in_row != in_col):
        bad = int(np.flatnonzero(in_row != in_col)[0])
        raise SectorStraddleError(
            f"entry ({int(h.rows[bad])}, {int(h.cols[bad])}) crosses the "
            f"sector boundary at total_mz={sector.total_mz:g}"
        )
    block = np.zeros((d, d))
    keep = in_row & in_col
    a = pos[h.rows[keep]]
    b = pos[h.cols[keep]]
    block[a, b] = h.vals[keep]
    block[b, a] = h.vals[keep]
    return block


def verify_commutation(h: SparseSymmetric, n_sites: int) -> float:
    """Max |(inv(row) - inv(col)) * H[row, col]| over stored entries.

    Exactly zero for any Hamiltonian assembled by this package: entries
    never straddle sectors, so the label difference vanishes entry by
    entry without any tolerance.
    """
    if h.nnz == 0:
        return 0.0
    labels = _twice_labels(n_sites)
    diff = (labels[h.rows] - labels[h.cols]) / 2
    return float(np.max(np.abs(diff * h.vals)))


@dataclass(frozen=True)
class SectorBlocks:
    """Per-sector dense templates of both generators.

    block(g, j) for sector s is g*blocks_g[s] + j*blocks_j[s]; building
    the templates once makes a parameter sweep a scalar multiply-add per
    point.  Instances are immutable and safe to ship to worker processes.
    """

    n_sites: int
    sectors: tuple[Sector, ...]
    blocks_g: tuple[np.ndarray, ...]
    blocks_j: tuple[np.ndarray, ...]

    @property
    def total_dim(self) -> int:
        return sum(s.dim for s in self.sectors)

    def restrict(self, twice_values: set[int]) -> "SectorBlocks":
        keep = [i for i, s in enumerate(self.sectors) if s.twice_total_mz in twice_values]
        return SectorBlocks(
            n_sites=self.n_sites,
            sectors=tuple(self.sectors[i] for i in keep),
            blocks_g=tuple(self.blocks_g[i] for i in keep),
            blocks_j=tuple(self.blocks_j[i] for i in keep),
        )


def build_sector_blocks(pair: GeneratorPair) -> SectorBlocks:
    """Decompose both generators of a pair into dense sector blocks."""
    labels = _twice_labels(pair.n_sites)
    for h in (pair.h_g, pair.h_j):
        if h.nnz and np.any(labels[h.rows] != labels[h.cols]):
            bad = int(np.flatnonzero(labels[h.rows] != labels[h.cols])[0])
            raise SectorStraddleError(
                f"generator entry ({int(h.rows[bad])}, {int(h.cols[bad])}) "
                "crosses a sector boundary"
            )
    sectors = decompose(pair.n_sites)
    blocks_g = tuple(extract_block(pair.h_g, s) for s in sectors)
    blocks_j = tuple(extract_block(pair.h_j, s) for s in sectors)
    return SectorBlocks(n_sites=pair.n_sites, sectors=sectors,
                        blocks_g=blocks_g, blocks_j=blocks_j)
