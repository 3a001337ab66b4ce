"""Symmetric eigensolver contract and full-spectrum assembly."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hamiltonian import GeneratorPair
from .sectors import SectorBlocks, build_sector_blocks

SYMMETRY_TOL = 1e-12
DEFAULT_DEGENERACY_TOL = 1e-8


class SolverError(RuntimeError):
    """The dense symmetric eigensolver failed to converge."""


@dataclass(frozen=True)
class Spectrum:
    """Sorted eigenvalues with the sector label of each one."""

    energies: np.ndarray
    total_mz: np.ndarray

    def __post_init__(self) -> None:
        if self.energies.shape != self.total_mz.shape:
            raise ValueError("energies and total_mz must be parallel arrays")
        if self.energies.size > 1 and np.any(np.diff(self.energies) < 0):
            raise ValueError("energies must be sorted ascending")

    @property
    def sector_labels(self) -> np.ndarray:
        """Inv eigenvalue per energy (total_mz + 1/2, exact)."""
        return self.total_mz + 0.5

    def __len__(self) -> int:
        return int(self.energies.size)


@dataclass(frozen=True)
class DegeneracySummary:
    distinct_count: int
    levels: tuple[tuple[float, int], ...]


def eigvals_symmetric(block: np.ndarray) -> np.ndarray:
    """All eigenvalues of a dense symmetric matrix, ascending."""
    block = np.asarray(block, dtype=np.float64)
    if block.ndim != 2 or block.shape[0] != block.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {block.shape}")
    if block.size and np.max(np.abs(block - block.T)) > SYMMETRY_TOL:
        raise ValueError(
            f"matrix is not symmetric within {SYMMETRY_TOL:g} "
            f"(max asymmetry {np.max(np.abs(block - block.T)):.3e})"
        )
    try:
        return np.linalg.eigvalsh(block)
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"eigensolver failed on a {block.shape[0]}x{block.shape[0]} block: {exc}") from exc


def spectrum_from_blocks(blocks: SectorBlocks, g: float, j: float,
                         scale: float = 1.0) -> Spectrum:
    """Merge per-sector eigenvalues of g*h_g + j*h_j, sorted ascending.

    Energies are divided by ``scale`` (the sweep normalization).  The
    merge is deterministic: sectors are processed in label order and the
    final ordering uses a stable sort.
    """
    parts = []
    labels = []
    for sector, bg, bj in zip(blocks.sectors, blocks.blocks_g, blocks.blocks_j):
        vals = eigvals_symmetric(g * bg + j * bj)
        if scale != 1.0:
            vals = vals / scale
        parts.append(vals)
        labels.append(np.full(sector.dim, sector.total_mz))
    energies = np.concatenate(parts)
    total_mz = np.concatenate(labels)
    order = np.argsort(energies, kind="stable")
    return Spectrum(energies=energies[order], total_mz=total_mz[order])


def full_spectrum(pair: GeneratorPair, g: float, j: float) -> Spectrum:
    """Raw (unnormalized) spectrum of H(G, J) over all 2**(N+1) states."""
    return spectrum_from_blocks(build_sector_blocks(pair), g, j)


def degeneracy_summary(spec: Spectrum, tol: float = DEFAULT_DEGENERACY_TOL) -> DegeneracySummary:
    """Single-linkage grouping of the sorted spectrum.

    Consecutive eigenvalues with gap <= tol join one level; each level
    reports its mean value and multiplicity.
    """
    if not tol > 0:
        raise ValueError(f"tolerance must be positive, got {tol!r}")
    e = spec.energies
    if e.size == 0:
        return DegeneracySummary(distinct_count=0, levels=())
    starts = np.flatnonzero(np.concatenate(([True], np.diff(e) > tol)))
    bounds = np.append(starts, e.size)
    levels = tuple(
        (float(e[a:b].mean()), int(b - a)) for a, b in zip(bounds[:-1], bounds[1:])
    )
    return DegeneracySummary(distinct_count=len(levels), levels=levels)
