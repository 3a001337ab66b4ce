"""Spectroscopy over the unit circle of couplings G = cos(phi), J = sin(phi).

phi runs over [-pi/2, pi/2]: phi = 0 is the pure photon-spin coupling,
phi = +/-pi/2 is the pure magnetic model (G = 0).  Energies are reported
in units of sqrt(G^2 + J^2), so on the unit circle they equal the raw
eigenvalues.  The G < 0 half-plane is reached through the sign-flip
identity spectrum(-G, -J) = -spectrum(G, J).

phi points are embarrassingly parallel; results are keyed by grid
position and BLAS threading is pinned, so output is identical for any
worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np
from threadpoolctl import threadpool_limits

from .eigensolve import (
    DEFAULT_DEGENERACY_TOL,
    Spectrum,
    eigvals_symmetric,
    spectrum_from_blocks,
)
from .hamiltonian import GeneratorPair
from .sectors import SectorBlocks, build_sector_blocks

HALF_PI = math.pi / 2
DEFAULT_GRID_POINTS = 721      # pi/720 steps, 0.25 degrees
COARSE_SCAN_POINTS = 2001      # pi/2000 steps for the max finder
REFINE_PHI_TOL = 1e-6
FLAT_TOL = 1e-9
SYMMETRY_HELD_MAX = 1e-9
SYMMETRY_BROKEN_MIN = 1e-3
_ENDPOINT_SNAP = 1e-9


@dataclass(frozen=True)
class PhiGrid:
    """Strictly increasing phi values with both endpoints at +/-pi/2."""

    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 1 or values.size < 2:
            raise ValueError("a phi grid needs at least the two endpoints")
        if np.any(np.diff(values) <= 0):
            raise ValueError("phi grid must be strictly increasing")
        if values[0] != -HALF_PI or values[-1] != HALF_PI:
            raise ValueError("phi grid must start at -pi/2 and end at +pi/2")
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return int(self.values.size)

    @classmethod
    def uniform(cls, n_points: int = DEFAULT_GRID_POINTS) -> "PhiGrid":
        if n_points < 2:
            raise ValueError(f"grid needs at least 2 points, got {n_points}")
        return cls(values=np.linspace(-HALF_PI, HALF_PI, n_points))

    @classmethod
    def from_values(cls, values: Sequence[float] | Iterable[float]) -> "PhiGrid":
        arr = np.asarray(list(values), dtype=np.float64)
        if arr.size >= 2:
            # tolerate e.g. -1.5708 from the command line
            if abs(arr[0] + HALF_PI) <= _ENDPOINT_SNAP:
                arr[0] = -HALF_PI
            if abs(arr[-1] - HALF_PI) <= _ENDPOINT_SNAP:
                arr[-1] = HALF_PI
        return cls(values=arr)


@dataclass(frozen=True)
class SweepMetadata:
    n_sites: int
    topology: str
    jc_site: int
    degeneracy_tol: float
    sector_filter: float | None = None


@dataclass(frozen=True)
class SweepResult:
    grid: PhiGrid
    spectra: tuple[Spectrum, ...]
    metadata: SweepMetadata


@dataclass(frozen=True)
class MaxReport:
    e_max: float
    phi_max: float
    is_flat: bool


def _point_spectrum(blocks: SectorBlocks, phi: float) -> Spectrum:
    g, j = math.cos(phi), math.sin(phi)
    return spectrum_from_blocks(blocks, g, j, scale=math.hypot(g, j))


_WORKER_BLOCKS: SectorBlocks | None = None
_WORKER_LIMITER = None


def _worker_init(blocks: SectorBlocks) -> None:
    global _WORKER_BLOCKS, _WORKER_LIMITER
    _WORKER_BLOCKS = blocks
    _WORKER_LIMITER = threadpool_limits(limits=1)


def _worker_point(phi: float) -> Spectrum:
    return _point_spectrum(_WORKER_BLOCKS, phi)


def _run_sweep(blocks: SectorBlocks, grid: PhiGrid, workers: int,
               metadata: SweepMetadata) -> SweepResult:
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    phis = [float(p) for p in grid.values]
    if workers == 1:
        with threadpool_limits(limits=1):
            spectra = [_point_spectrum(blocks, p) for p in phis]
    else:
        chunk = max(1, len(phis) // (workers * 8))
        with ProcessPoolExecutor(max_workers=workers, initializer=_worker_init,
                                 initargs=(blocks,)) as pool:
            spectra = list(pool.map(_worker_point, phis, chunksize=chunk))
    return SweepResult(grid=grid, spectra=tuple(spectra), metadata=metadata)


def sweep(pair: GeneratorPair, grid: PhiGrid | None = None, *,
          workers: int = 1,
          degeneracy_tol: float = DEFAULT_DEGENERACY_TOL) -> SweepResult:
    """Normalized spectrum at every grid point, sector labels attached."""
    grid = grid if grid is not None else PhiGrid.uniform()
    metadata = SweepMetadata(n_sites=pair.n_sites, topology=pair.topology.value,
                             jc_site=pair.jc_site, degeneracy_tol=degeneracy_tol)
    return _run_sweep(build_sector_blocks(pair), grid, workers, metadata)


def sector_sweep(pair: GeneratorPair, grid: PhiGrid | None, abs_total_mz: float, *,
                 workers: int = 1,
                 degeneracy_tol: float = DEFAULT_DEGENERACY_TOL) -> SweepResult:
    """Sweep restricted to the two sectors with |total_mz| = abs_total_mz."""
    twice = round(2 * abs_total_mz)
    if abs(2 * abs_total_mz - twice) > 1e-9 or twice < 0:
        raise ValueError(f"|total_mz| must be a non-negative half-integer, got {abs_total_mz!r}")
    n = pair.n_sites
    if twice > n + 1 or twice % 2 != (n + 1) % 2:
        raise ValueError(
            f"|total_mz| = {abs_total_mz:g} does not occur for {n} sites; "
            f"valid values are {(n + 1) % 2 / 2 if (n + 1) % 2 else 0:g} .. {(n + 1) / 2:g} in integer steps"
        )
    grid = grid if grid is not None else PhiGrid.uniform()
    blocks = build_sector_blocks(pair).restrict({twice, -twice})
    metadata = SweepMetadata(n_sites=pair.n_sites, topology=pair.topology.value,
                             jc_site=pair.jc_site, degeneracy_tol=degeneracy_tol,
                             sector_filter=twice / 2)
    return _run_sweep(blocks, grid, workers, metadata)


def _top_energy(blocks: SectorBlocks, phi: float) -> float:
    g, j = math.cos(phi), math.sin(phi)
    scale = math.hypot(g, j)
    top = -math.inf
    for bg, bj in zip(blocks.blocks_g, blocks.blocks_j):
        top = max(top, float(eigvals_symmetric(g * bg + j * bj)[-1]))
    return top / scale


def _golden_max(f: Callable[[float], float], lo: float, hi: float,
                seed: tuple[float, float]) -> tuple[float, float]:
    """Golden-section maximization; returns the best evaluated (phi, value)."""
    ratio = (math.sqrt(5) - 1) / 2
    best_phi, best_val = seed

    def probe(x: float) -> float:
        nonlocal best_phi, best_val
        v = f(x)
        if v > best_val:
            best_phi, best_val = x, v
        return v

    a, b = lo, hi
    c, d = b - ratio * (b - a), a + ratio * (b - a)
    fc, fd = probe(c), probe(d)
    while b - a > REFINE_PHI_TOL:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - ratio * (b - a)
            fc = probe(c)
        else:
            a, c, fc = c, d, fd
            d = a + ratio * (b - a)
            fd = probe(d)
    return best_phi, best_val


def find_max(pair: GeneratorPair) -> MaxReport:
    """Largest normalized energy over the sweep and where it occurs.

    Coarse scan with step pi/2000, then golden-section refinement of the
    bracketed maximum down to 1e-6 in phi.  If the top level never moves
    by more than 1e-9 the report is flagged flat and phi_max is the grid
    point closest to zero.  When the maximum recurs at -phi within 1e-9
    (symmetric spectra) the non-positive location is reported.
    """
    blocks = build_sector_blocks(pair)
    with threadpool_limits(limits=1):
        phis = np.linspace(-HALF_PI, HALF_PI, COARSE_SCAN_POINTS)
        tops = np.array([_top_energy(blocks, p) for p in phis])
        if tops.max() - tops.min() < FLAT_TOL:
            return MaxReport(e_max=float(tops.max()),
                             phi_max=float(phis[np.argmin(np.abs(phis))]),
                             is_flat=True)
        i = int(np.argmax(tops))
        lo = float(phis[max(i - 1, 0)])
        hi = float(phis[min(i + 1, tops.size - 1)])
        phi_star, e_star = _golden_max(lambda p: _top_energy(blocks, p),
                                       lo, hi, (float(phis[i]), float(tops[i])))
        if phi_star > 0:
            mirrored = _top_energy(blocks, -phi_star)
            if abs(mirrored - e_star) <= FLAT_TOL:
                phi_star = -phi_star
                e_star = max(e_star, mirrored)
    return MaxReport(e_max=e_star, phi_max=phi_star, is_flat=False)


@dataclass(frozen=True)
class SymmetryProbe:
    phi: float
    g_flip_distance: float
    j_flip_distance: float
    g_sign: str
    j_sign: str


@dataclass(frozen=True)
class SymmetryReport:
    """Spectrum response to flipping the sign of G or of J alone."""

    probes: tuple[SymmetryProbe, ...]
    g_sign: str
    j_sign: str


def _classify(distance: float) -> str:
    if distance < SYMMETRY_HELD_MAX:
        return "held"
    if distance > SYMMETRY_BROKEN_MIN:
        return "broken"
    return "inconclusive"


def _overall(verdicts: list[str]) -> str:
    if any(v == "broken" for v in verdicts):
        return "broken"
    if any(v == "inconclusive" for v in verdicts):
        return "inconclusive"
    return "held"


def symmetry_report(pair: GeneratorPair,
                    probe_phis: Sequence[float]) -> SymmetryReport:
    """Classify the G-sign and J-sign spectral symmetries at probe angles."""
    if len(probe_phis) == 0:
        raise ValueError("at least one probe phi is required")
    for phi in probe_phis:
        if min(abs(phi), abs(phi - HALF_PI), abs(phi + HALF_PI)) < 1e-6:
            raise ValueError(f"probe phi {phi!r} is degenerate (0 or +/-pi/2)")
    blocks = build_sector_blocks(pair)
    probes = []
    with threadpool_limits(limits=1):
        for phi in probe_phis:
            g, j = math.cos(phi), math.sin(phi)
            base = spectrum_from_blocks(blocks, g, j).energies
            d_j = float(np.max(np.abs(base - spectrum_from_blocks(blocks, g, -j).energies)))
            d_g = float(np.max(np.abs(base - spectrum_from_blocks(blocks, -g, j).energies)))
            probes.append(SymmetryProbe(phi=float(phi),
                                        g_flip_distance=d_g, j_flip_distance=d_j,
                                        g_sign=_classify(d_g), j_sign=_classify(d_j)))
    return SymmetryReport(probes=tuple(probes),
                          g_sign=_overall([p.g_sign for p in probes]),
                          j_sign=_overall([p.j_sign for p in probes]))
