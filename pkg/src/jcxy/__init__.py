"""Exact diagonalization of a spin-1/2 XY molecule in a one-photon cavity."""

from .basis import (
    DOWN,
    MAX_SITES,
    UP,
    BasisState,
    QuantumNumbers,
    decode,
    dimension,
    encode,
    quantum_numbers,
)
from .eigensolve import (
    DEFAULT_DEGENERACY_TOL,
    DegeneracySummary,
    SolverError,
    Spectrum,
    degeneracy_summary,
    eigvals_symmetric,
    full_spectrum,
    spectrum_from_blocks,
)
from .geometry import CouplingMap, Topology, build_coupling_map, distance_profile
from .hamiltonian import (
    GeneratorPair,
    SparseSymmetric,
    assemble,
    build_generator_pair,
    build_jc_generator,
    build_photon_explicit,
    build_xy_generator,
    coordinate_dump,
)
from .sectors import (
    Sector,
    SectorBlocks,
    SectorStraddleError,
    build_sector_blocks,
    decompose,
    extract_block,
    verify_commutation,
)
from .sweep import (
    DEFAULT_GRID_POINTS,
    MaxReport,
    PhiGrid,
    SweepResult,
    SymmetryReport,
    find_max,
    sector_sweep,
    sweep,
    symmetry_report,
)

__version__ = "0.1.0"

__all__ = [
    "BasisState", "QuantumNumbers", "encode", "decode", "quantum_numbers",
    "dimension", "UP", "DOWN", "MAX_SITES",
    "Topology", "CouplingMap", "build_coupling_map", "distance_profile",
    "SparseSymmetric", "GeneratorPair", "build_jc_generator",
    "build_xy_generator", "build_photon_explicit", "build_generator_pair",
    "assemble", "coordinate_dump",
    "Sector", "SectorBlocks", "SectorStraddleError", "decompose",
    "extract_block", "verify_commutation", "build_sector_blocks",
    "Spectrum", "DegeneracySummary", "SolverError", "eigvals_symmetric",
    "full_spectrum", "spectrum_from_blocks", "degeneracy_summary",
    "DEFAULT_DEGENERACY_TOL",
    "PhiGrid", "SweepResult", "MaxReport", "SymmetryReport", "sweep",
    "sector_sweep", "find_max", "symmetry_report", "DEFAULT_GRID_POINTS",
]
