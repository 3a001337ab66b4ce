"""Bit-level encoding of the photon + spin configuration space.

A configuration of the N-spin molecule plus the truncated (0 or 1 photon)
cavity mode is stored as an integer with N+1 bits:

    bit 0            photon occupation (1 = one photon = pseudo-spin up)
    bit i, 1<=i<=N   spin on site i    (1 = up, 0 = down)

The photon therefore behaves as an extra spin site 0, and the full space
has dimension 2**(N+1).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterable, Sequence

UP = 1
DOWN = 0

# Matrix dimension 2**(cap+1) = 32768 keeps dense sector blocks in memory.
MAX_SITES = 14


def check_n_sites(n_sites: int) -> int:
    if not isinstance(n_sites, int) or n_sites < 1 or n_sites > MAX_SITES:
        raise ValueError(f"n_sites must be an integer in [1, {MAX_SITES}], got {n_sites!r}")
    return n_sites


def dimension(n_sites: int) -> int:
    """Size of the photon + spins configuration space, 2**(N+1)."""
    return 1 << (check_n_sites(n_sites) + 1)


@dataclass(frozen=True)
class BasisState:
    """One product configuration, identified by its bit code."""

    code: int
    n_sites: int

    def __post_init__(self) -> None:
        check_n_sites(self.n_sites)
        if not 0 <= self.code < dimension(self.n_sites):
            raise ValueError(
                f"code {self.code} out of range for {self.n_sites} sites"
            )

    @property
    def photon_occ(self) -> int:
        return self.code & 1

    def spin(self, site: int) -> int:
        """Spin bit of site 1..N (1 = up)."""
        if not 1 <= site <= self.n_sites:
            raise ValueError(f"site {site} out of range 1..{self.n_sites}")
        return (self.code >> site) & 1

    @property
    def spins(self) -> tuple[int, ...]:
        return tuple((self.code >> i) & 1 for i in range(1, self.n_sites + 1))


@dataclass(frozen=True)
class QuantumNumbers:
    """Diagonal quantum numbers of a basis state.

    All half-integer values are exact in binary floating point.
    ``inv = n_ph + m_z = 1/2 + total_mz`` is the conserved combination of
    photon number and spin magnetization.
    """

    n_ph: int
    m_z: float
    total_mz: float
    inv: float


def encode(photon_occ: int, spins: Sequence[int] | Iterable[int]) -> BasisState:
    """Pack a photon occupation and per-site spins into a BasisState.

    ``spins[i]`` is the spin of site i+1; values are UP (1) or DOWN (0).
    """
    spins = tuple(spins)
    n_sites = len(spins)
    check_n_sites(n_sites)
    if photon_occ not in (0, 1):
        raise ValueError(f"photon occupation must be 0 or 1, got {photon_occ!r}")
    code = int(photon_occ)
    for i, s in enumerate(spins):
        if s not in (0, 1):
            raise ValueError(f"spin values must be 0 (down) or 1 (up), got {s!r}")
        code |= s << (i + 1)
    return BasisState(code=code, n_sites=n_sites)


def decode(code: int, n_sites: int) -> tuple[int, tuple[int, ...]]:
    """Inverse of encode: (photon_occ, spins)."""
    state = BasisState(code=code, n_sites=n_sites)
    return state.photon_occ, state.spins


def quantum_numbers(state: BasisState) -> QuantumNumbers:
    n = state.n_sites
    n_ph = state.photon_occ
    spins_up = (state.code >> 1).bit_count()
    m_z = spins_up - n / 2
    total_mz = (state.code.bit_count()) - (n + 1) / 2
    return QuantumNumbers(n_ph=n_ph, m_z=m_z, total_mz=total_mz, inv=n_ph + m_z)


def twice_total_mz(code: int, n_sites: int) -> int:
    """2*total_mz of a code, as an exact integer (no BasisState overhead)."""
    return 2 * code.bit_count() - (n_sites + 1)


def sector_multiplicity(n_sites: int, twice_mz: int) -> int:
    """Number of codes with the given 2*total_mz; a binomial coefficient."""
    n_up = (twice_mz + n_sites + 1) // 2
    if (twice_mz + n_sites + 1) % 2 != 0 or not 0 <= n_up <= n_sites + 1:
        return 0
    return comb(n_sites + 1, n_up)
