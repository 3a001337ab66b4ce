"""Assembly of the interaction Hamiltonian H(G, J) = G*h_g + J*h_j.

The two generators are built once and reused across parameter sweeps:

    h_g  couples the photon to the spin at the chosen site k.  With the
         one-photon truncation the coupling acts as a flip-flop between
         bit 0 and bit k: |1, down_k> <-> |0, up_k> with matrix element +1.
    h_j  is the XY exchange.  Each bond (i, j, w) of the coupling map
         contributes a flip-flop |up_i down_j> <-> |down_i up_j> with
         matrix element -w, i.e. a single bond enters the energy as
         -2*J*w*(SxSx + SySy).

Both generators are real symmetric with empty diagonals, so every
assembled H is real symmetric and traceless.  build_photon_explicit
rebuilds h_g from literal truncated photon operators via Kronecker
products; it must agree with the bit-flip construction entry by entry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .basis import check_n_sites, dimension
from .geometry import CouplingMap, Topology, build_coupling_map


@dataclass(frozen=True)
class SparseSymmetric:
    """Real symmetric matrix stored as its upper triangle in COO form.

    Entries are canonically sorted by (row, col), hold row <= col, and
    carry no explicit zeros; the lower triangle is implied.
    """

    dim: int
    rows: np.ndarray
    cols: np.ndarray
    vals: np.ndarray

    def __post_init__(self) -> None:
        rows = np.asarray(self.rows, dtype=np.int64)
        cols = np.asarray(self.cols, dtype=np.int64)
        vals = np.asarray(self.vals, dtype=np.float64)
        if not (rows.shape == cols.shape == vals.shape) or rows.ndim != 1:
            raise ValueError("rows, cols, vals must be 1-D arrays of equal length")
        if rows.size:
            if rows.min() < 0 or cols.max() >= self.dim:
                raise ValueError("matrix entry index out of range")
            if np.any(rows > cols):
                raise ValueError("entries must satisfy row <= col")
            if not np.all(np.isfinite(vals)):
                raise ValueError("matrix entries must be finite")
            if np.any(vals == 0.0):
                raise ValueError("explicit zeros are not allowed")
            order = np.lexsort((cols, rows))
            rows, cols, vals = rows[order], cols[order], vals[order]
            dup = (np.diff(rows) == 0) & (np.diff(cols) == 0)
            if np.any(dup):
                raise ValueError("duplicate entries for the same (row, col)")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "vals", vals)

    @property
    def nnz(self) -> int:
        return int(self.vals.size)

    def trace(self) -> float:
        on_diag = self.rows == self.cols
        return float(self.vals[on_diag].sum())

    def to_dense(self) -> np.ndarray:
        m = np.zeros((self.dim, self.dim))
        m[self.rows, self.cols] = self.vals
        off = self.rows != self.cols
        m[self.cols[off], self.rows[off]] = self.vals[off]
        return m

    def matvec(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.dim,):
            raise ValueError(f"vector length must be {self.dim}")
        y = np.zeros(self.dim)
        np.add.at(y, self.rows, self.vals * x[self.cols])
        off = self.rows != self.cols
        np.add.at(y, self.cols[off], self.vals[off] * x[self.rows[off]])
        return y

    def same_entries(self, other: "SparseSymmetric") -> bool:
        """Exact entrywise equality (entries are canonically sorted)."""
        return (
            self.dim == other.dim
            and np.array_equal(self.rows, other.rows)
            and np.array_equal(self.cols, other.cols)
            and np.array_equal(self.vals, other.vals)
        )


@dataclass(frozen=True)
class GeneratorPair:
    """The two generators of H(G, J) plus the defining parameters."""

    h_g: SparseSymmetric
    h_j: SparseSymmetric
    n_sites: int
    jc_site: int
    topology: Topology

    @property
    def dim(self) -> int:
        return dimension(self.n_sites)


def _check_jc_site(n_sites: int, jc_site: int) -> None:
    if not isinstance(jc_site, int) or not 1 <= jc_site <= n_sites:
        raise ValueError(f"jc_site must be in 1..{n_sites}, got {jc_site!r}")


def build_jc_generator(n_sites: int, jc_site: int) -> SparseSymmetric:
    """Photon-spin flip-flop generator (coefficient of G).

    Connects each state with (photon, spin_k) = (1, down) to its partner
    with (0, up); 2**(N-1) entries of value +1.
    """
    check_n_sites(n_sites)
    _check_jc_site(n_sites, jc_site)
    dim = dimension(n_sites)
    codes = np.arange(dim, dtype=np.int64)
    mask = ((codes & 1) == 1) & (((codes >> jc_site) & 1) == 0)
    src = codes[mask]
    dst = src - 1 + (1 << jc_site)  # k >= 1, so the partner code is larger
    return SparseSymmetric(dim=dim, rows=src, cols=dst, vals=np.ones(src.size))


def build_xy_generator(coupling_map: CouplingMap) -> SparseSymmetric:
    """Spin-exchange generator (coefficient of J); photon bit untouched."""
    n_sites = coupling_map.n_sites
    dim = dimension(n_sites)
    codes = np.arange(dim, dtype=np.int64)
    rows, cols, vals = [], [], []
    for i, j, w in coupling_map.pairs:
        mask = (((codes >> i) & 1) == 1) & (((codes >> j) & 1) == 0)
        src = codes[mask]
        dst = src - (1 << i) + (1 << j)  # i < j, so dst > src
        rows.append(src)
        cols.append(dst)
        vals.append(np.full(src.size, -w))
    if not rows:
        return SparseSymmetric(dim=dim, rows=np.empty(0, np.int64),
                               cols=np.empty(0, np.int64), vals=np.empty(0))
    return SparseSymmetric(dim=dim, rows=np.concatenate(rows),
                           cols=np.concatenate(cols), vals=np.concatenate(vals))


def build_photon_explicit(n_sites: int, jc_site: int) -> SparseSymmetric:
    """JC generator from literal operator products a*S_k^+ + adag*S_k^-.

    Uses the truncated photon ladder operators a|1> = |0>, adag|0> = |1>
    (zero otherwise) and Kronecker products over the N+1 tensor factors,
    with no reference to the paired-bit-flip shortcut.  Must equal
    build_jc_generator entry by entry.
    """
    check_n_sites(n_sites)
    _check_jc_site(n_sites, jc_site)

    # Two-level factors; local basis index equals the bit value.
    a = sp.csr_matrix(np.array([[0.0, 1.0], [0.0, 0.0]]))        # |1> -> |0>
    a_dag = sp.csr_matrix(a.T.toarray())                          # |0> -> |1>
    s_plus = sp.csr_matrix(np.array([[0.0, 0.0], [1.0, 0.0]]))   # |down> -> |up>
    s_minus = sp.csr_matrix(s_plus.T.toarray())
    ident = sp.identity(2, format="csr")

    def site_operator(op: sp.csr_matrix, position: int) -> sp.csr_matrix:
        # bit 0 is the fastest-varying tensor index
        full = op if position == 0 else ident
        for p in range(1, n_sites + 1):
            full = sp.kron(op if p == position else ident, full, format="csr")
        return full

    h = (site_operator(a, 0) @ site_operator(s_plus, jc_site)
         + site_operator(a_dag, 0) @ site_operator(s_minus, jc_site))
    coo = h.tocoo()
    coo.sum_duplicates()
    upper = coo.row <= coo.col
    return SparseSymmetric(dim=dimension(n_sites),
                           rows=coo.row[upper].astype(np.int64),
                           cols=coo.col[upper].astype(np.int64),
                           vals=coo.data[upper])


def build_generator_pair(n_sites: int, topology: Topology, jc_site: int = 1) -> GeneratorPair:
    """Construct both generators for a molecule geometry."""
    cmap = build_coupling_map(n_sites, topology)
    return GeneratorPair(
        h_g=build_jc_generator(n_sites, jc_site),
        h_j=build_xy_generator(cmap),
        n_sites=n_sites,
        jc_site=jc_site,
        topology=topology,
    )


def assemble(pair: GeneratorPair, g: float, j: float) -> SparseSymmetric:
    """H(G, J) = G*h_g + J*h_j as one sparse symmetric matrix."""
    if not (math.isfinite(g) and math.isfinite(j)):
        raise ValueError(f"couplings must be finite, got G={g!r}, J={j!r}")
    parts_r, parts_c, parts_v = [], [], []
    for scale, h in ((g, pair.h_g), (j, pair.h_j)):
        if scale != 0.0 and h.nnz:
            parts_r.append(h.rows)
            parts_c.append(h.cols)
            parts_v.append(scale * h.vals)
    if not parts_r:
        return SparseSymmetric(dim=pair.dim, rows=np.empty(0, np.int64),
                               cols=np.empty(0, np.int64), vals=np.empty(0))
    return SparseSymmetric(dim=pair.dim,
                           rows=np.concatenate(parts_r),
                           cols=np.concatenate(parts_c),
                           vals=np.concatenate(parts_v))


def coordinate_dump(h: SparseSymmetric) -> str:
    """Lower-triangle coordinate text: 'row col value', 1-indexed."""
    entries = sorted((int(c) + 1, int(r) + 1, float(v))
                     for r, c, v in zip(h.rows, h.cols, h.vals))
    return "".join(f"{r} {c} {v:.17g}\n" for r, c, v in entries)
