import math

import numpy as np
import pytest

from jcxy.eigensolve import spectrum_from_blocks
from jcxy.geometry import Topology, build_coupling_map
from jcxy.hamiltonian import build_generator_pair
from jcxy.sectors import build_sector_blocks, decompose
from jcxy.sweep import (
    HALF_PI,
    PhiGrid,
    find_max,
    sector_sweep,
    sweep,
    symmetry_report,
)

SX = np.array([[0.0, 1.0], [1.0, 0.0]]) / 2
SY = np.array([[0.0, -1.0j], [1.0j, 0.0]]) / 2
ID2 = np.eye(2)


def xy_chain_dense(n_sites, topology):
    """Independent XY Hamiltonian from Kronecker products of spin matrices."""
    dim = 2 ** n_sites

    def site_op(op, site):
        full = np.array([[1.0]])
        for s in range(1, n_sites + 1):  # site s occupies bit s-1 here
            full = np.kron(op if s == site else ID2, full)
        return full

    h = np.zeros((dim, dim), dtype=complex)
    for i, j, w in build_coupling_map(n_sites, topology).pairs:
        h -= 2.0 * w * (site_op(SX, i) @ site_op(SX, j)
                        + site_op(SY, i) @ site_op(SY, j))
    assert np.max(np.abs(h.imag)) < 1e-15
    return h.real


def open_chain_free_fermion_max(n_sites):
    """Largest XY eigenvalue: sum of the positive single-particle energies."""
    modes = 2.0 * np.cos(np.arange(1, n_sites + 1) * np.pi / (n_sites + 1))
    return modes[modes > 0].sum()


class TestPhiGrid:
    def test_uniform_includes_endpoints(self):
        grid = PhiGrid.uniform(721)
        assert grid.values[0] == -HALF_PI
        assert grid.values[-1] == HALF_PI
        assert len(grid) == 721
        assert np.all(np.diff(grid.values) > 0)

    def test_explicit_values_snap_endpoints(self):
        grid = PhiGrid.from_values([-1.570796326, 0.0, 1.570796326])
        assert grid.values[0] == -HALF_PI
        assert grid.values[-1] == HALF_PI

    def test_rejects_bad_grids(self):
        with pytest.raises(ValueError):
            PhiGrid.uniform(1)
        with pytest.raises(ValueError):
            PhiGrid.from_values([0.0, HALF_PI])
        with pytest.raises(ValueError):
            PhiGrid(values=np.array([-HALF_PI, 0.3, 0.3, HALF_PI]))


class TestSweep:
    def test_pure_jc_point_multiplicities(self):
        """At phi=0 the photon-spin flip-flop gives levels -1, 0, +1 with
        multiplicity 2^(N-1), 2^N, 2^(N-1)."""
        n = 4
        pair = build_generator_pair(n, Topology.OPEN_NN, 2)
        result = sweep(pair, PhiGrid.from_values([-HALF_PI, 0.0, HALF_PI]))
        energies = result.spectra[1].energies
        assert np.allclose(np.unique(np.round(energies, 12)), [-1.0, 0.0, 1.0])
        assert np.sum(np.isclose(energies, -1.0)) == 2 ** (n - 1)
        assert np.sum(np.isclose(energies, 0.0)) == 2 ** n
        assert np.sum(np.isclose(energies, 1.0)) == 2 ** (n - 1)

    @pytest.mark.parametrize("topology", [Topology.OPEN_NN, Topology.RING_LONG_RANGE_ARC])
    def test_pure_magnetic_point_is_doubled_xy_spectrum(self, topology):
        n = 4
        pair = build_generator_pair(n, topology, 1)
        result = sweep(pair, PhiGrid.from_values([-HALF_PI, 0.0, HALF_PI]))
        got = result.spectra[2].energies  # phi = +pi/2
        xy = np.linalg.eigvalsh(xy_chain_dense(n, topology))
        doubled = np.sort(np.concatenate([xy, xy]))
        assert np.max(np.abs(got - doubled)) <= 1e-10

    def test_opposite_ends_negate(self):
        pair = build_generator_pair(5, Topology.RING_NN, 1)
        result = sweep(pair, PhiGrid.from_values([-HALF_PI, 0.0, HALF_PI]))
        lo = result.spectra[0].energies
        hi = result.spectra[2].energies
        assert np.max(np.abs(lo + hi[::-1])) <= 1e-10

    def test_normalization_is_scale_free(self):
        pair = build_generator_pair(3, Topology.OPEN_LONG_RANGE, 1)
        blocks = build_sector_blocks(pair)
        phi = 0.4
        g, j = math.cos(phi), math.sin(phi)
        unit = spectrum_from_blocks(blocks, g, j, scale=math.hypot(g, j))
        # power-of-two rescaling is exact all the way through the solver
        doubled = spectrum_from_blocks(blocks, 2 * g, 2 * j,
                                       scale=math.hypot(2 * g, 2 * j))
        assert np.array_equal(unit.energies, doubled.energies)
        tripled = spectrum_from_blocks(blocks, 3 * g, 3 * j,
                                       scale=math.hypot(3 * g, 3 * j))
        assert np.max(np.abs(unit.energies - tripled.energies)) <= 1e-12

    def test_top_curve_is_continuous(self):
        pair = build_generator_pair(3, Topology.OPEN_NN, 1)
        result = sweep(pair, PhiGrid.uniform(721))
        tops = np.array([s.energies[-1] for s in result.spectra])
        dphi = math.pi / 720
        lipschitz = (np.linalg.norm(pair.h_g.to_dense(), 2)
                     + np.linalg.norm(pair.h_j.to_dense(), 2))
        assert np.max(np.abs(np.diff(tops))) < 10 * dphi * lipschitz

    def test_only_extremal_sectors_are_identically_zero(self):
        n = 4
        pair = build_generator_pair(n, Topology.OPEN_NN, 1)
        result = sweep(pair, PhiGrid.uniform(41))
        extremal = (n + 1) / 2
        for spec in result.spectra:
            for label in (extremal, -extremal):
                assert np.all(spec.energies[spec.total_mz == label] == 0.0)
        for label in np.unique(result.spectra[0].total_mz):
            if abs(label) == extremal:
                continue
            largest = max(np.max(np.abs(s.energies[s.total_mz == label]))
                          for s in result.spectra)
            assert largest > 1e-6

    def test_worker_count_does_not_change_output(self):
        pair = build_generator_pair(3, Topology.RING_NN, 1)
        grid = PhiGrid.uniform(31)
        serial = sweep(pair, grid, workers=1)
        parallel = sweep(pair, grid, workers=2)
        for a, b in zip(serial.spectra, parallel.spectra):
            assert np.array_equal(a.energies, b.energies)
            assert np.array_equal(a.total_mz, b.total_mz)

    def test_rejects_bad_worker_count(self):
        pair = build_generator_pair(2, Topology.OPEN_NN, 1)
        with pytest.raises(ValueError):
            sweep(pair, PhiGrid.uniform(5), workers=0)


class TestFindMax:
    def test_two_sites_flat(self):
        report = find_max(build_generator_pair(2, Topology.OPEN_NN, 1))
        assert report.is_flat
        assert report.e_max == pytest.approx(1.0, abs=1e-9)
        assert report.phi_max == 0.0

    def test_four_sites_magnetic_boundary(self):
        report = find_max(build_generator_pair(4, Topology.OPEN_NN, 1))
        assert not report.is_flat
        assert report.e_max == pytest.approx(open_chain_free_fermion_max(4), abs=1e-9)
        assert report.phi_max == pytest.approx(-HALF_PI, abs=1e-6)

    def test_three_sites_interior_maximum(self):
        report = find_max(build_generator_pair(3, Topology.OPEN_NN, 1))
        assert not report.is_flat
        # photon admixture beats the pure magnetic value strictly inside
        assert report.e_max > open_chain_free_fermion_max(3) + 1e-3
        assert abs(report.phi_max) < HALF_PI - 1e-3
        assert report.phi_max < 0  # symmetric spectrum reports the non-positive angle


class TestSymmetryReport:
    def test_open_nn_both_held(self):
        report = symmetry_report(build_generator_pair(5, Topology.OPEN_NN, 1),
                                 [math.pi / 4])
        assert report.g_sign == "held"
        assert report.j_sign == "held"

    def test_open_long_range_j_broken(self):
        report = symmetry_report(build_generator_pair(5, Topology.OPEN_LONG_RANGE, 1),
                                 [math.pi / 4])
        assert report.g_sign == "held"
        assert report.j_sign == "broken"

    def test_ring_parity_effect(self):
        odd = symmetry_report(build_generator_pair(5, Topology.RING_NN, 1),
                              [math.pi / 4])
        even = symmetry_report(build_generator_pair(6, Topology.RING_NN, 1),
                               [math.pi / 4])
        assert odd.j_sign == "broken"
        assert even.j_sign == "held"
        assert even.g_sign == "held"

    def test_rejects_degenerate_probes(self):
        pair = build_generator_pair(3, Topology.OPEN_NN, 1)
        for phi in (0.0, HALF_PI, -HALF_PI):
            with pytest.raises(ValueError):
                symmetry_report(pair, [phi])
        with pytest.raises(ValueError):
            symmetry_report(pair, [])


class TestSectorSweep:
    def test_extremal_sector_is_identically_zero(self):
        pair = build_generator_pair(3, Topology.OPEN_NN, 1)
        result = sector_sweep(pair, PhiGrid.uniform(41), 2.0)
        for spec in result.spectra:
            assert len(spec) == 2
            assert np.all(spec.energies == 0.0)
        assert result.metadata.sector_filter == 2.0

    def test_merged_filters_reproduce_unfiltered(self):
        pair = build_generator_pair(3, Topology.RING_LONG_RANGE_CHORD, 2)
        grid = PhiGrid.uniform(11)
        unfiltered = sweep(pair, grid)
        abs_values = sorted({abs(s.total_mz) for s in decompose(3)})
        for i in range(len(grid)):
            merged = []
            for v in abs_values:
                spec = sector_sweep(pair, grid, v).spectra[i]
                merged.extend(zip(spec.energies, spec.total_mz))
            ref = sorted(zip(unfiltered.spectra[i].energies,
                             unfiltered.spectra[i].total_mz))
            assert sorted(merged) == ref

    def test_rejects_missing_sector_value(self):
        pair = build_generator_pair(4, Topology.OPEN_NN, 1)
        with pytest.raises(ValueError):
            sector_sweep(pair, PhiGrid.uniform(5), 2.0)  # N=4 has half-integers
        with pytest.raises(ValueError):
            sector_sweep(pair, PhiGrid.uniform(5), 3.0)
        with pytest.raises(ValueError):
            sector_sweep(pair, PhiGrid.uniform(5), 0.3)
