"""Command line front end.

Subcommands: spectrum (one parameter point), sweep (full phi grid,
optionally restricted to one |total_mz| class), table (regression
against the bundled literature reference values), verify (invariant
self-checks).  Exit codes: 0 ok, 2 usage or I/O error, 3 numerical
failure, 4 property failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .basis import MAX_SITES, dimension, encode
from .eigensolve import (
    DEFAULT_DEGENERACY_TOL,
    SolverError,
    Spectrum,
    degeneracy_summary,
    spectrum_from_blocks,
)
from .geometry import Topology
from .hamiltonian import (
    SparseSymmetric,
    assemble,
    build_generator_pair,
    build_jc_generator,
    build_photon_explicit,
    coordinate_dump,
)
from .sectors import SectorStraddleError, build_sector_blocks, verify_commutation
from .sweep import (
    DEFAULT_GRID_POINTS,
    PhiGrid,
    SweepResult,
    find_max,
    sector_sweep,
    sweep,
    symmetry_report,
)

SCHEMA_VERSION = 1

# Literature reference values for the open NN chain (decimal commas in the
# source converted to points); phi_max None marks the flat N=2 row.
TABLE_REFERENCE: dict[int, tuple[int, float, float | None]] = {
    2: (3, 1.0, None),
    3: (3, 1.6180, -1.0196),
    4: (9, 2.2361, -1.5708),
    5: (9, 2.8064, -1.3188),
    6: (27, 3.4940, -1.5708),
    7: (27, 4.0649, -1.4212),
    8: (58, 4.7588, -1.5708),
    9: (91, 5.3362, -1.4684),
    10: (256, 6.0267, -1.5708),
}

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3
EXIT_PROPERTY = 4


@dataclass(frozen=True)
class RunConfig:
    n_sites: int
    topology: Topology
    jc_site: int
    tol: float
    out_format: str
    out_path: str | None
    workers: int


def _fmt12(x: float) -> str:
    return format(x + 0.0, ".12g")


def _fmt_mz(x: float) -> str:
    return format(x + 0.0, "g")


def _write_output(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        Path(out_path).write_text(text)


def _records(phi: float, spec: Spectrum) -> list[dict]:
    return [
        {"phi": float(phi), "total_mz": float(mz), "level_index": idx,
         "energy": float(e)}
        for idx, (e, mz) in enumerate(zip(spec.energies, spec.total_mz))
    ]


def _sweep_records(result: SweepResult) -> list[dict]:
    records = []
    for phi, spec in zip(result.grid.values, result.spectra):
        records.extend(_records(float(phi), spec))
    return records


def _csv_text(records: list[dict]) -> str:
    lines = ["phi,total_mz,level_index,energy"]
    for r in records:
        lines.append(f"{_fmt12(r['phi'])},{_fmt_mz(r['total_mz'])},"
                     f"{r['level_index']},{_fmt12(r['energy'])}")
    return "\n".join(lines) + "\n"


def _json_text(kind: str, metadata: dict, records: list[dict]) -> str:
    doc = {"schema_version": SCHEMA_VERSION, "kind": kind,
           "metadata": metadata, "records": records}
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def _metadata_dict(config: RunConfig, **extra) -> dict:
    md = {"n_sites": config.n_sites, "topology": config.topology.value,
          "jc_site": config.jc_site, "degeneracy_tol": config.tol}
    md.update(extra)
    return md


def _config(args: argparse.Namespace) -> RunConfig:
    n = args.n
    if not 1 <= n <= MAX_SITES:
        raise ValueError(f"--n must be in 1..{MAX_SITES}")
    topology = Topology.from_name(args.topology)
    k = args.k
    if not 1 <= k <= n:
        raise ValueError(f"--k must be in 1..{n}")
    if not args.tol > 0:
        raise ValueError("--tol must be positive")
    workers = getattr(args, "workers", 1)
    if workers < 1:
        raise ValueError("--workers must be >= 1")
    return RunConfig(n_sites=n, topology=topology, jc_site=k, tol=args.tol,
                     out_format=args.format, out_path=args.out, workers=workers)


def cmd_spectrum(args: argparse.Namespace) -> int:
    config = _config(args)
    phis = args.phi or []
    has_gj = args.g is not None or args.j is not None
    if has_gj and (args.g is None or args.j is None):
        raise ValueError("--g and --j must be given together")
    if len(phis) + (1 if has_gj else 0) != 1:
        raise ValueError("give exactly one parameter point: one --phi, or --g with --j")
    if has_gj:
        g, j = float(args.g), float(args.j)
        if not (math.isfinite(g) and math.isfinite(j)):
            raise ValueError("--g and --j must be finite")
        phi = math.atan2(j, g)
    else:
        phi = float(phis[0])
        g, j = math.cos(phi), math.sin(phi)
    norm = math.hypot(g, j)
    if norm == 0.0:
        raise ValueError("G = J = 0 has no normalized spectrum")

    pair = build_generator_pair(config.n_sites, config.topology, config.jc_site)
    if args.dump_matrix is not None:
        Path(args.dump_matrix).write_text(coordinate_dump(assemble(pair, g, j)))
    spec = spectrum_from_blocks(build_sector_blocks(pair), g, j, scale=norm)
    summary = degeneracy_summary(spec, config.tol)

    records = _records(phi, spec)
    if config.out_format == "json":
        metadata = _metadata_dict(config, g=g, j=j, phi=phi,
                                  normalization=norm,
                                  distinct_count=summary.distinct_count)
        text = _json_text("spectrum", metadata, records)
    else:
        text = _csv_text(records)
    _write_output(text, config.out_path)
    print(f"{len(spec)} energies, {summary.distinct_count} distinct "
          f"(tol {config.tol:g})", file=sys.stderr)
    return EXIT_OK


def _parse_grid(args: argparse.Namespace) -> PhiGrid:
    if args.phi_list is not None:
        items = [s for s in args.phi_list.split(",") if s.strip()]
        if not items:
            raise ValueError("--phi-list is empty")
        return PhiGrid.from_values(float(s) for s in items)
    return PhiGrid.uniform(args.grid_points)


def cmd_sweep(args: argparse.Namespace) -> int:
    config = _config(args)
    grid = _parse_grid(args)
    pair = build_generator_pair(config.n_sites, config.topology, config.jc_site)
    if args.sector is not None:
        result = sector_sweep(pair, grid, args.sector, workers=config.workers,
                              degeneracy_tol=config.tol)
    else:
        result = sweep(pair, grid, workers=config.workers, degeneracy_tol=config.tol)
    records = _sweep_records(result)
    if config.out_format == "json":
        metadata = _metadata_dict(config, grid_points=len(grid),
                                  sector_filter=result.metadata.sector_filter)
        text = _json_text("sweep", metadata, records)
    else:
        text = _csv_text(records)
    _write_output(text, config.out_path)
    return EXIT_OK


def cmd_table(args: argparse.Namespace) -> int:
    n_min, n_max = args.n_min, args.n_max
    if not 2 <= n_min <= n_max <= 10:
        raise ValueError("table range must satisfy 2 <= n-min <= n-max <= 10")
    topology = Topology.from_name(args.topology)
    if not 1 <= args.k <= n_min:
        raise ValueError(f"--k must be in 1..{n_min} for this table range")
    if not args.tol > 0:
        raise ValueError("--tol must be positive")
    config = RunConfig(n_sites=n_min, topology=topology, jc_site=args.k,
                       tol=args.tol, out_format=args.format, out_path=args.out,
                       workers=1)

    rows = []
    for n in range(n_min, n_max + 1):
        pair = build_generator_pair(n, config.topology, config.jc_site)
        blocks = build_sector_blocks(pair)
        spec = spectrum_from_blocks(blocks, 0.0, 1.0)  # phi = pi/2, pure magnetic
        distinct = degeneracy_summary(spec, config.tol).distinct_count
        report = find_max(pair)
        row = {"n": n, "distinct": distinct,
               "e_max": report.e_max,
               "phi_max": None if report.is_flat else report.phi_max,
               "is_flat": report.is_flat}
        ref = TABLE_REFERENCE.get(n) if config.topology == Topology.OPEN_NN else None
        if ref is not None:
            ref_distinct, ref_emax, ref_phimax = ref
            row["distinct_ref"] = ref_distinct
            row["distinct_dev"] = distinct - ref_distinct
            row["e_max_ref"] = ref_emax
            row["e_max_dev"] = report.e_max - ref_emax
            row["phi_max_ref"] = ref_phimax
            if ref_phimax is None or report.is_flat:
                row["phi_max_dev"] = None
            else:
                row["phi_max_dev"] = report.phi_max - ref_phimax
        rows.append(row)

    if config.out_format == "json":
        text = _json_text("table", _metadata_dict(config), rows)
    else:
        cols = ["n", "distinct", "distinct_ref", "distinct_dev", "e_max",
                "e_max_ref", "e_max_dev", "phi_max", "phi_max_ref",
                "phi_max_dev", "is_flat"]
        lines = [",".join(cols)]
        for row in rows:
            cells = []
            for c in cols:
                v = row.get(c)
                if v is None:
                    cells.append("flat" if c.startswith("phi_max") and row["is_flat"] else "")
                elif isinstance(v, bool):
                    cells.append(str(v).lower())
                elif isinstance(v, int):
                    cells.append(str(v))
                else:
                    cells.append(_fmt12(v))
            lines.append(",".join(cells))
        text = "\n".join(lines) + "\n"
    _write_output(text, config.out_path)

    for row in rows:
        if "distinct_ref" in row:
            flags = []
            if row["distinct_dev"] != 0:
                flags.append(f"distinct off by {row['distinct_dev']:+d}")
            if abs(row["e_max_dev"]) > 5e-4:
                flags.append(f"e_max off by {row['e_max_dev']:+.2e}")
            if row.get("phi_max_dev") is not None and abs(row["phi_max_dev"]) > 5e-3:
                flags.append(f"phi_max off by {row['phi_max_dev']:+.2e}")
            status = "; ".join(flags) if flags else "matches reference"
            print(f"N={row['n']}: {status}", file=sys.stderr)
    return EXIT_OK


def _sector_breaking_term(n_sites: int) -> SparseSymmetric:
    # sigma_x on site 1: flips a single spin bit, so it straddles sectors
    dim = dimension(n_sites)
    codes = np.arange(dim, dtype=np.int64)
    src = codes[((codes >> 1) & 1) == 0]
    return SparseSymmetric(dim=dim, rows=src, cols=src + 2,
                           vals=np.full(src.size, 1e-3))


def _combine(a: SparseSymmetric, b: SparseSymmetric) -> SparseSymmetric:
    return SparseSymmetric(dim=a.dim,
                           rows=np.concatenate([a.rows, b.rows]),
                           cols=np.concatenate([a.cols, b.cols]),
                           vals=np.concatenate([a.vals, b.vals]))


def cmd_verify(args: argparse.Namespace) -> int:
    config = _config(args)
    n = config.n_sites
    if n > 10:
        raise ValueError("verify supports --n up to 10 (dense oracle)")
    rng = np.random.default_rng(args.seed)
    pair = build_generator_pair(n, config.topology, config.jc_site)
    blocks = build_sector_blocks(pair)
    results: list[tuple[str, bool, str]] = []

    # [Inv, H] = 0, exactly
    worst = 0.0
    for _ in range(5):
        g, j = rng.uniform(-2, 2, size=2)
        h = assemble(pair, g, j)
        if args.inject_sector_breaking:
            h = _combine(h, _sector_breaking_term(n))
        worst = max(worst, verify_commutation(h, n))
    results.append(("commutation", worst == 0.0, f"max violation {worst:g}"))

    # fully polarized states are annihilated for every (G, J)
    top_code = encode(1, [1] * n).code
    worst = 0.0
    for _ in range(10):
        g, j = rng.uniform(-2, 2, size=2)
        h = assemble(pair, g, j)
        for code in (top_code, 0):
            v = np.zeros(h.dim)
            v[code] = 1.0
            resid = float(np.linalg.norm(h.matvec(v)))
            bound = 1e-14 * (abs(g) + abs(j))
            worst = max(worst, resid - bound)
    results.append(("zero-modes", worst <= 0.0, "polarized states annihilated"))

    # operator-product construction agrees with the bit-flip builder
    same = build_photon_explicit(n, config.jc_site).same_entries(
        build_jc_generator(n, config.jc_site))
    results.append(("photon-mapping", same, "explicit == pseudo-spin, entrywise"))

    # sector-merged spectrum equals the whole-matrix spectrum
    draws = 20 if dimension(n) <= 256 else 3
    worst = 0.0
    for _ in range(draws):
        g, j = rng.uniform(-2, 2, size=2)
        merged = spectrum_from_blocks(blocks, g, j).energies
        whole = np.linalg.eigvalsh(assemble(pair, g, j).to_dense())
        worst = max(worst, float(np.max(np.abs(merged - whole))))
    results.append(("sector-oracle", worst <= 1e-10, f"max deviation {worst:.2e}"))

    # spectrum(-G, -J) = -spectrum(G, J)
    worst = 0.0
    for _ in range(20):
        g, j = rng.uniform(-2, 2, size=2)
        s = spectrum_from_blocks(blocks, g, j).energies
        s_flip = spectrum_from_blocks(blocks, -g, -j).energies
        worst = max(worst, float(np.max(np.abs(s + s_flip[::-1]))))
    results.append(("sign-flip", worst <= 1e-10, f"max deviation {worst:.2e}"))

    ok = True
    for name, passed, detail in results:
        ok = ok and passed
        print(f"{'PASS' if passed else 'FAIL'} {name}: {detail}")
    report = symmetry_report(pair, [math.pi / 6, math.pi / 4, math.pi / 3])
    print(f"INFO g-sign symmetry: {report.g_sign}; j-sign symmetry: {report.j_sign}")
    return EXIT_OK if ok else EXIT_PROPERTY


def _add_common(p: argparse.ArgumentParser, with_workers: bool = False,
                with_n: bool = True) -> None:
    if with_n:
        p.add_argument("--n", type=int, required=True, help="number of spin sites")
    p.add_argument("--topology", default="open-nn",
                   choices=[t.value for t in Topology], help="molecule geometry")
    p.add_argument("--k", type=int, default=1, help="site coupled to the photon")
    p.add_argument("--tol", type=float, default=DEFAULT_DEGENERACY_TOL,
                   help="degeneracy grouping tolerance")
    p.add_argument("--format", default="csv", choices=["csv", "json"])
    p.add_argument("--out", default=None, help="output path (default stdout)")
    if with_workers:
        p.add_argument("--workers", type=int, default=1,
                       help="parallel worker processes")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jcxy",
        description="Energy spectra of a spin-1/2 XY molecule coupled to a "
                    "one-photon cavity mode",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="spectrum at one parameter point")
    _add_common(p)
    p.add_argument("--phi", type=float, action="append",
                   help="coupling angle, G=cos(phi), J=sin(phi)")
    p.add_argument("--g", type=float, default=None, help="photon coupling G")
    p.add_argument("--j", type=float, default=None, help="spin coupling J")
    p.add_argument("--dump-matrix", default=None,
                   help="write the assembled matrix in coordinate format")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("sweep", help="spectra over a phi grid")
    _add_common(p, with_workers=True)
    p.add_argument("--grid-points", type=int, default=DEFAULT_GRID_POINTS,
                   help="uniform grid size over [-pi/2, pi/2]")
    p.add_argument("--phi-list", default=None,
                   help="comma-separated explicit phi values (must span -pi/2..pi/2)")
    p.add_argument("--sector", type=float, default=None,
                   help="restrict to |total_mz| = this value")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("table", help="distinct counts and spectrum maxima per N")
    _add_common(p, with_n=False)
    p.add_argument("--n-min", type=int, default=2)
    p.add_argument("--n-max", type=int, default=10)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("verify", help="run the invariant self-checks")
    _add_common(p)
    p.add_argument("--seed", type=int, default=1234)
    p.add_argument("--inject-sector-breaking", action="store_true",
                   help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse uses 2 for usage errors
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SolverError, SectorStraddleError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
