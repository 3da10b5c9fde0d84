"""Command-line front end: build decompositions, certify, export region data.

Subcommands
-----------
irreps     emit the block decomposition as JSON
region     emit sampled per-block fidelity points plus the N-point
hull       emit the convex hull (vertices + facets)
check      run the algebra-relation and spectrum-oracle suite
channels   sample Haar cloning channels, emit fidelity vectors + verdicts
symmetric  print the symmetric fidelity optimum and the Werner reference
convert    convert between singlet fraction and clone fidelity

All outputs are deterministic given the flags; files are written atomically
and carry a schema version plus the generating config.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile

import numpy as np

from . import __version__
from .algebra import decompose, decomposition_to_dict
from .oracle import (
    InconsistencyError,
    choi_state,
    clone_fidelity_from_singlet,
    full_vs_block_spectrum,
    haar_isometry,
    singlet_fractions,
    singlet_from_clone_fidelity,
    special_states,
)
from .regions import (
    MembershipOracle,
    build_hull,
    n_point,
    sample_block_region,
    symmetric_max,
)

SCHEMA_VERSION = "1.0.0"

IRREPS_N_CAP = 6
ORACLE_DIM_CAP = 2**18


def report_schema_version() -> str:
    return SCHEMA_VERSION


def _atomic_write(path: str, data: str):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".cloneregion-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(args, payload: dict | str):
    if isinstance(payload, dict):
        text = json.dumps(payload, indent=2) + "\n"
    else:
        text = payload
    if args.out:
        _atomic_write(args.out, text)
    else:
        sys.stdout.write(text)


def _envelope(args, body: dict) -> dict:
    config = {
        k: v
        for k, v in sorted(vars(args).items())
        if k not in ("func", "out") and v is not None
    }
    return {"schema": SCHEMA_VERSION, "config": config, **body}


def _require_caps(args, need_oracle: bool = False) -> None:
    if args.n > IRREPS_N_CAP:
        raise SystemExit(f"error: n = {args.n} exceeds the irreps cap n <= {IRREPS_N_CAP}")
    if need_oracle and args.d**args.n > ORACLE_DIM_CAP:
        raise SystemExit(
            f"error: d^n = {args.d**args.n} exceeds the oracle cap {ORACLE_DIM_CAP}"
        )


def cmd_irreps(args) -> int:
    _require_caps(args)
    dec = decompose(args.n, args.d, args.tol)
    _emit(args, _envelope(args, decomposition_to_dict(dec)))
    return 0


def cmd_region(args) -> int:
    _require_caps(args)
    dec = decompose(args.n, args.d, args.tol)
    samples = [sample_block_region(b, args.samples) for b in dec.blocks]
    npt = n_point(args.n, args.d, args.n_point_convention)
    if args.format == "csv":
        buf = io.StringIO()
        wcsv = csv.writer(buf, lineterminator="\n")
        max_dim = max(b.dim for b in dec.blocks)
        header = ["source"] + [f"a_{i+1}" for i in range(max_dim)] + [
            f"F_1{k}" for k in range(2, args.n + 1)
        ]
        wcsv.writerow(header)
        for s in samples:
            for state, point in zip(s.states, s.points):
                pad = [""] * (max_dim - len(state))
                wcsv.writerow(
                    [s.source] + [repr(float(x)) for x in state] + pad + [repr(float(x)) for x in point]
                )
        wcsv.writerow(["N"] + [""] * max_dim + [repr(float(x)) for x in npt])
        _emit(args, buf.getvalue())
    else:
        body = {
            "n": args.n,
            "d": args.d,
            "blocks": [
                {"alpha": s.source, "points": s.points.tolist()} for s in samples
            ],
            "n_point": npt.tolist(),
        }
        _emit(args, _envelope(args, body))
    return 0


def cmd_hull(args) -> int:
    _require_caps(args)
    dec = decompose(args.n, args.d, args.tol)
    if dec.clone_count not in (2, 3):
        raise SystemExit(
            f"error: exact hulls need 2 or 3 clones (n = 3 or 4), got n = {args.n}"
        )
    hull = build_hull(dec, args.samples, args.n_point_convention)
    body = {
        "n": args.n,
        "d": args.d,
        "hull": {
            "vertices": hull.vertices.tolist(),
            "sources": list(hull.sources),
            "facets": [
                {"normal": nrm.tolist(), "offset": float(off)}
                for nrm, off in zip(hull.facet_normals, hull.facet_offsets)
            ],
            "volume": hull.volume,
        },
    }
    _emit(args, _envelope(args, body))
    return 0


def run_checks(n: int, d: int, tol: float = 1e-9, seed: int = 0) -> list[tuple[str, bool, str]]:
    """Full certification suite for one (n, d); returns (name, ok, detail) rows."""
    results = []

    def add(name, ok, detail=""):
        results.append((name, bool(ok), detail))

    dec = decompose(n, d, tol)
    for block in dec.blocks:
        tag = f"alpha={block.alpha.parts}"
        worst_rel = worst_sym = worst_tr = 0.0
        for B in block.generators:
            worst_rel = max(worst_rel, float(np.max(np.abs(B @ B - d * B))))
            worst_sym = max(worst_sym, float(np.max(np.abs(B - B.T))))
            worst_tr = max(worst_tr, abs(np.trace(B) - d * block.dim_phi))
        add(f"{tag}: B^2 = d B", worst_rel < 1e-10, f"max dev {worst_rel:.2e}")
        add(f"{tag}: B symmetric", worst_sym < 1e-10, f"max dev {worst_sym:.2e}")
        add(f"{tag}: tr B = d dim_phi", worst_tr < 1e-10, f"max dev {worst_tr:.2e}")
        zdev = float(np.max(np.abs(block.Z.T @ block.Z - np.eye(block.dim))))
        add(f"{tag}: Z orthogonal", zdev < 1e-12, f"max dev {zdev:.2e}")
        mult_ok = all(
            m == nu.dimension for m, nu in zip(block.multiplicities, block.labels)
        ) and (block.dropped is None or block.dropped.dimension >= 1)
        add(f"{tag}: Q multiplicities match branching dims", mult_ok)

    if d**n <= ORACLE_DIM_CAP:
        rng = np.random.Generator(np.random.PCG64(seed))
        ok = True
        detail = ""
        try:
            for _ in range(5):
                w = rng.normal(size=n - 1)
                rep = full_vs_block_spectrum(dec, w, tol=1e-8)
                if rep.max_abs_gap > 1e-8:
                    ok, detail = False, f"gap {rep.max_abs_gap:.2e}"
        except InconsistencyError as exc:
            ok, detail = False, str(exc)
        add("full vs block spectra (5 random directions)", ok, detail)

        F = singlet_fractions(special_states("classical_clone", n, d))
        dev = float(np.max(np.abs(F - n_point(n, d))))
        add("classical-clone point equals N-point", dev < 1e-12, f"max dev {dev:.2e}")

    return results


def cmd_check(args) -> int:
    _require_caps(args, need_oracle=False)
    results = run_checks(args.n, args.d, args.tol, args.seed)
    failed = 0
    lines = []
    for name, ok, detail in results:
        status = "PASS" if ok else "FAIL"
        failed += not ok
        suffix = f"  ({detail})" if detail else ""
        lines.append(f"[{status}] {name}{suffix}")
    summary = f"{len(results) - failed}/{len(results)} checks passed"
    lines.append(summary)
    _emit(args, "\n".join(lines) + "\n")
    return 1 if failed else 0


def cmd_channels(args) -> int:
    _require_caps(args, need_oracle=True)
    dec = decompose(args.n, args.d, args.tol)
    hull = (
        build_hull(dec, 10**4, args.n_point_convention)
        if dec.clone_count in (2, 3)
        else None
    )
    oracle = MembershipOracle(dec, hull, args.n_point_convention)
    buf = io.StringIO()
    wcsv = csv.writer(buf, lineterminator="\n")
    wcsv.writerow(["seed"] + [f"F_1{k}" for k in range(2, args.n + 1)] + ["verdict"])
    N = args.n - 1
    for seed in range(args.seed, args.seed + args.samples):
        ch = haar_isometry(args.d, N, seed)
        F = singlet_fractions(choi_state(ch))
        verdict = oracle.classify(F, args.tol)
        wcsv.writerow([seed] + [repr(float(x)) for x in F] + [verdict])
    _emit(args, buf.getvalue())
    return 0


def cmd_symmetric(args) -> int:
    _require_caps(args)
    dec = decompose(args.n, args.d, args.tol)
    F = symmetric_max(dec, args.n_point_convention)
    f = clone_fidelity_from_singlet(F, args.d)
    N, d = args.n - 1, args.d
    werner_F = (N + d - 1) / (N * d)
    _emit(
        args,
        f"F = {F:.6f}, f = {f:.6f} (Werner reference F = {werner_F:.6f}, "
        f"f = {clone_fidelity_from_singlet(werner_F, d):.6f})\n",
    )
    return 0


def cmd_convert(args) -> int:
    if args.singlet is not None:
        f = clone_fidelity_from_singlet(args.singlet, args.d)
        _emit(args, f"f = {f:.9f}\n")
    elif args.clone_fidelity is not None:
        F = singlet_from_clone_fidelity(args.clone_fidelity, args.d)
        _emit(args, f"F = {F:.9f}\n")
    else:
        raise SystemExit("error: pass --singlet F or --clone-fidelity f")
    return 0


def _add_common(p: argparse.ArgumentParser, oracle_cap_note: bool = False):
    cap = f"; oracle commands need d^n <= {ORACLE_DIM_CAP}" if oracle_cap_note else ""
    p.add_argument("--n", type=int, default=3, help=f"total systems, 3..{IRREPS_N_CAP}{cap}")
    p.add_argument("--d", type=int, default=2, help="local dimension, >= 2")
    p.add_argument("--samples", type=int, default=10**4, help="sample count")
    p.add_argument("--seed", type=int, default=0, help="base RNG seed")
    p.add_argument("--tol", type=float, default=1e-9, help="numerical tolerance")
    p.add_argument("--out", type=str, default=None, help="output file (default stdout)")
    p.add_argument(
        "--format", choices=("json", "csv"), default="json", help="output format"
    )
    p.add_argument(
        "--n-point-convention",
        dest="n_point_convention",
        choices=("paper_1_over_d", "zero", "product_1_over_d2"),
        default="paper_1_over_d",
        help="where the semi-trivial ideal's fidelity point sits",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cloneregion",
        description="Admissible fidelity regions of 1->N universal quantum cloners",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    specs = [
        ("irreps", cmd_irreps, "emit the block decomposition as JSON"),
        ("region", cmd_region, "emit sampled fidelity points"),
        ("hull", cmd_hull, "emit the convex hull of the region"),
        ("check", cmd_check, "run the certification suite"),
        ("channels", cmd_channels, "sample Haar channels and classify them"),
        ("symmetric", cmd_symmetric, "symmetric optimum and Werner reference"),
    ]
    for name, func, help_ in specs:
        p = sub.add_parser(name, help=help_)
        _add_common(p, oracle_cap_note=(name in ("check", "channels")))
        p.set_defaults(func=func)

    p = sub.add_parser("convert", help="singlet fraction <-> clone fidelity")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--singlet", type=float, default=None, help="singlet fraction F")
    p.add_argument(
        "--clone-fidelity", dest="clone_fidelity", type=float, default=None,
        help="clone fidelity f",
    )
    p.add_argument("--out", type=str, default=None)
    p.set_defaults(func=cmd_convert)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "n", 3) < 3 or getattr(args, "d", 2) < 2:
        print("error: need n >= 3 and d >= 2", file=sys.stderr)
        return 2
    if getattr(args, "samples", 1) < 1 or getattr(args, "tol", 1.0) <= 0:
        print("error: need samples >= 1 and tol > 0", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except SystemExit as exc:
        if isinstance(exc.code, str):
            print(exc.code, file=sys.stderr)
            return 2
        raise
    except (ValueError, InconsistencyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
