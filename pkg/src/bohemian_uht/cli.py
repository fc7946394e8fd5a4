"""Command-line entry point: ``bohemian-uht <subcommand> ...``."""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

from . import charpoly as cp
from . import verify as vf
from .combinatorics import compositions, symbolic_p_n0
from .core import ToeplitzSpec, poly_to_json
from .maxheight import fibword_a, growth_ratios, mu_formula, tau_mu_stream
from .spectra import (
    COLORMAPS,
    DEFAULT_GRID,
    GridConfig,
    RootFindingError,
    accumulate_density,
    dump_grid,
    render_image,
)

log = logging.getLogger("bohemian_uht")

SPECTRA_DEFAULT_CAP = 14
# options whose values may legitimately start with '-'
_NEGATIVE_VALUED = {"-t", "--entries", "--window"}


@dataclass
class RunConfig:
    command: str
    n: int | None = None
    zero_diag: bool = False
    output: str | None = None
    width: int = DEFAULT_GRID
    height: int = DEFAULT_GRID
    window: tuple[float, float, float, float] | None = None
    colormap: str = "gray_r"
    workers: int = 1
    seed: int = 0

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        n = getattr(args, "n", None)
        if n is None:
            n = getattr(args, "n_max", None)
        return cls(
            command=args.command,
            n=n,
            zero_diag=getattr(args, "zero_diag", False),
            output=getattr(args, "output", None) or getattr(args, "image", None),
            width=getattr(args, "width", DEFAULT_GRID),
            height=getattr(args, "height", DEFAULT_GRID),
            window=getattr(args, "window", None),
            colormap=getattr(args, "colormap", "gray_r"),
            workers=getattr(args, "workers", 1),
            seed=getattr(args, "seed", 0),
        )


def _parse_ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip() != "")
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed entry list {text!r}; expected e.g. -1,0,1")


def _parse_sign(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        v = None
    if v not in (1, -1):
        raise argparse.ArgumentTypeError(f"subdiagonal must be +1 or -1, got {text!r}")
    return v


def _parse_window(text: str) -> tuple[float, float, float, float]:
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("window is re_min,re_max,im_min,im_max")
    return tuple(float(x) for x in parts)


def _normalize_argv(argv: list[str]) -> list[str]:
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _NEGATIVE_VALUED and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}" if tok.startswith("--") else tok + argv[i + 1])
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def _open_out(path: str | None):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", newline=""), True


def cmd_charpoly(args) -> int:
    spec = ToeplitzSpec(args.entries, args.subdiag)
    if args.method == "toeplitz":
        p = cp.charpoly_toeplitz(spec)
    elif args.method == "coeffs":
        p = cp.charpoly_coeffs(spec)
    elif args.method == "hessenberg":
        p = cp.charpoly_hessenberg(spec.to_hessenberg())
    else:
        p = cp.leibniz_oracle(spec.to_hessenberg())
    fh, close = _open_out(args.output)
    fh.write(poly_to_json(p) + "\n")
    if close:
        fh.close()
    return 0


def cmd_maxheight(args) -> int:
    if args.n_max < 2:
        raise SystemExit("maxheight: --n-max must be >= 2")
    fh, close = _open_out(args.output)
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["n", "tau", "mu"])
    for r in tau_mu_stream(args.n_max):
        if r.n >= args.n_min:
            w.writerow([r.n, str(r.tau), r.mu])
    if close:
        fh.close()
    return 0


def cmd_sequences(args) -> int:
    fh, close = _open_out(args.output)
    w = csv.writer(fh, lineterminator="\n")
    if args.kind == "growth":
        w.writerow(["n", "ratio"])
        for n, r in growth_ratios(args.n_max):
            w.writerow([n, f"{r:.15g}"])
    else:
        w.writerow(["n", "mu", "mu_formula", "delta_mu", "a_n_plus_326"])
        recs = list(tau_mu_stream(args.n_max + 1))
        for prev, cur in zip(recs, recs[1:]):
            n = prev.n
            if n < 3:
                continue
            w.writerow([n, prev.mu, mu_formula(n), cur.mu - prev.mu, fibword_a(n + 326)])
    if close:
        fh.close()
    return 0


def cmd_compositions(args) -> int:
    fh, close = _open_out(args.output)
    if args.symbolic:
        fh.write(str(symbolic_p_n0(args.n)) + "\n")
    else:
        for c in compositions(args.n):
            fh.write("+".join(map(str, c)) + "\n")
    if close:
        fh.close()
    return 0


def cmd_spectra(args) -> int:
    cap = args.max_n
    if args.n > cap:
        raise SystemExit(f"spectra: n={args.n} exceeds cap {cap} (raise with --max-n)")
    cfg = GridConfig(width=args.width, height=args.height, window=args.window,
                     tol=args.tol, workers=args.workers)

    def progress(i, total):
        log.info("shard %d/%d", i, total)

    try:
        grid = accumulate_density(args.n, args.zero_diag, cfg, progress=progress)
    except RootFindingError as exc:
        print(f"spectra: root finding failed: {exc}", file=sys.stderr)
        if exc.spec is not None:
            print(f"failing spec: t={','.join(map(str, exc.spec.t))}", file=sys.stderr)
        return 2
    written = []
    if args.image:
        fmt = "png" if args.image.endswith(".png") else "pgm"
        Path(args.image).write_bytes(render_image(grid, args.colormap, fmt))
        written.append(args.image)
    if args.dump:
        dump_grid(grid, args.dump)
        written.append(args.dump)
    print(
        f"n={args.n} zero_diag={args.zero_diag} total_roots={grid.total_roots} hits={grid.hits} "
        f"outside={grid.outside} real_axis={grid.real_axis_hits} max_residual={grid.max_residual:.3e} "
        f"window={','.join(f'{x:g}' for x in grid.window)} files={','.join(written) or '-'}"
    )
    return 0


def cmd_verify(args) -> int:
    def echo(r: vf.CheckResult):
        print(f"[{'PASS' if r.passed else 'FAIL'}] {r.name}: {r.detail} ({r.seconds:.2f}s)")

    results = vf.run(args.level, seed=args.seed, workers=args.workers, n_max=args.n_max, echo=echo)
    ok = all(r.passed for r in results)
    report = {"level": args.level, "seed": args.seed, "passed": ok, "checks": vf.as_dicts(results)}
    if args.json:
        Path(args.json).write_text(json.dumps(report, indent=2) + "\n")
    print(f"verify {args.level}: {'PASS' if ok else 'FAIL'}")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bohemian-uht", description=__doc__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("charpoly", help="characteristic polynomial as JSON coefficient strings")
    p.add_argument("-t", "--entries", type=_parse_ints, required=True, help="t_1,...,t_n")
    p.add_argument("-s", "--subdiag", type=_parse_sign, default=1)
    p.add_argument("--method", choices=("toeplitz", "coeffs", "hessenberg", "leibniz"), default="toeplitz")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_charpoly)

    p = sub.add_parser("maxheight", help="CSV n,tau,mu for the maximal-height family")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--n-min", type=int, default=2)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_maxheight)

    p = sub.add_parser("sequences", help="mu_n identities or growth ratios as CSV")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--kind", choices=("mu", "growth"), default="mu")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_sequences)

    p = sub.add_parser("compositions", help="compositions of n, or the symbolic p_(n,0)")
    p.add_argument("n", type=int)
    p.add_argument("--symbolic", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_compositions)

    p = sub.add_parser("spectra", help="eigenvalue density image and grid dump")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--zero-diag", action="store_true")
    p.add_argument("--width", type=int, default=DEFAULT_GRID)
    p.add_argument("--height", type=int, default=DEFAULT_GRID)
    p.add_argument("--window", type=_parse_window, default=None)
    p.add_argument("--colormap", choices=COLORMAPS, default="gray_r")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--max-n", type=int, default=SPECTRA_DEFAULT_CAP)
    p.add_argument("--image", help="output image (.pgm or .png)")
    p.add_argument("--dump", help="raw counts (.npy or .csv)")
    p.set_defaults(func=cmd_spectra)

    p = sub.add_parser("verify", help="run the cross-module invariant suite")
    p.add_argument("--level", choices=vf.LEVELS, default="quick")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--n-max", type=int, default=None, help="sequence window for --level extended")
    p.add_argument("--json", help="write machine-readable report here")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv: list[str] | None = None) -> int:
    argv = _normalize_argv(list(sys.argv[1:] if argv is None else argv))
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    log.debug("%s", RunConfig.from_args(args))
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
