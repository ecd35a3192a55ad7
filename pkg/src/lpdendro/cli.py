"""Command-line entry point: ``lpdendro {transform,decode,search,spectrum,fer}``.

Settings resolve as flags > ``--config`` key=value file > defaults. Exit codes:
0 success, 1 usage error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from . import __version__
from .bpdecode import BpDecoder
from .channel import Snr, derived_rng, llr_from_output, sample_awgn
from .codes import AlistError, is_codeword, load_alist, save_alist
from .dendro import dendro_transform, extend_llr, project
from .landscape import build_spectrum, default_workers, spectrum_gap
from .lpdecode import Kind, LpDecoder
from .montecarlo import estimate_fer, fer_csv
from .search import SearchConfig
from .simplex import SimplexOptions

log = logging.getLogger("lpdendro")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    tol_int: float = 1e-6
    tol_y: float = 1e-8
    residual: float = 1e-8
    delta: float = 1e-3
    max_iterations: int = 200
    init_scale: float = 0.05
    max_doublings: int = 20
    workers: int = 0          # 0 -> LPDENDRO_WORKERS or the CPU count
    seed: int = 0

    def __post_init__(self):
        for name in ("tol_int", "tol_y", "residual", "delta", "init_scale"):
            if not getattr(self, name) > 0:
                raise UsageError(f"{name} must be positive")
        if self.workers < 0 or self.max_iterations < 1 or self.max_doublings < 0:
            raise UsageError("workers >= 0, max_iterations >= 1 and max_doublings >= 0 required")

    @property
    def effective_workers(self) -> int:
        return self.workers or default_workers()

    def search_config(self) -> SearchConfig:
        return SearchConfig(delta=self.delta, tol_y=self.tol_y, max_iterations=self.max_iterations,
                            init_scale=self.init_scale, max_doublings=self.max_doublings,
                            tol_int=self.tol_int)


def read_config_file(path: str) -> dict:
    known = {f.name: f.type for f in fields(RunConfig)}
    out = {}
    for n, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected key=value")
        key, val = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in known:
            raise UsageError(f"{path}:{n}: unknown setting {key!r}")
        out[key] = int(val) if known[key] in (int, "int") else float(val)
    return out


def resolve_config(args) -> RunConfig:
    values = read_config_file(args.config) if args.config else {}
    for f in fields(RunConfig):
        v = getattr(args, f.name, None)
        if v is not None:
            values[f.name] = v
    return RunConfig(**values)


def g12(x):
    """Round floats (recursively) to 12 significant digits for stable output."""
    if isinstance(x, (float, np.floating)):
        return float(f"{float(x):.12g}")
    if isinstance(x, dict):
        return {k: g12(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [g12(v) for v in x]
    if isinstance(x, np.ndarray):
        return g12(x.tolist())
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def _dump(obj, path: str | None) -> None:
    text = json.dumps(g12(obj), indent=1) + "\n"
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _echo(cfg: RunConfig, **extra) -> None:
    print(f"# seed={cfg.seed} config={json.dumps({**asdict(cfg), **extra})}", file=sys.stderr)


def _snr_from(args, many: bool = False):
    if (args.snr_db is None) == (args.s2 is None):
        raise UsageError("give exactly one of --snr-db or --s2")
    if args.snr_db is not None:
        vals = [float(v) for v in args.snr_db.split(",")] if many else [float(args.snr_db)]
        snrs = [Snr.from_db(v) for v in vals]
    else:
        vals = [float(v) for v in args.s2.split(",")] if many else [float(args.s2)]
        snrs = [Snr(v) for v in vals]
    return snrs if many else snrs[0]


# -- subcommands -------------------------------------------------------------

def cmd_transform(args, cfg):
    H = load_alist(args.alist)
    D = dendro_transform(H)
    out = Path(args.out)
    save_alist(D.matrix, out)
    sidecar = Path(args.sidecar) if args.sidecar else out.with_suffix(out.suffix + ".json")
    sidecar.write_text(D.sidecar_json() + "\n")
    print(f"{H.num_bits} bits, {H.num_checks} checks -> {D.matrix.num_bits} bits "
          f"({D.num_punctured} punctured), {D.matrix.num_checks} checks", file=sys.stderr)
    return 0


def cmd_decode(args, cfg):
    H = load_alist(args.alist)
    D = dendro_transform(H) if args.dendro else None
    code = D.matrix if D else H
    punctured = D.punctured if D else None
    if args.llr:
        h = np.array([float(t) for t in Path(args.llr).read_text().split()])
        if h.shape != (H.num_bits,):
            raise UsageError(f"LLR file has {h.size} values, code has {H.num_bits} bits")
        snr = None
    else:
        snr = _snr_from(args)
        _echo(cfg, snr_s2=snr.s_squared)
        x = sample_awgn(snr, H.num_bits, derived_rng(cfg.seed, 0))
        h = llr_from_output(x, snr)
    h_full = extend_llr(D, h) if D else h
    if args.decoder == "lp":
        dec = LpDecoder(code, punctured, tol_int=cfg.tol_int,
                        options=SimplexOptions(residual_tol=cfg.residual))
        pc = dec.decode(h_full)
        beliefs = project(D, pc.beliefs) if D else pc.beliefs
        report = {"kind": pc.kind.value, "beliefs": beliefs, "objective": pc.objective,
                  "iterations": pc.iterations}
    else:
        # sum-product wants exact LLRs, twice the LP cost coefficients
        res = BpDecoder(code, args.max_iters).decode(2.0 * h_full)
        bits = project(D, res.bits) if D else res.bits
        if not is_codeword(H, bits):
            kind = "NotConverged"
        else:
            kind = (Kind.CODEWORD if bits.any() else Kind.ZERO).value
        report = {"kind": kind, "beliefs": bits.astype(float), "objective": float(h @ bits),
                  "iterations": res.iterations, "converged": res.converged}
    _dump(report, args.output_json)
    return 0


def cmd_search(args, cfg):
    H = load_alist(args.alist)
    _echo(cfg, restarts=args.restarts)
    target = H if args.original else dendro_transform(H)
    spec = build_spectrum(target, args.restarts, cfg.seed, cfg.search_config(),
                          workers=cfg.effective_workers, code_id=Path(args.alist).name)
    runs = [{"restart": s.restart, "d_eff": s.d_eff, "kind": s.kind, "iterations": s.iterations,
             "straddle": bool(s.straddle_inner_zero and s.straddle_outer_nonzero) if s.ok else None,
             "balance": s.balance, "error": s.error}
            for s in spec.samples]
    best = min((s for s in spec.samples if s.ok), key=lambda s: s.d_eff, default=None)
    report = {
        "code": Path(args.alist).name,
        "form": "original" if args.original else "dendro",
        "seed": cfg.seed,
        "restarts": args.restarts,
        "aborted": spec.aborted,
        "min_d_eff": best.d_eff if best else None,
        "min_kind": best.kind if best else None,
        "runs": runs,
    }
    _dump(report, args.json_out)
    if args.json_out:
        print(f"min d_eff = {report['min_d_eff']}", file=sys.stderr)
    return 0


def cmd_spectrum(args, cfg):
    H = load_alist(args.alist)
    _echo(cfg, restarts=args.restarts, bin_width=args.bin_width)
    target = H if args.original else dendro_transform(H)
    spec = build_spectrum(target, args.restarts, cfg.seed, cfg.search_config(),
                          bin_width=args.bin_width, workers=cfg.effective_workers,
                          code_id=Path(args.alist).name)
    if args.json_out:
        Path(args.json_out).write_text(spec.to_json() + "\n")
    if args.csv_out:
        Path(args.csv_out).write_text(spec.to_csv())
    if args.density_out:
        Path(args.density_out).write_text(spec.density())
    if not (args.json_out or args.csv_out or args.density_out):
        sys.stdout.write(spec.to_csv())
    gap = spectrum_gap(spec, args.min_count) if spec.entries else None
    print(f"min d_eff = {spec.d_min}; aborted = {spec.aborted}; gap(min_count={args.min_count}) = {g12(gap)}",
          file=sys.stderr)
    return 0


def cmd_fer(args, cfg):
    H = load_alist(args.alist)
    snrs = _snr_from(args, many=True)
    _echo(cfg, decoder=args.decoder, target_errors=args.target_errors, max_frames=args.max_frames)
    code = H if args.original else dendro_transform(H)
    points = [estimate_fer(code, args.decoder, s, target_errors=args.target_errors,
                           max_frames=args.max_frames, seed=cfg.seed, batch_size=args.batch_size,
                           workers=cfg.effective_workers, max_iters=args.max_iters)
              for s in snrs]
    text = fer_csv(points)
    if args.csv_out:
        Path(args.csv_out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


# -- parser ------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _common(p):
    p.add_argument("--config", help="key=value settings file (flags take precedence)")
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--tol-int", dest="tol_int", type=float)
    p.add_argument("--residual", type=float)
    p.add_argument("-v", "--verbose", action="store_true")


def _search_flags(p):
    p.add_argument("--tol-y", dest="tol_y", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--max-iterations", dest="max_iterations", type=int)
    p.add_argument("--init-scale", dest="init_scale", type=float)
    p.add_argument("--max-doublings", dest="max_doublings", type=int)
    p.add_argument("--original", action="store_true",
                   help="search the code as given instead of its dendro form (check degree <= 12)")


def _snr_flags(p, many=False):
    suffix = " (comma-separated list)" if many else ""
    p.add_argument("--snr-db", dest="snr_db", help="SNR in dB, 10 log10(s^2)" + suffix)
    p.add_argument("--s2", help="SNR as s^2 = Ec/N0" + suffix)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lpdendro", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("transform", help="dendro-transform an alist code")
    _common(p)
    p.add_argument("--alist", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--sidecar", help="sidecar JSON path (default: OUT.json)")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("decode", help="decode one frame with LP or BP")
    _common(p)
    p.add_argument("--alist", required=True)
    src = p.add_mutually_exclusive_group()
    src.add_argument("--llr", help="file of N whitespace-separated cost coefficients h_i")
    _snr_flags(src)
    p.add_argument("--decoder", choices=("lp", "bp"), default="lp")
    p.add_argument("--max-iters", dest="max_iters", type=int, default=1024)
    p.add_argument("--dendro", action="store_true", help="decode the dendro form")
    p.add_argument("--output-json", dest="output_json", nargs="?", const=None, default=None,
                   help="write the JSON report here (stdout otherwise)")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("search", help="pseudo-codeword search from random starts")
    _common(p)
    _search_flags(p)
    p.add_argument("--alist", required=True)
    p.add_argument("--restarts", type=int, default=200)
    p.add_argument("--json-out", dest="json_out")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("spectrum", help="effective-distance spectrum")
    _common(p)
    _search_flags(p)
    p.add_argument("--alist", required=True)
    p.add_argument("--restarts", type=int, default=500)
    p.add_argument("--bin-width", dest="bin_width", type=float, default=0.05)
    p.add_argument("--min-count", dest="min_count", type=int, default=5)
    p.add_argument("--json-out", dest="json_out")
    p.add_argument("--csv-out", dest="csv_out")
    p.add_argument("--density-out", dest="density_out")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("fer", help="Monte Carlo frame-error rate")
    _common(p)
    p.add_argument("--alist", required=True)
    p.add_argument("--decoder", choices=("lp", "bp"), default="lp")
    _snr_flags(p, many=True)
    p.add_argument("--target-errors", dest="target_errors", type=int, default=100)
    p.add_argument("--max-frames", dest="max_frames", type=int, default=10_000_000)
    p.add_argument("--batch-size", dest="batch_size", type=int, default=200)
    p.add_argument("--max-iters", dest="max_iters", type=int, default=1024)
    p.add_argument("--original", action="store_true", help="decode the code as given")
    p.add_argument("--csv-out", dest="csv_out")
    p.set_defaults(func=cmd_fer)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = resolve_config(args)
    except UsageError as exc:
        print(f"lpdendro: error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args, cfg)
    except UsageError as exc:
        print(f"lpdendro: error: {exc}", file=sys.stderr)
        return 1
    except (AlistError, OSError, ValueError, RuntimeError) as exc:
        print(f"lpdendro: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())
