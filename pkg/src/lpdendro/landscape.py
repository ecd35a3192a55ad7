"""Effective-distance spectra from many randomized pseudo-codeword searches."""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .channel import derived_rng
from .search import SearchCode, SearchConfig, SearchError, search_once

DEFAULT_BIN_WIDTH = 0.05


@dataclass
class RestartRecord:
    restart: int
    d_eff: float | None
    kind: str | None
    iterations: int = 0
    straddle_inner_zero: bool | None = None
    straddle_outer_nonzero: bool | None = None
    balance: float | None = None
    error: str | None = None
    beliefs: list | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


@dataclass
class SpectrumRecord:
    entries: list[dict]
    bin_width: float
    range: tuple[float, float] | None
    provenance: dict
    samples: list[RestartRecord] = field(default_factory=list)
    aborted: int = 0

    @property
    def successes(self) -> list[RestartRecord]:
        return [s for s in self.samples if s.ok]

    @property
    def d_min(self) -> float | None:
        ds = [s.d_eff for s in self.successes]
        return min(ds) if ds else None

    def to_json(self) -> str:
        return json.dumps({
            "entries": self.entries,
            "bin_width": self.bin_width,
            "range": self.range,
            "provenance": self.provenance,
            "aborted": self.aborted,
            "d_min": self.d_min,
            "samples": [asdict(s) for s in self.samples],
        }, indent=1, default=_json_default)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["d_eff", "kind", "count"])
        for e in self.entries:
            w.writerow([f"{e['d_eff']:.12g}", e["kind"], e["count"]])
        return buf.getvalue()

    def density(self) -> str:
        """Two-column ``d density`` text, one line per bin, normalized to unit area."""
        total = sum(e["count"] for e in self.entries)
        per_bin: dict[int, int] = {}
        for e in self.entries:
            k = int(math.floor(e["d_eff"] / self.bin_width + 1e-9))
            per_bin[k] = per_bin.get(k, 0) + e["count"]
        lines = [f"{(k + 0.5) * self.bin_width:.12g} {n / (total * self.bin_width):.12g}"
                 for k, n in sorted(per_bin.items())]
        return "\n".join(lines) + "\n"


def _json_default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.bool_):
        return bool(o)
    raise TypeError(type(o))


def histogram(samples, bin_width: float = DEFAULT_BIN_WIDTH) -> list[dict]:
    """Group (d_eff, kind) samples by bin and kind; each entry reports the smallest
    d_eff in its group, so integral codeword entries keep their exact value."""
    groups: dict[tuple[int, str], list[float]] = {}
    for d, kind in samples:
        k = int(math.floor(d / bin_width + 1e-9))
        groups.setdefault((k, kind), []).append(d)
    entries = [{"d_eff": min(v), "kind": kind, "count": len(v)}
               for (_, kind), v in groups.items()]
    entries.sort(key=lambda e: (e["d_eff"], e["kind"]))
    return entries


def _kind_label(kind: str) -> str:
    return "Fractional" if kind.startswith("Fractional") else "Codeword"


_WORKER_CODE: SearchCode | None = None
_WORKER_DECODER = None


def _init_worker(code):
    global _WORKER_CODE, _WORKER_DECODER
    _WORKER_CODE = SearchCode(code)
    _WORKER_DECODER = None


def _run_restart(args) -> RestartRecord:
    global _WORKER_DECODER
    restart, seed, config, keep_beliefs = args
    code = _WORKER_CODE
    if _WORKER_DECODER is None:
        _WORKER_DECODER = code.decoder(config.tol_int)
    rng = derived_rng(seed, restart)
    try:
        r = search_once(code, rng, config, _WORKER_DECODER)
    except SearchError as exc:
        return RestartRecord(restart, None, None, error=f"{type(exc).__name__}: {exc}")
    return RestartRecord(
        restart=restart,
        d_eff=r.d_eff,
        kind=r.kind.value,
        iterations=r.iterations,
        straddle_inner_zero=r.straddle_inner_zero,
        straddle_outer_nonzero=r.straddle_outer_nonzero,
        balance=r.balance,
        beliefs=r.pseudo_codeword.beliefs.tolist() if keep_beliefs else None,
    )


def default_workers() -> int:
    env = os.environ.get("LPDENDRO_WORKERS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def run_restarts(code, restarts: int, seed: int, config: SearchConfig = SearchConfig(),
                 workers: int | None = None, keep_beliefs: bool = False,
                 progress=None) -> list[RestartRecord]:
    """Independent searches ``0..restarts-1``; restart i draws from ``derived_rng(seed, i)``
    and starts from a fresh zero-codeword basis, so results do not depend on scheduling."""
    if restarts < 1:
        raise ValueError("restarts must be at least 1")
    workers = workers or default_workers()
    jobs = [(i, seed, config, keep_beliefs) for i in range(restarts)]
    if workers == 1:
        _init_worker(code)
        out = []
        for j in jobs:
            out.append(_run_restart(j))
            if progress:
                progress(out[-1])
        return out
    with ProcessPoolExecutor(workers, initializer=_init_worker, initargs=(code,)) as pool:
        out = []
        for rec in pool.map(_run_restart, jobs, chunksize=max(1, restarts // (8 * workers))):
            out.append(rec)
            if progress:
                progress(rec)
    return out


def build_spectrum(code, restarts: int, seed: int, config: SearchConfig = SearchConfig(),
                   bin_width: float = DEFAULT_BIN_WIDTH, workers: int | None = None,
                   code_id: str = "", keep_beliefs: bool = False, progress=None) -> SpectrumRecord:
    samples = run_restarts(code, restarts, seed, config, workers, keep_beliefs, progress)
    ok = [s for s in samples if s.ok]
    entries = histogram([(s.d_eff, _kind_label(s.kind)) for s in ok], bin_width)
    rng_ = (min(s.d_eff for s in ok), max(s.d_eff for s in ok)) if ok else None
    return SpectrumRecord(
        entries=entries,
        bin_width=bin_width,
        range=rng_,
        provenance={"code": code_id, "restarts": restarts, "seed": seed,
                    "config": asdict(config)},
        samples=samples,
        aborted=len(samples) - len(ok),
    )


def spectrum_gap(spec: SpectrumRecord | list[dict], min_count: int,
                 bin_width: float | None = None) -> tuple[float, float] | None:
    """Sparse stretch separating the lowest configurations from the populated continuum.

    A bin is populated when it holds at least ``min_count`` samples. The gap runs
    from the smallest observed d_eff to the start of the first populated bin; it
    is None when the minimum itself sits in a populated bin (the spectrum rises
    immediately) or when no bin is populated at all.
    """
    if isinstance(spec, SpectrumRecord):
        entries, bin_width = spec.entries, bin_width or spec.bin_width
    else:
        entries, bin_width = spec, bin_width or DEFAULT_BIN_WIDTH
    if not entries:
        raise ValueError("empty spectrum")
    bins: dict[int, list] = {}
    for e in entries:
        k = int(math.floor(e["d_eff"] / bin_width + 1e-9))
        n, lo = bins.get(k, (0, math.inf))
        bins[k] = (n + e["count"], min(lo, e["d_eff"]))
    order = sorted(bins)
    populated = [k for k in order if bins[k][0] >= min_count]
    if not populated or populated[0] == order[0]:
        return None
    return bins[order[0]][1], bins[populated[0]][1]
