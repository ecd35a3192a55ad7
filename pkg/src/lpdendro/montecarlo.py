"""Monte Carlo frame-error rates over AWGN with the zero codeword transmitted."""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .bpdecode import BpDecoder
from .channel import Snr, channel_llr, derived_rng, llr_from_output
from .codes import ParityCheckMatrix, is_codeword
from .dendro import DendroCode
from .landscape import default_workers
from .lpdecode import LpDecoder

Z95 = 1.959963984540054


@dataclass(frozen=True)
class FerPoint:
    snr: Snr
    frames: int
    errors: int
    fer: float
    ci_low: float
    ci_high: float
    decoder: str
    seed: int

    def csv_row(self) -> list[str]:
        return [f"{self.snr.db:.12g}", str(self.frames), str(self.errors),
                f"{self.fer:.12g}", f"{self.ci_low:.12g}", f"{self.ci_high:.12g}"]


CSV_HEADER = ["snr_db", "frames", "errors", "fer", "ci_low", "ci_high"]


def wilson_interval(errors: int, frames: int, z: float = Z95) -> tuple[float, float]:
    if frames == 0:
        return 0.0, 1.0
    p = errors / frames
    z2 = z * z
    den = 1.0 + z2 / frames
    center = (p + z2 / (2 * frames)) / den
    half = z * math.sqrt(p * (1 - p) / frames + z2 / (4 * frames * frames)) / den
    return max(0.0, center - half), min(1.0, center + half)


class FrameDecoder:
    """Decides whether one received frame decodes to the transmitted codeword.

    ``codeword`` selects the transmitted word (default all-zero); noise is drawn
    around it on the 0/1 output scale.
    """

    def __init__(self, code, decoder: str = "lp", max_iters: int = 1024, codeword=None):
        if isinstance(code, DendroCode):
            self.matrix, self.punctured = code.matrix, code.punctured
            self.origin_bits = code.origin_bits
            self.original = code.original
        else:
            self.matrix, self.punctured = code, np.zeros(code.num_bits, dtype=bool)
            self.origin_bits = np.arange(code.num_bits)
            self.original = code
        self.n = len(self.origin_bits)
        self.kind = decoder
        if decoder == "lp":
            self._lp = LpDecoder(self.matrix, self.punctured)
        elif decoder == "bp":
            self._bp = BpDecoder(self.matrix, max_iters)
        else:
            raise ValueError(f"unknown decoder {decoder!r}")
        self.codeword = (np.zeros(self.n, dtype=np.uint8) if codeword is None
                         else np.asarray(codeword, dtype=np.uint8))
        if not is_codeword(self.original, self.codeword):
            raise ValueError("transmitted word is not a codeword")

    def frame_fails(self, snr: Snr, rng: np.random.Generator) -> bool:
        x = self.codeword + rng.normal(0.0, snr.noise_std, size=self.n)
        full = np.zeros(self.matrix.num_bits)
        if self.kind == "bp":
            full[self.origin_bits] = channel_llr(x, snr)
            bits = self._bp.decode(full).bits[self.origin_bits]
            return not np.array_equal(bits, self.codeword)
        h = llr_from_output(x, snr)
        hard = (h < 0).astype(np.uint8)
        if is_codeword(self.original, hard):
            # the hard decision minimizes the cost over the whole unit cube, hence
            # over the polytope too: it is the LP optimum without solving
            return not np.array_equal(hard, self.codeword)
        full[self.origin_bits] = h
        self._lp.reset()
        pc = self._lp.decode(full)
        if not pc.is_codeword:
            return True
        return not np.array_equal(np.rint(pc.beliefs[self.origin_bits]).astype(np.uint8),
                                  self.codeword)


_FRAME: FrameDecoder | None = None


def _init_worker(code, decoder, max_iters, codeword):
    global _FRAME
    _FRAME = FrameDecoder(code, decoder, max_iters, codeword)


def _run_batch(args) -> int:
    start, count, seed, s2 = args
    snr = Snr(s2)
    return sum(_FRAME.frame_fails(snr, derived_rng(seed, i)) for i in range(start, start + count))


def estimate_fer(code, decoder: str, snr: Snr, *, target_errors: int = 100,
                 max_frames: int = 10_000_000, seed: int = 0, batch_size: int = 200,
                 workers: int | None = None, max_iters: int = 1024, codeword=None) -> FerPoint:
    """Frames are decided independently (frame i draws from ``derived_rng(seed, i)``);
    the stop rule is checked only between batches of ``batch_size`` frames, in
    batch order, so the result does not depend on the worker count."""
    if target_errors < 1 and max_frames < 1:
        raise ValueError("need target_errors >= 1 or max_frames >= 1")
    workers = workers or default_workers()
    batches = []
    start = 0
    while start < max_frames:
        n = min(batch_size, max_frames - start)
        batches.append((start, n, seed, snr.s_squared))
        start += n
    frames = errors = 0

    def consume(results):
        nonlocal frames, errors
        for (_, n, _, _), e in results:
            frames += n
            errors += e
            if target_errors >= 1 and errors >= target_errors:
                return True
        return False

    if workers == 1:
        _init_worker(code, decoder, max_iters, codeword)
        for b in batches:
            if consume([(b, _run_batch(b))]):
                break
    else:
        with ProcessPoolExecutor(workers, initializer=_init_worker,
                                 initargs=(code, decoder, max_iters, codeword)) as pool:
            for w in range(0, len(batches), workers):
                wave = batches[w:w + workers]
                if consume(zip(wave, pool.map(_run_batch, wave))):
                    break
    lo, hi = wilson_interval(errors, frames)
    return FerPoint(snr, frames, errors, errors / frames if frames else 0.0, lo, hi, decoder, seed)


def fer_sweep(code, decoder: str, snrs, **kw) -> list[FerPoint]:
    return [estimate_fer(code, decoder, s, **kw) for s in snrs]


def fer_csv(points) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for p in points:
        w.writerow(p.csv_row())
    return buf.getvalue()


def asymptote_estimate(d: float, snr: Snr | float) -> float:
    """exp(-d s^2 / 2); the prefactor is not modeled (fit it to an anchor point)."""
    if d < 1:
        raise ValueError("effective distance must be at least 1")
    s2 = snr.s_squared if isinstance(snr, Snr) else float(snr)
    return math.exp(-d * s2 / 2.0)


def fit_prefactor(d: float, anchor: FerPoint) -> float:
    return anchor.fer / asymptote_estimate(d, anchor.snr)
