"""Pseudo-codeword search: walk LP decoding outputs toward the error surface.

Noise vectors here are channel outputs on the transmitted bits, measured
from the zero codeword. For a pseudo-codeword ``s`` (bit beliefs) the point of
the segment from zero toward ``s`` whose LP cost ties with the zero codeword is

    y = s * sum(s) / (2 * sum(s**2)),

and its squared distance from the origin is d_eff / 4 with

    d_eff = sum(s)**2 / sum(s**2).

Punctured (auxiliary) bits carry no noise and are left out of both sums.
Everything is scale-free in the SNR, so decodes use s^2 = 1.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .channel import llr_from_output
from .codes import ParityCheckMatrix
from .dendro import DendroCode
from .lpdecode import TOL_INT, Kind, LpDecoder, PseudoCodeword

log = logging.getLogger(__name__)


class SearchError(RuntimeError):
    pass


class SearchCollapsed(SearchError):
    """LP decoding fell back to the zero codeword; the search must restart."""


class SearchIterationCap(SearchError):
    def __init__(self, message: str, trajectory):
        super().__init__(message)
        self.trajectory = trajectory


class InitialNoiseError(SearchError):
    pass


@dataclass(frozen=True)
class SearchConfig:
    delta: float = 1e-3
    tol_y: float = 1e-8
    max_iterations: int = 200
    init_scale: float = 0.05
    max_doublings: int = 20
    tol_int: float = TOL_INT
    check_straddle: bool = True


@dataclass
class InstantonResult:
    pseudo_codeword: PseudoCodeword   # beliefs on original bits
    instanton: np.ndarray
    d_eff: float
    iterations: int
    trajectory: list = field(default_factory=list)
    straddle_inner_zero: bool | None = None
    straddle_outer_nonzero: bool | None = None
    balance: float = 0.0
    pivots: int = 0

    @property
    def kind(self) -> Kind:
        return self.pseudo_codeword.kind

    @property
    def straddles(self) -> bool:
        return bool(self.straddle_inner_zero and self.straddle_outer_nonzero)


def _transmitted(sigma, punctured):
    sigma = np.asarray(sigma, dtype=float)
    if punctured is None:
        return sigma, np.ones(sigma.shape, dtype=bool)
    keep = ~np.asarray(punctured, dtype=bool)
    return sigma[keep], keep


def effective_distance(sigma, punctured=None) -> float:
    s, _ = _transmitted(sigma, punctured)
    sq = float(np.dot(s, s))
    if sq == 0.0:
        raise ValueError("effective distance of the zero vector is undefined")
    return float(s.sum()) ** 2 / sq


def median_noise(sigma, punctured=None) -> np.ndarray:
    """Equal-cost point between the zero codeword and ``sigma``; zero at punctured bits."""
    s, keep = _transmitted(sigma, punctured)
    sq = float(np.dot(s, s))
    if sq == 0.0:
        raise ValueError("median of the zero vector is undefined")
    y = np.zeros(np.shape(sigma))
    y[keep] = s * (s.sum() / (2.0 * sq))
    return y


def instanton(sigma, punctured=None) -> np.ndarray:
    """Most probable noise decoding to ``sigma``; coincides with :func:`median_noise`."""
    s, keep = _transmitted(sigma, punctured)
    total = s.sum()
    y = np.zeros(np.shape(sigma))
    y[keep] = (s * total) / (2.0 * np.sum(s ** 2))
    return y


class SearchCode:
    """A code prepared for searching: the LP runs on ``matrix``; results are
    reported on the ``num_bits`` transmitted bits."""

    def __init__(self, code: ParityCheckMatrix | DendroCode):
        if isinstance(code, DendroCode):
            self.matrix = code.matrix
            self.punctured = code.punctured
            self.origin_bits = code.origin_bits
            self.original = code.original
        else:
            self.matrix = code
            self.punctured = np.zeros(code.num_bits, dtype=bool)
            self.origin_bits = np.arange(code.num_bits)
            self.original = code
        self.num_bits = len(self.origin_bits)

    def llr(self, x) -> np.ndarray:
        """Log-likelihoods on the LP code for transmitted-bit output ``x`` at s^2 = 1."""
        h = np.zeros(self.matrix.num_bits)
        h[self.origin_bits] = llr_from_output(x, 1.0)
        return h

    def decoder(self, tol_int: float = TOL_INT) -> LpDecoder:
        return LpDecoder(self.matrix, self.punctured, tol_int=tol_int)


def _as_search_code(code) -> SearchCode:
    return code if isinstance(code, SearchCode) else SearchCode(code)


def _decode(code: SearchCode, decoder: LpDecoder, x) -> PseudoCodeword:
    pc = decoder.decode(code.llr(x))
    beliefs = pc.beliefs[code.origin_bits]
    return PseudoCodeword(beliefs, pc.kind, pc.objective, pc.iterations)


def random_initial_noise(code, rng: np.random.Generator, config: SearchConfig = SearchConfig(),
                         decoder: LpDecoder | None = None) -> np.ndarray:
    """Half-normal noise, doubled in scale until LP decoding leaves the zero codeword."""
    code = _as_search_code(code)
    decoder = decoder or code.decoder(config.tol_int)
    shape = np.abs(rng.standard_normal(code.num_bits))
    scale = config.init_scale
    # small noise decodes near the zero vertex; start there rather than at a stale vertex
    decoder.reset()
    for _ in range(config.max_doublings + 1):
        x = scale * shape
        if not _decode(code, decoder, x).is_zero:
            return x
        scale *= 2.0
    raise InitialNoiseError(f"decoding stayed at zero after {config.max_doublings} doublings")


def pseudo_codeword_search(code, x0, config: SearchConfig = SearchConfig(),
                           decoder: LpDecoder | None = None) -> InstantonResult:
    code = _as_search_code(code)
    decoder = decoder or code.decoder(config.tol_int)
    pivots0 = decoder.total_pivots
    x = np.asarray(x0, dtype=float)
    if x.shape != (code.num_bits,):
        raise ValueError(f"initial noise must have length {code.num_bits}")
    trajectory: list[tuple[float, str]] = []
    y_prev = None
    for k in range(1, config.max_iterations + 1):
        pc = _decode(code, decoder, x)
        if pc.is_zero:
            raise SearchCollapsed(f"decoded to the zero codeword at step {k}")
        d = effective_distance(pc.beliefs)
        if trajectory and d > trajectory[-1][0] + 1e-9:
            log.debug("effective distance rose from %.6f to %.6f at step %d", trajectory[-1][0], d, k)
        trajectory.append((d, pc.kind.value))
        y = median_noise(pc.beliefs)
        if y_prev is not None and np.abs(y - y_prev).max() < config.tol_y:
            break
        y_prev = y
        x = (1.0 + config.delta) * y
    else:
        raise SearchIterationCap(f"no fixed point within {config.max_iterations} steps", trajectory)

    h = llr_from_output(y, 1.0)
    result = InstantonResult(
        pseudo_codeword=pc,
        instanton=y,
        d_eff=d,
        iterations=k,
        trajectory=trajectory,
        balance=float(np.dot(h, pc.beliefs)),
    )
    if config.check_straddle:
        result.straddle_inner_zero = _decode(code, decoder, (1.0 - config.delta) * y).is_zero
        result.straddle_outer_nonzero = not _decode(code, decoder, (1.0 + config.delta) * y).is_zero
    result.pivots = decoder.total_pivots - pivots0
    return result


def search_once(code, rng: np.random.Generator, config: SearchConfig = SearchConfig(),
                decoder: LpDecoder | None = None) -> InstantonResult:
    """Random start followed by a full search, sharing one decoder."""
    code = _as_search_code(code)
    decoder = decoder or code.decoder(config.tol_int)
    x0 = random_initial_noise(code, rng, config, decoder)
    return pseudo_codeword_search(code, x0, config, decoder)
