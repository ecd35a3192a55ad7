"""AWGN channel with the all-zero codeword transmitted.

Channel outputs ``x`` live on the 0/1 scale: a transmitted 0 sits at x = 0
and a 1 at x = 1. At SNR ``s2`` the output density around bit value b is
proportional to exp(-2 s2 (x - b)^2), i.e. Gaussian noise with variance
1 / (4 s2), and the log-likelihood ratio is h = s2 (1 - 2x).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Snr:
    s_squared: float

    def __post_init__(self):
        if not (self.s_squared > 0 and math.isfinite(self.s_squared)):
            raise ValueError(f"s^2 must be positive and finite, got {self.s_squared}")

    @classmethod
    def from_db(cls, db: float) -> Snr:
        return cls(10.0 ** (db / 10.0))

    @property
    def db(self) -> float:
        return 10.0 * math.log10(self.s_squared)

    @property
    def noise_std(self) -> float:
        return 0.5 / math.sqrt(self.s_squared)


def llr_from_output(x, snr: Snr | float, punctured=None) -> np.ndarray:
    s2 = snr.s_squared if isinstance(snr, Snr) else float(snr)
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("channel output must be finite")
    h = s2 * (1.0 - 2.0 * x)
    if punctured is not None:
        h = np.where(punctured, 0.0, h)
    return h


def sample_awgn(snr: Snr | float, n: int, rng: np.random.Generator) -> np.ndarray:
    """Channel output for the zero codeword: n i.i.d. Normal(0, 1/(4 s2)) draws."""
    if n < 1:
        raise ValueError("n must be at least 1")
    s2 = snr.s_squared if isinstance(snr, Snr) else float(snr)
    return rng.normal(0.0, 0.5 / math.sqrt(s2), size=n)


def derived_rng(master_seed: int, index: int) -> np.random.Generator:
    """Independent generator for trial ``index``, a pure function of (seed, index)."""
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(index,)))


def channel_llr(x, snr: Snr | float, punctured=None) -> np.ndarray:
    """Exact log p(x|0)/p(x|1) for output variance 1/(4 s2); equals 2 * llr_from_output.

    Linear decoders (LP, MAP) are blind to this factor; sum-product is not.
    """
    return 2.0 * llr_from_output(x, snr, punctured)
