"""Flooding sum-product decoder in the log-likelihood-ratio domain.

Inputs are exact channel LLRs ``log p(x|0) / p(x|1)`` (see
:func:`lpdendro.channel.channel_llr`); punctured bits take LLR 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .codes import ParityCheckMatrix

CLAMP = 50.0
_TINY = 1e-30


def _phi(x):
    # phi(x) = -log(tanh(x/2)) = log((e^x + 1)/(e^x - 1)); an involution on x > 0
    x = np.clip(x, _TINY, CLAMP)
    return np.log1p(2.0 / np.expm1(x))


def _leave_one_out(block):
    """Row-wise sums excluding each entry, without subtracting (no cancellation)."""
    pre = np.zeros_like(block)
    suf = np.zeros_like(block)
    np.cumsum(block[:, :-1], axis=1, out=pre[:, 1:])
    np.cumsum(block[:, :0:-1], axis=1, out=suf[:, -2::-1])
    return pre + suf


@dataclass
class BpResult:
    bits: np.ndarray
    converged: bool
    iterations: int
    posterior: np.ndarray


class BpDecoder:
    """Sum-product over the Tanner graph of ``H``.

    With ``early_stop`` (the default) decoding ends at the first iteration whose
    hard decision satisfies every check. That codeword need not be the
    maximum-likelihood one; with ``early_stop=False`` all ``max_iters``
    iterations run and the final posterior is used, which on a cycle-free graph
    gives exact bit marginals once ``max_iters`` reaches the graph diameter.
    """

    def __init__(self, H: ParityCheckMatrix, max_iters: int = 1024, early_stop: bool = True):
        if max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        self.H = H
        self.max_iters = max_iters
        self.early_stop = early_stop
        chk = np.repeat(np.arange(H.num_checks), H.row_degrees)
        var = np.fromiter((i for r in H.rows for i in r), dtype=np.int64, count=len(chk))
        self.edge_check = chk
        self.edge_bit = var
        self.row_start = np.concatenate([[0], np.cumsum(H.row_degrees)[:-1]])
        # edges of equal-degree checks gathered into (checks, degree) blocks
        self.groups = []
        degs = np.asarray(H.row_degrees)
        for q in np.unique(degs):
            checks = np.flatnonzero(degs == q)
            self.groups.append(self.row_start[checks][:, None] + np.arange(q))

    def _syndrome_ok(self, bits) -> bool:
        par = np.add.reduceat(bits[self.edge_bit], self.row_start) & 1
        return not par.any()

    def decode(self, llr) -> BpResult:
        llr = np.asarray(llr, dtype=float)
        N = self.H.num_bits
        if llr.shape != (N,):
            raise ValueError(f"expected {N} LLRs, got shape {llr.shape}")
        bits = (llr < 0).astype(np.int64)
        if self.early_stop and self._syndrome_ok(bits):
            return BpResult(bits.astype(np.uint8), True, 0, llr.copy())
        eb, ec, starts = self.edge_bit, self.edge_check, self.row_start
        q = np.clip(llr[eb], -CLAMP, CLAMP)
        post = llr
        for it in range(1, self.max_iters + 1):
            # check update: sign product and phi-sum, each excluding the target edge
            mag = _phi(np.abs(q))
            neg = (q < 0).astype(np.int64)
            par = np.add.reduceat(neg, starts)[ec]
            sign = 1.0 - 2.0 * ((par - neg) & 1)
            others = np.empty_like(mag)
            for idx in self.groups:
                others[idx] = _leave_one_out(mag[idx])
            r = np.clip(sign * _phi(others), -CLAMP, CLAMP)
            # bit update
            post = llr + np.bincount(eb, weights=r, minlength=N)
            q = np.clip(post[eb] - r, -CLAMP, CLAMP)
            bits = (post < 0).astype(np.int64)
            if self.early_stop and self._syndrome_ok(bits):
                return BpResult(bits.astype(np.uint8), True, it, post)
        return BpResult(bits.astype(np.uint8), self._syndrome_ok(bits) and not self.early_stop,
                        self.max_iters, post)


def bp_decode(H: ParityCheckMatrix, llr, max_iters: int = 1024, early_stop: bool = True):
    """Hard decision, convergence flag and iterations used."""
    res = BpDecoder(H, max_iters, early_stop).decode(llr)
    return res.bits, res.converged, res.iterations
