"""Check-degree reduction: rewrite every check of degree q > 3 as a chain of
q - 2 degree-3 checks joined by q - 3 punctured degree-2 bits.

A check over (s1, ..., sq) becomes

    (s1, s2, t1), (t1, s3, t2), ..., (t_{q-3}, s_{q-1}, sq)

so that t_k carries the running parity s1 ^ ... ^ s_{k+1}. Original bits keep
their indices; auxiliary bits are appended in check order. A chain of
checks is one particular tree; any tree gives the same codeword set.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .codes import ParityCheckMatrix, syndrome


@dataclass(frozen=True, eq=False)
class DendroCode:
    matrix: ParityCheckMatrix
    punctured: np.ndarray          # bool, length N'
    origin_bits: np.ndarray        # original bit i -> transformed index
    check_provenance: np.ndarray   # transformed check -> original check
    original: ParityCheckMatrix

    @property
    def num_original_bits(self) -> int:
        return self.original.num_bits

    @property
    def num_punctured(self) -> int:
        return int(self.punctured.sum())

    def sidecar(self) -> dict:
        return {
            "punctured": np.flatnonzero(self.punctured).tolist(),
            "origin_bits": self.origin_bits.tolist(),
            "check_provenance": self.check_provenance.tolist(),
        }

    def sidecar_json(self) -> str:
        return json.dumps(self.sidecar())


def dendro_transform(H: ParityCheckMatrix) -> DendroCode:
    if any(len(r) == 0 for r in H.rows):
        raise ValueError("every check must have at least one bit")
    rows: list[list[int]] = []
    provenance: list[int] = []
    next_aux = H.num_bits
    for a, row in enumerate(H.rows):
        q = len(row)
        if q <= 3:
            rows.append(list(row))
            provenance.append(a)
            continue
        aux = list(range(next_aux, next_aux + q - 3))
        next_aux += q - 3
        rows.append([row[0], row[1], aux[0]])
        for k in range(1, q - 3):
            rows.append([aux[k - 1], row[k + 1], aux[k]])
        rows.append([aux[-1], row[q - 2], row[q - 1]])
        provenance.extend([a] * (q - 2))
    punctured = np.zeros(next_aux, dtype=bool)
    punctured[H.num_bits:] = True
    return DendroCode(
        matrix=ParityCheckMatrix.from_rows(rows, next_aux),
        punctured=punctured,
        origin_bits=np.arange(H.num_bits),
        check_provenance=np.array(provenance, dtype=np.int64),
        original=H,
    )


def chain_aux_bits(D: DendroCode, check: int) -> list[int]:
    """Auxiliary bits t1, t2, ... of the chain replacing original ``check``."""
    checks = np.flatnonzero(D.check_provenance == check)
    return sorted({j for c in checks for j in D.matrix.rows[c] if D.punctured[j]})


def lift_codeword(D: DendroCode, v) -> np.ndarray:
    """Extend an original codeword with the unique consistent auxiliary bits."""
    v = np.asarray(v).astype(np.uint8)
    H = D.original
    if syndrome(H, v).any():
        raise ValueError("not a codeword of the original code")
    w = np.zeros(D.matrix.num_bits, dtype=np.uint8)
    w[D.origin_bits] = v
    for a, row in enumerate(H.rows):
        if len(row) <= 3:
            continue
        # t_k is the parity of the first k + 1 chain bits
        prefix = np.bitwise_xor.accumulate(v[list(row)])
        w[chain_aux_bits(D, a)] = prefix[1:len(row) - 2]
    return w


def project(D: DendroCode, w) -> np.ndarray:
    w = np.asarray(w)
    if w.shape[0] != D.matrix.num_bits:
        raise ValueError(f"expected length {D.matrix.num_bits}, got {w.shape[0]}")
    return w[D.origin_bits]


def extend_llr(D: DendroCode, h) -> np.ndarray:
    """Original-bit log-likelihoods padded with zeros at the punctured bits."""
    h = np.asarray(h, dtype=float)
    if h.shape != (D.original.num_bits,):
        raise ValueError(f"expected {D.original.num_bits} log-likelihoods, got shape {h.shape}")
    out = np.zeros(D.matrix.num_bits)
    out[D.origin_bits] = h
    return out
