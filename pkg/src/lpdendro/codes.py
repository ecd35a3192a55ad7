"""Sparse binary parity-check matrices, the alist format and brute-force oracles.

Matrices are stored checks-by-bits (M x N): ``rows[a]`` lists the bits of
check ``a`` and ``cols[i]`` lists the checks touching bit ``i``. All indices
are 0-based in memory and 1-based in alist files.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

#: largest block length accepted by the exhaustive oracles
BRUTE_FORCE_MAX_BITS = 24


class AlistError(ValueError):
    """Malformed alist input; ``lineno`` is 1-based."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


@dataclass(frozen=True, eq=False)
class ParityCheckMatrix:
    num_bits: int
    num_checks: int
    rows: tuple[tuple[int, ...], ...]
    cols: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.num_bits < 1 or self.num_checks < 1:
            raise ValueError("a code needs at least one bit and one check")
        if len(self.rows) != self.num_checks or len(self.cols) != self.num_bits:
            raise ValueError("adjacency length does not match dimensions")
        seen = set()
        for a, row in enumerate(self.rows):
            if len(set(row)) != len(row):
                raise ValueError(f"repeated bit index in check {a}")
            for i in row:
                if not 0 <= i < self.num_bits:
                    raise ValueError(f"bit index {i} out of range in check {a}")
                seen.add((a, i))
        count = 0
        for i, col in enumerate(self.cols):
            if len(set(col)) != len(col):
                raise ValueError(f"repeated check index at bit {i}")
            for a in col:
                if (a, i) not in seen:
                    raise ValueError(f"rows and cols disagree at check {a}, bit {i}")
                count += 1
        if count != len(seen):
            raise ValueError("rows and cols describe different incidences")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], num_bits: int) -> ParityCheckMatrix:
        rows = [tuple(sorted(int(i) for i in r)) for r in rows]
        cols: list[list[int]] = [[] for _ in range(num_bits)]
        for a, row in enumerate(rows):
            for i in row:
                if not 0 <= i < num_bits:
                    raise ValueError(f"bit index {i} out of range in check {a}")
                cols[i].append(a)
        return cls(num_bits, len(rows), tuple(rows), tuple(tuple(c) for c in cols))

    @classmethod
    def from_dense(cls, H) -> ParityCheckMatrix:
        H = np.asarray(H) % 2
        return cls.from_rows([np.flatnonzero(r) for r in H], H.shape[1])

    def to_dense(self) -> np.ndarray:
        H = np.zeros((self.num_checks, self.num_bits), dtype=np.uint8)
        for a, row in enumerate(self.rows):
            H[a, list(row)] = 1
        return H

    @property
    def num_edges(self) -> int:
        return sum(len(r) for r in self.rows)

    @property
    def row_degrees(self) -> list[int]:
        return [len(r) for r in self.rows]

    @property
    def col_degrees(self) -> list[int]:
        return [len(c) for c in self.cols]

    def __eq__(self, other):
        if not isinstance(other, ParityCheckMatrix):
            return NotImplemented
        return (self.num_bits, self.num_checks, self.rows) == (
            other.num_bits, other.num_checks, other.rows)

    def __hash__(self):
        return hash((self.num_bits, self.num_checks, self.rows))

    def __repr__(self):
        return f"ParityCheckMatrix(N={self.num_bits}, M={self.num_checks}, edges={self.num_edges})"


def _ints(line: str, lineno: int) -> list[int]:
    try:
        return [int(t) for t in line.split()]
    except ValueError:
        raise AlistError(f"non-integer token in {line.strip()!r}", lineno) from None


def parse_alist(text: str | bytes) -> ParityCheckMatrix:
    if isinstance(text, bytes):
        text = text.decode("ascii")
    lines = [(n, ln) for n, ln in enumerate(text.splitlines(), 1) if ln.strip()]
    it = iter(lines)

    def take(what: str) -> tuple[int, list[int]]:
        try:
            n, ln = next(it)
        except StopIteration:
            raise AlistError(f"unexpected end of input while reading {what}") from None
        return n, _ints(ln, n)

    n, head = take("header")
    if len(head) != 2 or min(head) < 1:
        raise AlistError("header must be 'N M' with positive integers", n)
    N, M = head
    n, maxdeg = take("maximum degrees")
    if len(maxdeg) != 2 or min(maxdeg) < 1:
        raise AlistError("second line must be 'max_col_degree max_row_degree'", n)
    max_col, max_row = maxdeg
    n, col_deg = take("column degrees")
    if len(col_deg) != N:
        raise AlistError(f"expected {N} column degrees, got {len(col_deg)}", n)
    n_rd, row_deg = take("row degrees")
    if len(row_deg) != M:
        raise AlistError(f"expected {M} row degrees, got {len(row_deg)}", n_rd)
    for deg, top, what in ((col_deg, max_col, "column"), (row_deg, max_row, "row")):
        if any(d < 0 or d > top for d in deg):
            raise AlistError(f"{what} degree exceeds declared maximum {top}", n if what == "column" else n_rd)

    def neighbor_list(k: int, deg: int, top: int, bound: int, what: str) -> list[int]:
        n, vals = take(f"{what} {k + 1} neighbors")
        if len(vals) > top:
            raise AlistError(f"{what} {k + 1} lists {len(vals)} neighbors, more than the "
                             f"declared maximum degree {top}", n)
        nz = [v for v in vals if v != 0]
        if len(nz) != deg:
            raise AlistError(f"{what} {k + 1} declares degree {deg} but lists {len(nz)} neighbors", n)
        for v in nz:
            if not 1 <= v <= bound:
                raise AlistError(f"index {v} out of range 1..{bound}", n)
        if len(set(nz)) != len(nz):
            raise AlistError(f"repeated index in {what} {k + 1}", n)
        return [v - 1 for v in nz]

    cols = [neighbor_list(i, col_deg[i], max_col, M, "column") for i in range(N)]
    rows = [neighbor_list(a, row_deg[a], max_row, N, "row") for a in range(M)]
    for i, col in enumerate(cols):
        for a in col:
            if i not in rows[a]:
                raise AlistError(f"column list of bit {i + 1} names check {a + 1}, "
                                 "which does not list it back")
    H = ParityCheckMatrix.from_rows(rows, N)
    if sum(col_deg) != H.num_edges:
        raise AlistError("column and row lists describe different incidences")
    return H


def write_alist(H: ParityCheckMatrix) -> bytes:
    if any(len(r) == 0 for r in H.rows):
        raise ValueError("cannot write a code with an empty check")
    if any(len(c) == 0 for c in H.cols):
        raise ValueError("cannot write a code with an unchecked bit")
    lines = [
        f"{H.num_bits} {H.num_checks}",
        f"{max(H.col_degrees)} {max(H.row_degrees)}",
        " ".join(map(str, H.col_degrees)),
        " ".join(map(str, H.row_degrees)),
    ]
    lines += [" ".join(str(a + 1) for a in c) for c in H.cols]
    lines += [" ".join(str(i + 1) for i in r) for r in H.rows]
    return ("\n".join(lines) + "\n").encode("ascii")


def load_alist(path: str | Path) -> ParityCheckMatrix:
    return parse_alist(Path(path).read_bytes())


def save_alist(H: ParityCheckMatrix, path: str | Path) -> None:
    Path(path).write_bytes(write_alist(H))


def syndrome(H: ParityCheckMatrix, v: Sequence[int]) -> np.ndarray:
    v = np.asarray(v)
    if v.shape != (H.num_bits,):
        raise ValueError(f"expected a length-{H.num_bits} vector, got shape {v.shape}")
    v = v.astype(np.int64) & 1
    return np.array([int(v[list(r)].sum()) & 1 for r in H.rows], dtype=np.uint8)


def is_codeword(H: ParityCheckMatrix, v: Sequence[int]) -> bool:
    return not syndrome(H, v).any()


def _guard(H: ParityCheckMatrix) -> None:
    if H.num_bits > BRUTE_FORCE_MAX_BITS:
        raise ValueError(f"brute force limited to N <= {BRUTE_FORCE_MAX_BITS}, got N={H.num_bits}")


def _codeword_array(H: ParityCheckMatrix) -> np.ndarray:
    """All codewords as rows of a uint8 array, in lexicographic order."""
    _guard(H)
    N = H.num_bits
    # bit 0 is the most significant position so integer order is lexicographic
    masks = np.zeros(H.num_checks, dtype=np.int64)
    for a, row in enumerate(H.rows):
        for i in row:
            masks[a] |= 1 << (N - 1 - i)
    words = np.arange(1 << N, dtype=np.int64)
    ok = np.ones(words.shape, dtype=bool)
    for m in masks:
        par = words & m
        # fold parity down to the low bit
        for s in (32, 16, 8, 4, 2, 1):
            par ^= par >> s
        ok &= (par & 1) == 0
    good = words[ok]
    shifts = np.arange(N - 1, -1, -1, dtype=np.int64)
    return ((good[:, None] >> shifts) & 1).astype(np.uint8)


def enumerate_codewords(H: ParityCheckMatrix) -> set[tuple[int, ...]]:
    return {tuple(int(b) for b in w) for w in _codeword_array(H)}


def map_decode_bruteforce(H: ParityCheckMatrix, h: Sequence[float]) -> np.ndarray:
    """Block-MAP codeword minimizing ``sum(h * sigma)``; lexicographically first on ties."""
    h = np.asarray(h, dtype=float)
    if h.shape != (H.num_bits,):
        raise ValueError(f"expected {H.num_bits} log-likelihoods, got shape {h.shape}")
    words = _codeword_array(H)
    cost = words @ h
    # exact ties only; costs of distinct codewords sharing a float value count as ties
    return words[int(np.argmin(cost))].copy()


class BruteForceMap:
    """Cached codeword list for repeated MAP decoding of one small code."""

    def __init__(self, H: ParityCheckMatrix):
        self.H = H
        self.words = _codeword_array(H)
        self._wf = self.words.astype(float)

    def __call__(self, h) -> np.ndarray:
        return self.words[int(np.argmin(self._wf @ np.asarray(h, dtype=float)))].copy()


def gf2_rank(H: ParityCheckMatrix) -> int:
    M = H.to_dense().copy()
    r = 0
    for c in range(M.shape[1]):
        piv = np.flatnonzero(M[r:, c])
        if len(piv) == 0:
            continue
        p = r + piv[0]
        M[[r, p]] = M[[p, r]]
        for j in np.flatnonzero(M[:, c]):
            if j != r:
                M[j] ^= M[r]
        r += 1
        if r == M.shape[0]:
            break
    return r


def hamming_7_4() -> ParityCheckMatrix:
    return ParityCheckMatrix.from_dense([
        [1, 0, 1, 0, 1, 0, 1],
        [0, 1, 1, 0, 0, 1, 1],
        [0, 0, 0, 1, 1, 1, 1],
    ])


def single_check(n: int) -> ParityCheckMatrix:
    return ParityCheckMatrix.from_rows([range(n)], n)


def circulant_array(exponents: Sequence[Sequence[int]], p: int) -> ParityCheckMatrix:
    """Array of p x p circulant permutation blocks; block (a, b) shifts by exponents[a][b]."""
    rows = []
    for a, exps in enumerate(exponents):
        for r in range(p):
            rows.append([b * p + (r + e) % p for b, e in enumerate(exps)])
    return ParityCheckMatrix.from_rows(rows, p * len(exponents[0]))


#: block exponents of the [155,64,20] quasi-cyclic code over Z_31
TANNER_155_EXPONENTS = (
    (1, 2, 4, 8, 16),
    (5, 10, 20, 9, 18),
    (25, 19, 7, 14, 28),
)


def tanner_155() -> ParityCheckMatrix:
    return circulant_array(TANNER_155_EXPONENTS, 31)


def random_code(num_bits: int, num_checks: int, rng: np.random.Generator,
                min_degree: int = 2, max_degree: int | None = None) -> ParityCheckMatrix:
    """Random small code with every bit checked and check degrees in range."""
    max_degree = max_degree or num_bits
    while True:
        rows = []
        for _ in range(num_checks):
            q = int(rng.integers(min_degree, max_degree + 1))
            rows.append(sorted(rng.choice(num_bits, size=q, replace=False).tolist()))
        covered = set(itertools.chain.from_iterable(rows))
        if len(covered) == num_bits:
            return ParityCheckMatrix.from_rows(rows, num_bits)


_DATA = Path(__file__).parent / "data"


def fixture_path(name: str) -> Path:
    """Path of a bundled alist fixture, e.g. ``fixture_path('tanner155')``."""
    p = _DATA / f"{name}.alist"
    if not p.exists():
        known = sorted(q.stem for q in _DATA.glob("*.alist"))
        raise FileNotFoundError(f"no fixture {name!r}; available: {', '.join(known)}")
    return p


def load_fixture(name: str) -> ParityCheckMatrix:
    return load_alist(fixture_path(name))
