"""LP decoding over bit beliefs and check local-codeword beliefs.

Variables are ordered bits first (``b_i(1)`` for every bit i), then, check
by check, one belief per even-weight local pattern. Rows come in check order:
the normalization row of a check followed by one compatibility row per
incident bit,

    sum_p b_a(p) = 1,        b_i(1) - sum_{p : p_i = 1} b_a(p) = 0.

Upper bounds of one are implied by normalization and nonnegativity, so the
solver works on the nonnegative standard form. The objective is
``sum_i h_i b_i(1)``.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass
from itertools import product

import numpy as np
import scipy.sparse as sp

from .codes import ParityCheckMatrix
from .simplex import RevisedSimplex, SimplexError, SimplexOptions, SimplexResult

log = logging.getLogger(__name__)

#: largest check degree whose local-codeword table is built
MAX_CHECK_DEGREE = 12
TOL_INT = 1e-6


class CheckDegreeError(ValueError):
    pass


def local_codewords(q: int) -> np.ndarray:
    """Even-weight patterns of length q in lexicographic order, shape (2^(q-1), q)."""
    pats = np.array(list(product((0, 1), repeat=q)), dtype=np.uint8).reshape(-1, q)
    return pats[pats.sum(axis=1) % 2 == 0]


@dataclass(frozen=True, eq=False)
class LpProblem:
    A: sp.csc_matrix
    b: np.ndarray
    c: np.ndarray
    num_bits: int
    check_offsets: np.ndarray    # first variable index of each check's patterns
    patterns: tuple[np.ndarray, ...]

    @property
    def num_variables(self) -> int:
        return self.A.shape[1]

    @property
    def num_constraints(self) -> int:
        return self.A.shape[0]

    @property
    def num_check_variables(self) -> int:
        return self.num_variables - self.num_bits

    def with_objective(self, h) -> LpProblem:
        c = np.zeros(self.num_variables)
        c[:self.num_bits] = np.asarray(h, dtype=float)
        return LpProblem(self.A, self.b, c, self.num_bits, self.check_offsets, self.patterns)


def build_lp(H: ParityCheckMatrix, h=None) -> LpProblem:
    degs = H.row_degrees
    worst = max(degs)
    if worst > MAX_CHECK_DEGREE:
        raise CheckDegreeError(
            f"check degree {worst} exceeds {MAX_CHECK_DEGREE}; apply dendro_transform "
            "to reduce every check to degree 3 first")
    N = H.num_bits
    tables = {q: local_codewords(q) for q in set(degs)}
    rows_i: list[int] = []
    cols_i: list[int] = []
    vals: list[float] = []
    b: list[float] = []
    offsets = np.zeros(H.num_checks, dtype=np.int64)
    patterns = []
    var = N
    row = 0
    for a, bits in enumerate(H.rows):
        pats = tables[len(bits)]
        patterns.append(pats)
        offsets[a] = var
        npat = len(pats)
        # normalization
        rows_i.extend([row] * npat)
        cols_i.extend(range(var, var + npat))
        vals.extend([1.0] * npat)
        b.append(1.0)
        row += 1
        for k, i in enumerate(bits):
            rows_i.append(row)
            cols_i.append(i)
            vals.append(1.0)
            on = np.flatnonzero(pats[:, k]) + var
            rows_i.extend([row] * len(on))
            cols_i.extend(on.tolist())
            vals.extend([-1.0] * len(on))
            b.append(0.0)
            row += 1
        var += npat
    A = sp.csc_matrix((vals, (rows_i, cols_i)), shape=(row, var))
    c = np.zeros(var)
    if h is not None:
        h = np.asarray(h, dtype=float)
        if h.shape != (N,):
            raise ValueError(f"expected {N} log-likelihoods, got shape {h.shape}")
        c[:N] = h
    return LpProblem(A, np.array(b), c, N, offsets, tuple(patterns))


def zero_codeword_basis(p: LpProblem) -> np.ndarray:
    """Nonsingular basis at the all-zero vertex.

    Each check contributes a maximal independent set of its own pattern
    columns, always including the zero pattern; rows left uncovered (checks
    of degree one or two) get zero-fixed artificials.
    """
    n = p.num_variables
    basis = []
    row = 0
    for a, pats in enumerate(p.patterns):
        q = pats.shape[1]
        block = np.hstack([np.ones((len(pats), 1)), -pats.astype(float)])  # one row per pattern
        chosen: list[int] = []
        span = np.zeros((0, q + 1))
        for k, vec in enumerate(block):
            trial = np.vstack([span, vec])
            if np.linalg.matrix_rank(trial) > len(chosen):
                chosen.append(k)
                span = trial
            if len(chosen) == q + 1:
                break
        basis.extend(int(p.check_offsets[a]) + k for k in chosen)
        if len(chosen) < q + 1:
            # complete with artificials on rows outside the span
            for r in range(q + 1):
                e = np.zeros(q + 1)
                e[r] = 1.0
                trial = np.vstack([span, e])
                if np.linalg.matrix_rank(trial) > span.shape[0]:
                    span = trial
                    basis.append(n + row + r)
                if span.shape[0] == q + 1:
                    break
        row += q + 1
    return np.array(basis, dtype=np.int64)


def solve_lp(p: LpProblem, basis=None, options: SimplexOptions | None = None) -> SimplexResult:
    """Optimal vertex of ``p``; ``basis`` optionally warm-starts from a feasible basis."""
    solver = RevisedSimplex(p.A, p.b, options)
    return solver.solve(p.c, zero_codeword_basis(p) if basis is None else basis)


class Kind(str, enum.Enum):
    ZERO = "ZeroCodeword"
    CODEWORD = "NonzeroCodeword"
    FRACTIONAL = "FractionalPseudoCodeword"


@dataclass(frozen=True, eq=False)
class PseudoCodeword:
    beliefs: np.ndarray
    kind: Kind
    objective: float
    iterations: int = 0

    @property
    def is_codeword(self) -> bool:
        return self.kind is not Kind.FRACTIONAL

    @property
    def is_zero(self) -> bool:
        return self.kind is Kind.ZERO


def classify(H: ParityCheckMatrix, beliefs, punctured=None, tol_int: float = TOL_INT) -> Kind:
    beliefs = np.asarray(beliefs)
    rounded = np.rint(beliefs)
    if np.abs(beliefs - rounded).max(initial=0.0) > tol_int:
        return Kind.FRACTIONAL
    bits = rounded.astype(np.int64)
    for row in H.rows:
        if bits[list(row)].sum() % 2:
            return Kind.FRACTIONAL
    shown = bits if punctured is None else bits[~np.asarray(punctured, dtype=bool)]
    return Kind.CODEWORD if shown.any() else Kind.ZERO


class LpDecoder:
    """LP decoder bound to one code; keeps its last optimal basis for warm starts.

    Only the objective changes between decodes, so the previous optimal basis
    is always primal feasible for the next problem.
    """

    def __init__(self, H: ParityCheckMatrix, punctured=None, *, tol_int: float = TOL_INT,
                 options: SimplexOptions | None = None, warm_start: bool = True):
        self.H = H
        self.punctured = (np.zeros(H.num_bits, dtype=bool) if punctured is None
                          else np.asarray(punctured, dtype=bool))
        self.tol_int = tol_int
        self.problem = build_lp(H)
        self.solver = RevisedSimplex(self.problem.A, self.problem.b, options)
        self.cold_basis = zero_codeword_basis(self.problem)
        self.warm_start = warm_start
        self.basis = None
        self.total_pivots = 0

    def reset(self) -> None:
        self.basis = None

    def solve(self, h) -> SimplexResult:
        h = np.asarray(h, dtype=float)
        if h.shape != (self.H.num_bits,):
            raise ValueError(f"expected {self.H.num_bits} log-likelihoods, got shape {h.shape}")
        c = np.zeros(self.problem.num_variables)
        c[:self.H.num_bits] = np.where(self.punctured, 0.0, h)
        if self.warm_start and self.basis is not None:
            try:
                res = self.solver.solve(c, self.basis)
            except SimplexError as exc:
                log.debug("warm start failed (%s); retrying from the cold basis", exc)
                res = self.solver.solve(c, self.cold_basis)
        else:
            res = self.solver.solve(c, self.cold_basis)
        self.basis = res.basis
        self.total_pivots += res.iterations
        return res

    def decode(self, h) -> PseudoCodeword:
        res = self.solve(h)
        beliefs = np.clip(res.x[:self.H.num_bits], 0.0, 1.0)
        kind = classify(self.H, beliefs, self.punctured, self.tol_int)
        return PseudoCodeword(beliefs, kind, res.objective, res.iterations)


def lp_decode(H: ParityCheckMatrix, h, punctured=None, tol_int: float = TOL_INT) -> PseudoCodeword:
    return LpDecoder(H, punctured, tol_int=tol_int).decode(h)
