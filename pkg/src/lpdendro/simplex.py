"""Revised primal simplex for ``min c.x  s.t.  A x = b, x >= 0``.

The solver starts from a caller-supplied primal-feasible basis and always
returns a basic (vertex) solution. The basis inverse is kept as a sparse LU
factorization plus a product-form eta file, refactorized periodically.

Basis entries ``>= n`` denote artificial unit columns ``e_r`` (r = entry - n)
that are fixed at zero: they may sit in the basis at level zero and leave it,
but never enter. This lets a degenerate starting vertex be completed to a
nonsingular basis without a phase-one problem.

Entering variables are picked by the most negative reduced cost. Bases seen
during a run of degenerate pivots are hashed; if one repeats, the solver has
cycled and switches to Bland's smallest-index rule for both entering and
leaving choices until the next nondegenerate pivot (after which the objective
has strictly dropped, so no basis can recur).

Degenerate vertices can still stall the solver for a very long time. ``solve``
therefore first works on a slightly perturbed right-hand side and then checks
the final basis against the true ``b``. If that basis is infeasible, it
retries with a smaller perturbation and finally with none.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from ._jit import njit


class SimplexError(RuntimeError):
    pass


class IterationLimitError(SimplexError):
    def __init__(self, iterations: int):
        super().__init__(f"simplex did not finish within {iterations} pivots")
        self.iterations = iterations


class NumericalInstabilityError(SimplexError):
    def __init__(self, residual: float, tol: float):
        super().__init__(f"constraint residual {residual:.3e} exceeds {tol:.1e}")
        self.residual = residual


class SingularBasisError(SimplexError):
    pass


@dataclass(frozen=True)
class SimplexOptions:
    tol_opt: float = 1e-9        # reduced cost optimality
    tol_pivot: float = 1e-7      # smallest usable pivot element
    tol_feas: float = 1e-9       # Harris ratio-test slack
    residual_tol: float = 1e-8   # final |Ax - b| check
    refactor_every: int = 100
    perturb: float = 1e-7        # right-hand-side shift against degenerate stalling
    max_iterations: int = 200_000


@dataclass
class SimplexResult:
    x: np.ndarray
    objective: float
    basis: np.ndarray
    iterations: int
    bland_pivots: int = 0
    residual: float = 0.0
    stats: dict = field(default_factory=dict)


@njit(cache=True)
def _ftran_etas(z, eta_rows, eta_cols, count):
    for k in range(count):
        r = eta_rows[k]
        col = eta_cols[k]
        zr = z[r] / col[r]
        if zr != 0.0:
            for i in range(z.shape[0]):
                z[i] -= col[i] * zr
        z[r] = zr


@njit(cache=True)
def _btran_etas(v, eta_rows, eta_cols, count):
    for k in range(count - 1, -1, -1):
        r = eta_rows[k]
        col = eta_cols[k]
        s = v[r]
        for i in range(v.shape[0]):
            if i != r:
                s -= col[i] * v[i]
        v[r] = s / col[r]


class RevisedSimplex:
    """One solver per constraint system; objectives and start bases vary per call."""

    def __init__(self, A, b, options: SimplexOptions | None = None):
        self.A = sp.csc_matrix(A, dtype=float)
        self.A.sort_indices()
        self.AT = sp.csr_matrix(self.A.T)
        self.b = np.asarray(b, dtype=float)
        self.m, self.n = self.A.shape
        if self.b.shape != (self.m,):
            raise ValueError("b has the wrong length")
        self.opt = options or SimplexOptions()
        k = self.opt.refactor_every
        self._eta_rows = np.zeros(k, dtype=np.int64)
        self._eta_cols = np.zeros((k, self.m))
        self._neta = 0

    # -- basis handling ---------------------------------------------------

    def _column(self, j: int) -> np.ndarray:
        col = np.zeros(self.m)
        if j < self.n:
            lo, hi = self.A.indptr[j], self.A.indptr[j + 1]
            col[self.A.indices[lo:hi]] = self.A.data[lo:hi]
        else:
            col[j - self.n] = 1.0
        return col

    def _basis_matrix(self, basis: np.ndarray):
        struct = basis < self.n
        j = np.where(struct, basis, 0)
        lo = self.A.indptr[j]
        counts = np.where(struct, self.A.indptr[j + 1] - lo, 1)
        indptr = np.concatenate([[0], np.cumsum(counts)])
        # gather positions of every basic column's entries in A.indices/A.data
        starts = np.repeat(lo - indptr[:-1], counts) + np.arange(indptr[-1])
        art = np.repeat(~struct, counts)
        src = np.where(art, 0, starts)
        indices = np.where(art, np.repeat(basis - self.n, counts), self.A.indices[src])
        data = np.where(art, 1.0, self.A.data[src])
        return sp.csc_matrix((data, indices, indptr), shape=(self.m, self.m))

    def _factor(self, basis: np.ndarray) -> None:
        B = self._basis_matrix(basis)
        try:
            self._lu = splu(B, permc_spec="COLAMD", diag_pivot_thresh=1.0)
        except RuntimeError as exc:  # SuperLU reports exact singularity this way
            raise SingularBasisError(str(exc)) from None
        self._neta = 0

    def _ftran(self, a: np.ndarray) -> np.ndarray:
        z = self._lu.solve(a)
        if self._neta:
            _ftran_etas(z, self._eta_rows, self._eta_cols, self._neta)
        return z

    def _btran(self, c: np.ndarray) -> np.ndarray:
        v = c.copy()
        if self._neta:
            _btran_etas(v, self._eta_rows, self._eta_cols, self._neta)
        return self._lu.solve(v, trans="T")

    def _fresh_xb(self, basis: np.ndarray, rhs: np.ndarray | None = None) -> np.ndarray:
        self._factor(basis)
        xb = self._lu.solve(self.b if rhs is None else rhs)
        xb[np.abs(xb) < 1e-13] = 0.0
        return xb

    def _keys(self) -> np.ndarray:
        if not hasattr(self, "_zobrist"):
            rng = np.random.default_rng(0x5EED)
            self._zobrist = rng.integers(1, 2**63, size=self.n + self.m, dtype=np.int64)
        return self._zobrist

    # -- main loop --------------------------------------------------------

    def solve(self, c, basis) -> SimplexResult:
        opt = self.opt
        c = np.asarray(c, dtype=float)
        if c.shape != (self.n,):
            raise ValueError("c has the wrong length")
        basis = np.array(basis, dtype=np.int64)
        if basis.shape != (self.m,) or len(set(basis.tolist())) != self.m:
            raise ValueError("basis must list m distinct columns")
        xb = self._fresh_xb(basis)
        if xb.min() < -1e-7:
            raise SimplexError("starting basis is not primal feasible")

        iters = bland_pivots = 0
        schedule = [opt.perturb, opt.perturb * 1e-3, 0.0] if opt.perturb > 0 else [0.0]
        for eps in schedule:
            final, k, kb = self._run(c, basis.copy(), eps, opt.max_iterations - iters)
            iters += k
            bland_pivots += kb
            xb = self._fresh_xb(final)
            if xb.min() >= -opt.tol_feas:
                break
            # the perturbed optimum is infeasible for the true right-hand side
        else:
            raise NumericalInstabilityError(-float(xb.min()), opt.tol_feas)
        xb = np.maximum(xb, 0.0)

        n = self.n
        x = np.zeros(n)
        struct = final < n
        x[final[struct]] = xb[struct]
        residual = float(np.abs(self.A.dot(x) - self.b).max()) if self.m else 0.0
        art_level = float(np.abs(xb[~struct]).max()) if (~struct).any() else 0.0
        residual = max(residual, art_level)
        if residual > opt.residual_tol:
            raise NumericalInstabilityError(residual, opt.residual_tol)
        return SimplexResult(
            x=x,
            objective=float(c @ x),
            basis=final,
            iterations=iters,
            bland_pivots=bland_pivots,
            residual=residual,
            stats={"perturbation": eps},
        )

    def _run(self, c, basis, eps: float, budget: int):
        """Pivot to an optimal basis of the problem with right-hand side shifted so
        that every structural basic variable of the start sits ``eps * (1 + u)``
        above its value (u uniform, fixed seed); returns (basis, pivots, bland pivots)."""
        opt = self.opt
        n, m = self.n, self.m
        c_ext = np.concatenate([c, np.zeros(m)])
        rhs = self.b
        if eps > 0:
            shift = eps * (1.0 + np.random.default_rng(0x5EED).random(m))
            shift[basis >= n] = 0.0
            rhs = self.b + self._basis_matrix(basis) @ shift
        xb = np.maximum(self._fresh_xb(basis, rhs), 0.0)
        in_basis = np.zeros(n + m, dtype=bool)
        in_basis[basis] = True

        iters = 0
        bland_pivots = 0
        bland = False
        keys = self._keys()
        basis_hash = np.bitwise_xor.reduce(keys[basis])
        seen = {int(basis_hash)}
        verified = False
        while True:
            y = self._btran(c_ext[basis])
            d = c - self.AT.dot(y)
            d[in_basis[:n]] = 0.0
            if bland:
                cand = np.flatnonzero(d < -opt.tol_opt)
                q = int(cand[0]) if cand.size else -1
            else:
                q = int(np.argmin(d))
                if d[q] >= -opt.tol_opt:
                    q = -1
            if q < 0:
                if verified:
                    break
                # confirm optimality against a fresh factorization
                xb = np.maximum(self._fresh_xb(basis, rhs), 0.0)
                verified = True
                continue
            verified = False
            if iters >= budget:
                raise IterationLimitError(opt.max_iterations)

            alpha = self._ftran(self._column(q))
            artificial = basis >= n
            pos = (alpha > opt.tol_pivot) & ~artificial
            art = artificial & (np.abs(alpha) > opt.tol_pivot)
            if not pos.any() and not art.any():
                raise SimplexError("problem is unbounded")
            if art.any():
                # a zero-fixed artificial blocks at step zero
                rows = np.flatnonzero(art)
                r = int(rows[np.argmin(basis[rows])]) if bland else int(rows[np.argmax(np.abs(alpha[rows]))])
                theta = 0.0
            else:
                rows = np.flatnonzero(pos)
                ratios = xb[rows] / alpha[rows]
                if bland:
                    tmin = ratios.min()
                    tie = rows[ratios <= tmin + 1e-12]
                    r = int(tie[np.argmin(basis[tie])])
                else:
                    bound = ((xb[rows] + opt.tol_feas) / alpha[rows]).min()
                    ok = ratios <= bound
                    tie = rows[ok]
                    r = int(tie[np.argmax(alpha[tie])])
                theta = max(xb[r] / alpha[r], 0.0)

            xb -= theta * alpha
            xb[r] = theta
            np.maximum(xb, 0.0, out=xb)
            basis_hash ^= keys[basis[r]] ^ keys[q]
            in_basis[basis[r]] = False
            in_basis[q] = True
            basis[r] = q
            iters += 1
            if bland:
                bland_pivots += 1

            if theta <= opt.tol_feas:
                h = int(basis_hash)
                if h in seen:
                    bland = True
                seen.add(h)
            else:
                seen = {int(basis_hash)}
                bland = False

            if self._neta >= opt.refactor_every:
                xb = np.maximum(self._fresh_xb(basis, rhs), 0.0)
            else:
                self._eta_rows[self._neta] = r
                self._eta_cols[self._neta] = alpha
                self._neta += 1

        return basis, iters, bland_pivots
