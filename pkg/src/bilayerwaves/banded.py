"""Direct solver for cyclic (periodic) block-banded linear systems.

The implicit schemes produce, at every time step, a system

    sum_s  M_s[i] x_{(i+s) mod N}  =  b_i ,      s in {-w, ..., w},

where each M_s[i] is a small dense d x d block and w <= 2 is the stencil
half-width.  The solve is a banded LU factorization of the acyclic part
(LAPACK ``dgbtrf``) plus a Woodbury correction of rank <= 4*w*d for the
periodic corner entries.  The banded substitution is done for all right
hand sides (the solution plus the Woodbury columns) in a single pass over
the factors, which is where a plain per-column ``dgbtrs`` spends most of
its time; a compiled kernel does that pass when numba is available, and
``scipy.linalg.solve_banded`` covers the rest.  A sparse-LU fallback
handles a singular acyclic band.

Unknowns are ordered point-major: x[i*d + a] is component a at point i.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg
from scipy.linalg import get_lapack_funcs

try:
    import numba

    @numba.njit(cache=True)
    def _banded_substitute(lu, ipiv, b, kl, ku):  # pragma: no cover - compiled
        """Forward/back substitution on dgbtrf factors, all columns of b in
        one sweep (LAPACK dgbtrs semantics; scipy's ipiv is 0-based)."""
        m, nrhs = b.shape
        kd = kl + ku
        for j in range(m - 1):
            lm = min(kl, m - 1 - j)
            piv = ipiv[j]
            if piv != j:
                for k in range(nrhs):
                    tmp = b[piv, k]
                    b[piv, k] = b[j, k]
                    b[j, k] = tmp
            for r in range(lm):
                mult = lu[kd + 1 + r, j]
                if mult != 0.0:
                    i = j + 1 + r
                    for k in range(nrhs):
                        b[i, k] -= mult * b[j, k]
        for j in range(m - 1, -1, -1):
            dinv = 1.0 / lu[kd, j]
            for k in range(nrhs):
                b[j, k] *= dinv
            imin = j - kd
            if imin < 0:
                imin = 0
            for i in range(imin, j):
                u = lu[kd + i - j, j]
                if u != 0.0:
                    for k in range(nrhs):
                        b[i, k] -= u * b[j, k]

except ImportError:  # pragma: no cover - exercised only without numba
    _banded_substitute = None

__all__ = ["CyclicBlockBanded", "SolverError"]


class SolverError(RuntimeError):
    """Linear solve failed or produced an unacceptable residual."""


class CyclicBlockBanded:
    """Cyclic block-banded operator with a direct solve.

    blocks maps offset s -> array of shape (N, d, d) (or (d, d), broadcast
    over points).  Row i of the operator couples x_{i+s mod N} through
    blocks[s][i].
    """

    def __init__(self, n_points: int, block_size: int, blocks: dict[int, np.ndarray]):
        self.n = int(n_points)
        self.d = int(block_size)
        self.half_width = max(abs(s) for s in blocks)
        if self.n < 2 * self.half_width + 3:
            raise ValueError(
                f"grid too small for half-width {self.half_width}: n={self.n}"
            )
        self.blocks: dict[int, np.ndarray] = {}
        for s, m in blocks.items():
            m = np.asarray(m, dtype=float)
            if m.shape == (self.d, self.d):
                m = np.broadcast_to(m, (self.n, self.d, self.d))
            if m.shape != (self.n, self.d, self.d):
                raise ValueError(f"offset {s}: bad block shape {m.shape}")
            self.blocks[int(s)] = m

    # -- application -----------------------------------------------------

    def matvec(self, u: np.ndarray) -> np.ndarray:
        """Apply the operator to u of shape (N, d)."""
        out = np.zeros((self.n, self.d))
        for s, m in self.blocks.items():
            out += np.einsum("nab,nb->na", m, np.roll(u, -s, axis=0))
        return out

    # -- direct solve ----------------------------------------------------

    def _assemble(self):
        """Band array in dgbtrf layout (2kl+ku+1, m) plus corner triplets.

        The band is built F-contiguous (through a transposed C view) so the
        LAPACK call can factor it in place without a layout copy; writes use
        stride-d slices, one per block entry and offset.
        """
        n, d = self.n, self.d
        kl = ku = self.half_width * d + (d - 1)
        m = n * d
        band_t = np.zeros((m, 2 * kl + ku + 1))  # band_t[j, row] = band[row, j]
        corner_rows, corner_cols, corner_vals = [], [], []
        for s, blk in self.blocks.items():
            p0, p1 = max(0, -s), n - max(0, s)
            outside = list(range(0, p0)) + list(range(p1, n))
            for a in range(d):
                for b in range(d):
                    off = s * d + (b - a)  # j - i
                    band_t[(p0 + s) * d + b:(p1 + s) * d + b:d, kl + ku - off] = \
                        blk[p0:p1, a, b]
                    for p in outside:
                        corner_rows.append(p * d + a)
                        corner_cols.append(((p + s) % n) * d + b)
                        corner_vals.append(blk[p, a, b])
        return ((kl, ku), band_t.T,
                np.asarray(corner_rows, dtype=int),
                np.asarray(corner_cols, dtype=int),
                np.asarray(corner_vals, dtype=float))

    def _substituted(self, band, kl, ku, stacked):
        """B^-1 applied to every column of stacked, via one factorization."""
        if _banded_substitute is not None:
            gbtrf, = get_lapack_funcs(("gbtrf",), (band,))
            lu, ipiv, info = gbtrf(band, kl, ku, overwrite_ab=True)
            if info != 0:
                raise scipy.linalg.LinAlgError(f"gbtrf info={info}")
            _banded_substitute(lu, ipiv, stacked, kl, ku)
            return stacked
        return scipy.linalg.solve_banded((kl, ku), band[kl:], stacked,
                                         check_finite=False)

    def _solve_sparse(self, rhs_flat: np.ndarray) -> np.ndarray:
        n, d = self.n, self.d
        m = n * d
        rows, cols, vals = [], [], []
        pts = np.arange(n)
        for s, blk in self.blocks.items():
            q = (pts + s) % n
            for a in range(d):
                for b in range(d):
                    rows.append(pts * d + a)
                    cols.append(q * d + b)
                    vals.append(blk[:, a, b])
        A = scipy.sparse.csc_matrix(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
            shape=(m, m),
        )
        try:
            return scipy.sparse.linalg.splu(A).solve(rhs_flat)
        except RuntimeError as exc:  # splu reports exact singularity this way
            raise SolverError(f"sparse fallback failed: {exc}") from exc

    def solve(self, rhs: np.ndarray, residual_tol: float | None = 1e-10,
              context: str = "") -> np.ndarray:
        """Solve A x = rhs for rhs of shape (N, d).

        When residual_tol is not None the relative residual is verified and
        a SolverError raised if it exceeds the tolerance.
        """
        if rhs.shape != (self.n, self.d):
            raise ValueError(f"rhs shape {rhs.shape}, expected {(self.n, self.d)}")
        b = rhs.reshape(-1)
        try:
            (kl, ku), band, c_rows, c_cols, c_vals = self._assemble()
            if c_rows.size:
                ucols, cidx = np.unique(c_cols, return_inverse=True)
                r = ucols.size
                stacked = np.zeros((self.n * self.d, 1 + r))
                stacked[:, 0] = b
                np.add.at(stacked, (c_rows, 1 + cidx), c_vals)
                sol = self._substituted(band, kl, ku, stacked)
                y, Z = sol[:, 0], sol[:, 1:]
                cap = np.eye(r) + Z[ucols, :]
                x = y - Z @ np.linalg.solve(cap, y[ucols])
            else:
                x = self._substituted(band, kl, ku, b.reshape(-1, 1).copy())[:, 0]
        except (scipy.linalg.LinAlgError, np.linalg.LinAlgError):
            # acyclic band singular even though the cyclic operator is not
            x = self._solve_sparse(b)
        x = x.reshape(self.n, self.d)
        if residual_tol is not None:
            bnorm = max(np.linalg.norm(b), 1e-300)
            res = np.linalg.norm((self.matvec(x) - rhs).reshape(-1))
            if not res <= residual_tol * bnorm:  # also catches NaN
                x = self._solve_sparse(b).reshape(self.n, self.d)
                res = np.linalg.norm((self.matvec(x) - rhs).reshape(-1))
                if not res <= residual_tol * bnorm:
                    where = f" ({context})" if context else ""
                    raise SolverError(
                        f"linear solve residual {res / bnorm:.3e} "
                        f"exceeds {residual_tol:.1e}{where}"
                    )
        return x

    def dense(self) -> np.ndarray:
        """Materialize the full matrix (tests and small problems only)."""
        m = self.n * self.d
        A = np.zeros((m, m))
        for s, blk in self.blocks.items():
            for p in range(self.n):
                q = (p + s) % self.n
                A[p * self.d:(p + 1) * self.d, q * self.d:(q + 1) * self.d] += blk[p]
        return A
