"""Dense complex linear algebra and entropy functionals over multipartite states.

Index convention: the leftmost tensor factor is the slowest-varying
(big-endian) index, matching ``numpy.kron`` with the left operand first.
All entropic quantities are in nats.

States may carry a low-rank factor F with rho = F F^dag (circuit outputs
and purified products arise this way). Spectral quantities are then
computed from the small Gram matrix F^dag F and the dense matrix is only
materialized on demand, which keeps large-but-low-rank states cheap.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .config import DEFAULT_TOL, Tolerances, max_dense_dim


class LinalgError(Exception):
    """Base error for state/operator contract violations."""


class DimensionLimitError(LinalgError):
    """A tensor product would exceed the configured dense dimension cap."""


class NotHermitianError(LinalgError):
    """Input violates the Hermiticity contract."""


class NotAStateError(LinalgError):
    """Input is not a valid density matrix (PSD, unit trace)."""


def hermiticity_residual(m: np.ndarray) -> float:
    """Max-abs deviation of m from its adjoint."""
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def unitarity_residual(u: np.ndarray) -> float:
    """Operator-entry residual of U U^dag from the identity."""
    return float(np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0]))))


class DensityMatrix:
    """Hermitian, PSD, unit-trace matrix with a subsystem-shape annotation.

    ``dims`` lists the subsystem dimensions, slowest-varying first; their
    product must equal the matrix dimension. Construct either from a dense
    matrix (fully validated) or from a factor F with rho = F F^dag
    (Hermiticity and positivity then hold by construction).
    """

    __slots__ = ("_mat", "_factor", "dims", "tol")

    def __init__(
        self,
        mat: np.ndarray | None,
        dims: Sequence[int],
        tol: Tolerances = DEFAULT_TOL,
        *,
        factor: np.ndarray | None = None,
    ) -> None:
        self.dims = tuple(int(d) for d in dims)
        self.tol = tol
        if any(d < 1 for d in self.dims):
            raise ValueError(f"subsystem dimensions must be >= 1, got {self.dims}")
        dim = math.prod(self.dims)
        if mat is None and factor is None:
            raise ValueError("provide a dense matrix or a factor")
        if factor is not None:
            factor = np.asarray(factor, dtype=complex)
            if factor.ndim != 2 or factor.shape[0] != dim:
                raise ValueError(
                    f"factor shape {factor.shape} does not match dimension {dim}"
                )
            if not np.all(np.isfinite(factor)):
                raise ValueError("factor entries must be finite")
            tr = float(np.sum(np.abs(factor) ** 2))
            if abs(tr - 1.0) > tol.tr:
                raise NotAStateError(f"trace {tr} deviates from 1 beyond {tol.tr:.1e}")
            factor.setflags(write=False)
        self._factor = factor
        if mat is not None:
            mat = np.asarray(mat, dtype=complex)
            if mat.ndim != 2 or mat.shape != (dim, dim):
                raise ValueError(
                    f"expected a {dim}x{dim} matrix for dims {self.dims}, "
                    f"got shape {mat.shape}"
                )
            if not np.all(np.isfinite(mat)):
                raise ValueError("matrix entries must be finite")
            res = hermiticity_residual(mat)
            if res > tol.herm:
                raise NotHermitianError(
                    f"Hermiticity residual {res:.3e} > {tol.herm:.1e}"
                )
            tr = complex(np.trace(mat))
            if abs(tr - 1.0) > tol.tr:
                raise NotAStateError(f"trace {tr} deviates from 1 beyond {tol.tr:.1e}")
            if factor is None:
                lo = float(np.linalg.eigvalsh(mat)[0])
                if lo < -tol.psd:
                    raise NotAStateError(
                        f"minimum eigenvalue {lo:.3e} < -{tol.psd:.1e}"
                    )
            mat.setflags(write=False)
        self._mat = mat

    @property
    def mat(self) -> np.ndarray:
        """Dense matrix; materialized from the factor on first use."""
        if self._mat is None:
            mat = self._factor @ self._factor.conj().T
            mat.setflags(write=False)
            self._mat = mat
        return self._mat

    @property
    def factor(self) -> np.ndarray | None:
        return self._factor

    @property
    def dim(self) -> int:
        return math.prod(self.dims)

    @property
    def num_subsystems(self) -> int:
        return len(self.dims)

    def __repr__(self) -> str:
        return f"DensityMatrix(dims={self.dims})"


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Tensor product with the left factor as the slowest-varying index."""
    out_dim = a.shape[0] * b.shape[0]
    if out_dim > max_dense_dim():
        raise DimensionLimitError(
            f"product dimension {out_dim} exceeds dense limit {max_dense_dim()}"
        )
    return np.kron(a, b)


def maximally_mixed(dims: Sequence[int] | int) -> DensityMatrix:
    """Identity over the given subsystem dims, normalized to unit trace."""
    dims = (dims,) if isinstance(dims, int) else tuple(dims)
    n = math.prod(dims)
    return DensityMatrix(np.eye(n) / n, dims, factor=np.eye(n) / math.sqrt(n))


def max_entangled_vector(d: int) -> np.ndarray:
    """Amplitudes of the canonical maximally entangled two-qudit ket, shape (d, d)."""
    return np.eye(d) / math.sqrt(d)


def max_entangled_state(d: int) -> DensityMatrix:
    """Normalized maximally entangled two-qudit state."""
    v = max_entangled_vector(d).reshape(-1, 1)
    return DensityMatrix(np.outer(v, v.conj()), (d, d), factor=v)


def _check_subset(subset: Sequence[int], n: int, *, name: str = "subset") -> tuple[int, ...]:
    subset = tuple(int(i) for i in subset)
    if len(set(subset)) != len(subset):
        raise ValueError(f"{name} has repeated indices: {subset}")
    for i in subset:
        if not 0 <= i < n:
            raise ValueError(f"{name} index {i} out of range for {n} subsystems")
    return subset


def partial_trace(rho: DensityMatrix, keep: Sequence[int]) -> DensityMatrix:
    """Trace out all subsystems not in ``keep``; kept slots stay in original order."""
    keep = _check_subset(keep, rho.num_subsystems, name="keep")
    if not keep:
        raise ValueError("keep must be nonempty")
    keep = tuple(sorted(keep))
    k = rho.num_subsystems
    out_dims = tuple(rho.dims[i] for i in keep)
    out_dim = math.prod(out_dims)
    if rho.factor is not None:
        traced = tuple(i for i in range(k) if i not in keep)
        rank = rho.factor.shape[1]
        t = rho.factor.reshape(rho.dims + (rank,))
        t = t.transpose(keep + traced + (k,))
        new_factor = t.reshape(out_dim, -1)
        if new_factor.shape[1] < out_dim:
            return DensityMatrix(None, out_dims, rho.tol, factor=new_factor)
        return DensityMatrix(
            new_factor @ new_factor.conj().T, out_dims, rho.tol, factor=new_factor
        )
    t = rho.mat.reshape(rho.dims + rho.dims)
    row = list(range(k))
    col = [i if i not in keep else k + i for i in range(k)]
    out = [i for i in keep] + [k + i for i in keep]
    reduced = np.einsum(t, row + col, out)
    return DensityMatrix(reduced.reshape(out_dim, out_dim), out_dims, rho.tol)


def partial_transpose(rho: DensityMatrix, subset: Sequence[int]) -> np.ndarray:
    """Transpose on the chosen factors in the computational basis."""
    subset = _check_subset(subset, rho.num_subsystems)
    k = rho.num_subsystems
    t = rho.mat.reshape(rho.dims + rho.dims)
    perm = list(range(2 * k))
    for i in subset:
        perm[i], perm[k + i] = perm[k + i], perm[i]
    return t.transpose(perm).reshape(rho.dim, rho.dim)


def permute_subsystems(rho: DensityMatrix, perm: Sequence[int]) -> DensityMatrix:
    """Reorder subsystems so that new slot j carries old slot perm[j]."""
    perm = _check_subset(perm, rho.num_subsystems, name="perm")
    k = rho.num_subsystems
    if len(perm) != k:
        raise ValueError("perm must cover every subsystem")
    new_dims = tuple(rho.dims[p] for p in perm)
    if rho.factor is not None:
        rank = rho.factor.shape[1]
        t = rho.factor.reshape(rho.dims + (rank,))
        new_factor = t.transpose(tuple(perm) + (k,)).reshape(rho.dim, rank)
        return DensityMatrix(None, new_dims, rho.tol, factor=new_factor)
    t = rho.mat.reshape(rho.dims + rho.dims)
    t = t.transpose(tuple(perm) + tuple(k + p for p in perm))
    return DensityMatrix(t.reshape(rho.dim, rho.dim), new_dims, rho.tol)


def eigenvalues_hermitian(m: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Real spectrum of a Hermitian matrix, ascending."""
    res = hermiticity_residual(np.asarray(m))
    if res > tol.herm:
        raise NotHermitianError(f"Hermiticity residual {res:.3e} > {tol.herm:.1e}")
    return np.linalg.eigvalsh(m)


def state_spectrum(rho: DensityMatrix) -> np.ndarray:
    """Nonzero-padded spectrum of a state, using the Gram matrix of a factor."""
    if rho.factor is not None and rho.factor.shape[1] < rho.dim:
        gram = rho.factor.conj().T @ rho.factor
        w = np.linalg.eigvalsh(gram)
        return np.concatenate([np.zeros(rho.dim - w.size), w])
    return np.linalg.eigvalsh(rho.mat)


def _entropy_from_spectrum(w: np.ndarray, tol: Tolerances) -> float:
    if float(w.min(initial=0.0)) < -tol.psd:
        raise NotAStateError(f"negative eigenvalue {w.min():.3e} beyond -{tol.psd:.1e}")
    w = np.clip(w, 0.0, None)
    nz = w[w > 0.0]
    return float(-np.sum(nz * np.log(nz)))


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """-sum(lambda ln lambda) in nats, with 0 ln 0 := 0."""
    return _entropy_from_spectrum(state_spectrum(rho), rho.tol)


def relative_entropy(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """tr[rho (ln rho - ln sigma)] in nats, evaluated on sigma's support.

    Returns ``math.inf`` when rho has weight beyond ``tol.supp`` outside
    sigma's support.
    """
    if rho.dim != sigma.dim:
        raise ValueError(f"dimension mismatch: {rho.dim} vs {sigma.dim}")
    tol = rho.tol
    s, v = np.linalg.eigh(sigma.mat)
    support = s > tol.supp
    if rho.factor is not None:
        # <v_i| rho |v_i> = row norms of V^dag F
        diag = np.sum(np.abs(v.conj().T @ rho.factor) ** 2, axis=1)
    else:
        diag = np.einsum("ij,jk,ki->i", v.conj().T, rho.mat, v).real
    leakage = float(np.sum(diag[~support]))
    if leakage > tol.supp:
        return math.inf
    tr_rho_ln_rho = -von_neumann_entropy(rho)
    tr_rho_ln_sigma = float(np.sum(diag[support] * np.log(s[support])))
    return tr_rho_ln_rho - tr_rho_ln_sigma


def mutual_information(
    rho: DensityMatrix, partition: Sequence[Sequence[int]]
) -> float:
    """Multipartite mutual information over a disjoint cover of the subsystems.

    sum of block-marginal entropies minus the global entropy, in nats.
    """
    blocks = [tuple(_check_subset(b, rho.num_subsystems, name="block")) for b in partition]
    flat = [i for b in blocks for i in b]
    if len(set(flat)) != len(flat) or set(flat) != set(range(rho.num_subsystems)):
        raise ValueError("partition blocks must be disjoint and cover every subsystem")
    total = sum(von_neumann_entropy(partial_trace(rho, b)) for b in blocks)
    return total - von_neumann_entropy(rho)


def trace_distance(a: DensityMatrix, b: DensityMatrix) -> float:
    """Half the trace norm of a - b."""
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    if (
        a.factor is not None
        and b.factor is not None
        and a.factor.shape[1] + b.factor.shape[1] < a.dim
    ):
        # a - b acts within the joint column space; project there first
        q, _ = np.linalg.qr(np.concatenate([a.factor, b.factor], axis=1))
        pa = q.conj().T @ a.factor
        pb = q.conj().T @ b.factor
        w = np.linalg.eigvalsh(pa @ pa.conj().T - pb @ pb.conj().T)
    else:
        w = np.linalg.eigvalsh(a.mat - b.mat)
    return float(0.5 * np.sum(np.abs(w)))


def purify(rho: DensityMatrix, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Spectral square-root purification, shape (dim, rank).

    Eigenvalues below ``tol.psd`` are dropped, so the ancilla dimension is
    the numerical rank of rho.
    """
    w, v = np.linalg.eigh(rho.mat)
    keep = w > tol.psd
    return v[:, keep] * np.sqrt(w[keep])
