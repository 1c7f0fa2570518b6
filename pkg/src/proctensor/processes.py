"""n-step process tensors: circuit construction, causality checks, named examples.

The Choi state of an n-step process carries 2n slots of uniform dimension d
in the order (i_0, o_1, i_1, o_2, ..., i_{n-1}, o_n). A single environment
persists through all steps; it is traced out only at the end, so memory may
flow through it between steps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .config import DEFAULT_TOL, Tolerances, max_dense_dim
from .linalg import (
    DensityMatrix,
    DimensionLimitError,
    kron,
    max_entangled_vector,
    maximally_mixed,
    partial_trace,
    permute_subsystems,
    purify,
    trace_distance,
    unitarity_residual,
)
from .channels import fredkin_unitary, swap_unitary


@dataclass(frozen=True)
class CausalityReport:
    """Per-level residuals of the trace-condition hierarchy."""

    residuals: tuple[float, ...]  # level j = residuals[j-1], j = n down to 1
    base_residual: float          # first-input marginal vs maximally mixed
    tol: float
    passed: bool


@dataclass(frozen=True)
class ProcessTensor:
    """Causality-verified Choi state of an n-step process."""

    state: DensityMatrix
    n: int
    d: int

    @classmethod
    def from_state(
        cls, state: DensityMatrix, tol_causal: float | None = None
    ) -> "ProcessTensor":
        k = state.num_subsystems
        if k == 0 or k % 2 != 0:
            raise ValueError(f"a process tensor needs an even slot count, got {k}")
        d = state.dims[0]
        if any(dim != d for dim in state.dims):
            raise ValueError(f"slot dimensions must be uniform, got {state.dims}")
        pt = cls(state=state, n=k // 2, d=d)
        tol = state.tol.causal if tol_causal is None else tol_causal
        report = verify_causality(state, tol)
        if not report.passed:
            raise ValueError(
                f"causality hierarchy violated: worst residual "
                f"{max(report.residuals + (report.base_residual,)):.3e} > {tol:.1e}"
            )
        return pt


@dataclass(frozen=True)
class CircuitProcessSpec:
    """Circuit description of an n-step dilation, one unitary per step.

    Each unitary acts on system (x) environment, system first; the same
    environment, initially ``env_state``, threads through all steps.
    """

    n: int
    d: int
    env_state: DensityMatrix
    unitaries: tuple[np.ndarray, ...]
    tol: Tolerances = field(default=DEFAULT_TOL, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.d < 2:
            raise ValueError(f"d must be >= 2, got {self.d}")
        us = tuple(np.asarray(u, dtype=complex) for u in self.unitaries)
        object.__setattr__(self, "unitaries", us)
        if len(us) != self.n:
            raise ValueError(f"expected {self.n} unitaries, got {len(us)}")
        dim = self.d * self.d_env
        for j, u in enumerate(us):
            if u.shape != (dim, dim):
                raise ValueError(f"unitary {j} has shape {u.shape}, expected {(dim, dim)}")
            res = unitarity_residual(u)
            if res > self.tol.eig:
                raise ValueError(f"unitary {j} unitarity residual {res:.3e}")
            u.setflags(write=False)

    @property
    def d_env(self) -> int:
        return self.env_state.dim


EnvInit = Literal["maximally-mixed", "pure-ground", "seeded-random"]


@dataclass(frozen=True)
class RandomSpec:
    """Seeded random process: Haar unitaries over a shared environment."""

    n: int
    d: int
    d_env: int
    seed: int
    env_init: EnvInit = "maximally-mixed"

    def __post_init__(self) -> None:
        if self.n < 1 or self.d < 2 or self.d_env < 1:
            raise ValueError(f"invalid (n, d, d_env) = {(self.n, self.d, self.d_env)}")


def build_from_circuit(spec: CircuitProcessSpec) -> ProcessTensor:
    """Simulate the Choi-generating circuit and return the process tensor.

    A fresh maximally entangled pair feeds each step: its live half passes
    through the step unitary (becoming output slot o_j) while the kept half
    becomes input slot i_{j-1}. A single purified environment survives across
    steps and is traced out at the end.
    """
    n, d, de = spec.n, spec.d, spec.d_env
    psi_env = purify(spec.env_state, spec.tol)  # (de, r)
    r = psi_env.shape[1]
    working = d ** (2 * n) * de * r
    if working > max_dense_dim():
        raise DimensionLimitError(
            f"working dimension {working} exceeds dense limit {max_dense_dim()}"
        )
    phi = max_entangled_vector(d)
    vec = phi
    for _ in range(n - 1):
        vec = np.multiply.outer(vec, phi)
    vec = np.multiply.outer(vec, psi_env)
    # axes: (i_0, live_1, i_1, live_2, ..., i_{n-1}, live_n, env, ancilla)
    env_ax = 2 * n
    for j, u in enumerate(spec.unitaries):
        live_ax = 2 * j + 1
        t = np.tensordot(u.reshape(d, de, d, de), vec, axes=([2, 3], [live_ax, env_ax]))
        vec = np.moveaxis(t, [0, 1], [live_ax, env_ax])
    m = vec.reshape(d ** (2 * n), de * r)
    state = DensityMatrix(None, (d,) * (2 * n), spec.tol, factor=m)
    return ProcessTensor.from_state(state)


def verify_causality(
    state: DensityMatrix | ProcessTensor, tol: float = DEFAULT_TOL.causal
) -> CausalityReport:
    """Check the hierarchy of trace conditions on a 2n-slot state.

    For each level j (from n down to 1) the output slot o_j of the
    first-j-steps marginal must trace away into the previous marginal
    tensored with a maximally mixed input.
    """
    if isinstance(state, ProcessTensor):
        state = state.state
    k = state.num_subsystems
    if k == 0 or k % 2 != 0:
        raise ValueError(f"expected an even slot count, got {k}")
    n = k // 2
    residuals = []
    for j in range(n, 0, -1):
        upto_j = partial_trace(state, range(2 * j)) if j < n else state
        lhs = partial_trace(upto_j, range(2 * j - 1))
        d_in = state.dims[2 * j - 2]
        if j == 1:
            rhs = maximally_mixed(d_in)
        else:
            prev = partial_trace(state, range(2 * j - 2))
            if prev.factor is not None:
                rhs = DensityMatrix(
                    None,
                    prev.dims + (d_in,),
                    state.tol,
                    factor=np.kron(prev.factor, np.eye(d_in) / math.sqrt(d_in)),
                )
            else:
                rhs = DensityMatrix(
                    kron(prev.mat, np.eye(d_in) / d_in),
                    prev.dims + (d_in,),
                    state.tol,
                )
        residuals.append(trace_distance(lhs, rhs))
    base = trace_distance(partial_trace(state, (0,)), maximally_mixed(state.dims[0]))
    residuals = tuple(reversed(residuals))
    passed = all(res <= tol for res in residuals) and base <= tol
    return CausalityReport(residuals=residuals, base_residual=base, tol=tol, passed=passed)


def nm_depolarizing_process(p: float) -> ProcessTensor:
    """Two-step qubit process from two Fredkin interactions with one environment.

    The control qubit starts in (1-p)|0><0| + p|1><1| and the swap target
    maximally mixed; each step is locally depolarizing, but memory flows
    through the shared environment.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    control = np.diag([1.0 - p, p])
    env = DensityMatrix(kron(control, np.eye(2) / 2), (2, 2))
    u = fredkin_unitary(2)
    spec = CircuitProcessSpec(n=2, d=2, env_state=env, unitaries=(u, u))
    return build_from_circuit(spec)


def swap_chain_process(n: int, d: int) -> ProcessTensor:
    """Maximally non-Markovian chain: each output repeats the previous input.

    Built directly as the product of a maximally mixed first output, fully
    entangled (i_{j-1}, o_{j+1}) pairs, and a maximally mixed last input.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if d ** (2 * n) > max_dense_dim():
        raise DimensionLimitError(f"dimension {d ** (2 * n)} exceeds dense limit")
    phi_vec = max_entangled_vector(d).reshape(-1, 1)
    fac = np.eye(d) / math.sqrt(d)
    for _ in range(n - 1):
        fac = np.kron(fac, phi_vec)
    fac = np.kron(fac, np.eye(d) / math.sqrt(d))
    built = DensityMatrix(None, (d,) * (2 * n), factor=fac)
    # built slot order: (o_1, i_0, o_2, i_1, o_3, ..., i_{n-2}, o_n, i_{n-1})
    pos = {("o", 1): 0, ("i", n - 1): 2 * n - 1}
    for j in range(n - 1):
        pos[("i", j)] = 1 + 2 * j
        pos[("o", j + 2)] = 2 + 2 * j
    perm = []
    for m in range(2 * n):
        slot = ("i", m // 2) if m % 2 == 0 else ("o", (m + 1) // 2)
        perm.append(pos[slot])
    return ProcessTensor.from_state(permute_subsystems(built, perm))


def cnot_swap_process() -> ProcessTensor:
    """Two-step qubit process: CNOT onto a fresh |0> environment, then SWAP.

    Maximally non-Markovian while keeping nonzero first-step correlations.
    """
    env = DensityMatrix(np.diag([1.0, 0.0]), (2,))
    cnot = np.array(
        [
            [1, 0, 0, 0],
            [0, 1, 0, 0],
            [0, 0, 0, 1],
            [0, 0, 1, 0],
        ],
        dtype=float,
    )
    spec = CircuitProcessSpec(n=2, d=2, env_state=env, unitaries=(cnot, swap_unitary(2)))
    return build_from_circuit(spec)


def haar_unitary(dim: int, seed: int | np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via phase-corrected QR of a complex Gaussian."""
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))
    z /= math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    return q * (diag / np.abs(diag))


def _random_env(rng: np.random.Generator, d_env: int, env_init: EnvInit) -> DensityMatrix:
    if env_init == "maximally-mixed":
        return maximally_mixed(d_env)
    if env_init == "pure-ground":
        mat = np.zeros((d_env, d_env))
        mat[0, 0] = 1.0
        return DensityMatrix(mat, (d_env,))
    if env_init == "seeded-random":
        g = rng.standard_normal((d_env, d_env)) + 1j * rng.standard_normal((d_env, d_env))
        mat = g @ g.conj().T
        return DensityMatrix(mat / np.trace(mat).real, (d_env,))
    raise ValueError(f"unknown env_init {env_init!r}")


def random_process(spec: RandomSpec) -> ProcessTensor:
    """Deterministic (seeded) random process from Haar unitaries."""
    rng = np.random.default_rng(spec.seed)
    env = _random_env(rng, spec.d_env, spec.env_init)
    us = tuple(haar_unitary(spec.d * spec.d_env, rng) for _ in range(spec.n))
    circuit = CircuitProcessSpec(n=spec.n, d=spec.d, env_state=env, unitaries=us)
    return build_from_circuit(circuit)
