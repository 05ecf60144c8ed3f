"""Quantum Margulis channel: a uniform mixture of eight affine unitaries.

The channel applies one of the unitaries implementing the walk maps, chosen
uniformly at random.  On Wigner tables it acts exactly as the classical walk
acts on distributions, so its superoperator spectrum coincides with the walk
matrix spectrum; this module builds the channel, its dense superoperator,
the mixing rate, and the explicit intertwining checks.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .phasespace import PhaseSpaceContext, affine_unitary, inverse_wigner, wigner
from .walk import GridDist, margulis_generators, walk_matrix, walk_step

__all__ = [
    "KrausChannel",
    "margulis_channel",
    "apply_channel",
    "superoperator",
    "expander_lambda",
    "vectorize",
    "unvectorize",
    "IntertwiningReport",
    "verify_wigner_intertwining",
]


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """Mixture-of-unitaries channel rho -> (1/D) sum_U U rho U^dag.

    ``kraus`` holds the D unitaries; each carries weight 1/D, so the Kraus
    operators proper are U/sqrt(D).
    """

    dim: int
    kraus: tuple = field(repr=False)

    def __post_init__(self):
        ops = tuple(np.asarray(k, dtype=complex) for k in self.kraus)
        if not ops:
            raise ValueError("channel needs at least one unitary")
        eye = np.eye(self.dim)
        for k in ops:
            if k.shape != (self.dim, self.dim):
                raise ValueError(f"unitary shape {k.shape} != ({self.dim}, {self.dim})")
            if np.max(np.abs(k @ k.conj().T - eye)) > 1e-10:
                raise ValueError("channel members must be unitary "
                                 "(Kraus completeness would fail)")
        object.__setattr__(self, "kraus", ops)

    @property
    def degree(self) -> int:
        return len(self.kraus)

    def kraus_operators(self) -> list[np.ndarray]:
        """The properly weighted Kraus operators U/sqrt(D)."""
        return [k / np.sqrt(self.degree) for k in self.kraus]


def margulis_channel(ctx: PhaseSpaceContext) -> KrausChannel:
    """The degree-8 channel built from the eight affine-map unitaries."""
    unitaries = [affine_unitary(ctx, T) for T in margulis_generators(ctx.N)]
    return KrausChannel(ctx.N, tuple(unitaries))


def apply_channel(ch: KrausChannel, rho: np.ndarray) -> np.ndarray:
    """(1/D) sum_U U rho U^dag."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (ch.dim, ch.dim):
        raise ValueError(f"operator shape {rho.shape} != ({ch.dim}, {ch.dim})")
    out = np.zeros_like(rho)
    for U in ch.kraus:
        out += U @ rho @ U.conj().T
    return out / ch.degree


def vectorize(rho: np.ndarray) -> np.ndarray:
    """Column-stacking vec: vec(A X B^dag) = (conj(B) kron A) vec(X)."""
    return np.asarray(rho).reshape(-1, order="F")


def unvectorize(vec: np.ndarray, dim: int) -> np.ndarray:
    return np.asarray(vec).reshape(dim, dim, order="F")


def superoperator(ch: KrausChannel, max_dim: int = 9) -> np.ndarray:
    """Dense N^2 x N^2 matrix of the channel on column-stacked operators.

    M = (1/D) sum_U conj(U) kron U.  For this inverse-closed mixture M is
    hermitian and fixes vec(identity).

    Parameters
    ----------
    max_dim : int
        Memory guard on N; pass a larger value to override.
    """
    if ch.dim > max_dim:
        raise ValueError(
            f"N={ch.dim} exceeds the superoperator cap {max_dim}; "
            "pass max_dim explicitly to override")
    n2 = ch.dim * ch.dim
    M = np.zeros((n2, n2), dtype=complex)
    for U in ch.kraus:
        M += np.kron(U.conj(), U)
    return M / ch.degree


def expander_lambda(ch: KrausChannel, max_dim: int = 9) -> float:
    """Largest singular value of the channel off the identity direction.

    Computed from the dense superoperator, which is hermitian here, so the
    singular values are absolute eigenvalues.
    """
    M = superoperator(ch, max_dim=max_dim)
    if not np.allclose(M, M.conj().T, atol=1e-10):
        raise ValueError("superoperator is not hermitian; expander_lambda "
                         "expects an inverse-closed unitary mixture")
    n2 = M.shape[0]
    ident = np.eye(ch.dim, dtype=complex)
    u = vectorize(ident) / np.sqrt(ch.dim)
    deflated = M - np.outer(u, u.conj())
    return float(np.max(np.abs(np.linalg.eigvalsh(deflated))))


@dataclass(frozen=True)
class IntertwiningReport:
    """Outcome of the Wigner-table equivalence checks.

    ``max_table_deviation``: worst entrywise gap between wigner(channel(rho))
    and walk_step(wigner(rho)) over the random trials.
    ``max_eigen_residual``: worst Frobenius residual of lifting a classical
    walk eigenvector to an eigenoperator of the channel.
    """

    modulus: int
    trials: int
    max_table_deviation: float
    max_eigen_residual: float
    table_tolerance: float
    eigen_tolerance: float

    @property
    def passed(self) -> bool:
        return (self.max_table_deviation < self.table_tolerance
                and self.max_eigen_residual < self.eigen_tolerance)

    def as_dict(self) -> dict:
        return {
            "modulus": self.modulus,
            "trials": self.trials,
            "max_table_deviation": self.max_table_deviation,
            "max_eigen_residual": self.max_eigen_residual,
            "table_tolerance": self.table_tolerance,
            "eigen_tolerance": self.eigen_tolerance,
            "passed": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict())


def random_hermitian(N: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))
    return (g + g.conj().T) / 2.0


def verify_wigner_intertwining(ctx: PhaseSpaceContext, trials: int = 20,
                               seed: int = 0, table_tolerance: float = 1e-10,
                               eigen_tolerance: float = 1e-8) -> IntertwiningReport:
    """Check that the channel acts on Wigner tables as the walk acts on grids.

    Two checks: (a) wigner(channel(rho)) equals walk_step(wigner(rho))
    entrywise on ``trials`` random hermitian rho; (b) each classical walk
    eigenvector, pushed through inverse_wigner, is an eigenoperator of the
    channel with the same eigenvalue (residual bounded by the eigensolver's
    own accuracy, hence the looser default tolerance).
    """
    N = ctx.N
    ch = margulis_channel(ctx)
    rng = np.random.default_rng(seed)
    max_dev = 0.0
    for _ in range(trials):
        rho = random_hermitian(N, rng)
        left = wigner(ctx, apply_channel(ch, rho)).values
        right = walk_step(wigner(ctx, rho)).values
        max_dev = max(max_dev, float(np.max(np.abs(left - right))))

    M = walk_matrix(N)
    eigvals, eigvecs = np.linalg.eigh(M)
    max_res = 0.0
    for lam, vec in zip(eigvals, eigvecs.T):
        op = inverse_wigner(ctx, GridDist.from_flat(N, vec))
        res = np.linalg.norm(apply_channel(ch, op) - lam * op, ord="fro")
        max_res = max(max_res, float(res))

    return IntertwiningReport(
        modulus=N, trials=trials,
        max_table_deviation=max_dev, max_eigen_residual=max_res,
        table_tolerance=table_tolerance, eigen_tolerance=eigen_tolerance)
