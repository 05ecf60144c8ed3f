"""Discrete Weyl-Heisenberg and phase-point operators for odd dimension N.

Provides the shift/boost pair, symmetrized Weyl operators, the parity
operator and its translates (the phase-point basis), the Wigner transform
and its inverse, the discrete Fourier transform, quadratic-phase unitaries,
and unitaries implementing affine maps of the N x N phase-space lattice.

Conventions, all pinned by tests:

* ``fourier(ctx)`` is the plain DFT with entries omega^{jk}/sqrt(N); it
  conjugates Weyl labels by J = [[0, 1], [-1, 0]] and satisfies
  F z(p) F^dag = x(-p).
* ``quadratic_phase(ctx, +1)`` is diag(exp(+2*pi*i*j^2/N)); it conjugates
  phase-point labels by S1 = [[1, 2], [0, 1]], its adjoint by S1^{-1}.
* Conjugating these representatives moves Weyl operators without any stray
  phase: mu(S) w(a) mu(S)^dag = w(S a) exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .walk import AffineMap, GridDist, _require_odd_modulus

__all__ = [
    "PhaseSpaceContext",
    "shift_boost",
    "shift_op",
    "boost_op",
    "weyl",
    "parity",
    "phase_point",
    "phase_point_basis",
    "wigner",
    "inverse_wigner",
    "fourier",
    "quadratic_phase",
    "metaplectic",
    "word_matrix",
    "affine_unitary",
    "METAPLECTIC_GENERATORS",
    "operator_to_json",
    "operator_from_json",
]


@dataclass(frozen=True)
class PhaseSpaceContext:
    """Odd lattice dimension N with its root of unity and half inverse."""

    N: int

    def __post_init__(self):
        _require_odd_modulus(self.N)

    @property
    def omega(self) -> complex:
        return np.exp(2j * np.pi / self.N)

    @property
    def inv2(self) -> int:
        """Multiplicative inverse of 2 mod N, i.e. (N+1)/2."""
        return (self.N + 1) // 2


def _phases(ctx: PhaseSpaceContext, exponents: np.ndarray) -> np.ndarray:
    """exp(2*pi*i*e/N) for integer exponents, reduced mod N for accuracy."""
    return np.exp(2j * np.pi * (np.asarray(exponents) % ctx.N) / ctx.N)


def shift_op(ctx: PhaseSpaceContext, q: int) -> np.ndarray:
    """x(q): |k> -> |k+q mod N>."""
    N = ctx.N
    m = np.zeros((N, N), dtype=complex)
    m[(np.arange(N) + q) % N, np.arange(N)] = 1.0
    return m


def boost_op(ctx: PhaseSpaceContext, p: int) -> np.ndarray:
    """z(p): |k> -> omega^{pk} |k>."""
    return np.diag(_phases(ctx, p * np.arange(ctx.N)))


def shift_boost(ctx: PhaseSpaceContext, p: int, q: int) -> tuple[np.ndarray, np.ndarray]:
    """The pair (x(q), z(p))."""
    return shift_op(ctx, q), boost_op(ctx, p)


def weyl(ctx: PhaseSpaceContext, p: int, q: int) -> np.ndarray:
    """Symmetrized displacement w(p,q) = omega^{-inv2*p*q} z(p) x(q).

    Unitary; w(0,0) is the identity, and w(a) w(b) picks up the symplectic
    phase omega^{inv2*(p q' - p' q)} relative to w(a+b).
    """
    phase = _phases(ctx, np.array(-ctx.inv2 * p * q))
    return phase * (boost_op(ctx, p) @ shift_op(ctx, q))


def parity(ctx: PhaseSpaceContext) -> np.ndarray:
    """A(0,0): |k> -> |-k mod N>; hermitian involution with unit trace."""
    N = ctx.N
    m = np.zeros((N, N), dtype=complex)
    m[(-np.arange(N)) % N, np.arange(N)] = 1.0
    return m


def phase_point(ctx: PhaseSpaceContext, p: int, q: int) -> np.ndarray:
    """Translated parity A(p,q) = w(p,q) A(0,0) w(p,q)^dag."""
    w = weyl(ctx, p, q)
    return w @ parity(ctx) @ w.conj().T


@lru_cache(maxsize=16)
def _phase_point_stack(N: int) -> np.ndarray:
    ctx = PhaseSpaceContext(N)
    stack = np.empty((N * N, N, N), dtype=complex)
    for p in range(N):
        for q in range(N):
            stack[p * N + q] = phase_point(ctx, p, q)
    stack.setflags(write=False)
    return stack


def phase_point_basis(ctx: PhaseSpaceContext) -> np.ndarray:
    """All N^2 phase-point operators stacked as [p*N+q, :, :] (read-only)."""
    return _phase_point_stack(ctx.N)


def wigner(ctx: PhaseSpaceContext, rho: np.ndarray) -> GridDist:
    """Wigner table W[p,q] = tr(A(p,q) rho) / N of a hermitian operator.

    The table is real and sums to tr(rho).  Non-hermitian input is rejected
    rather than silently projected.
    """
    rho = np.asarray(rho, dtype=complex)
    N = ctx.N
    if rho.shape != (N, N):
        raise ValueError(f"expected a {N}x{N} operator, got shape {rho.shape}")
    if not np.allclose(rho, rho.conj().T, atol=1e-10):
        raise ValueError("wigner requires a hermitian operator")
    table = np.einsum("vij,ji->v", phase_point_basis(ctx), rho) / N
    return GridDist(N, table.real.reshape(N, N))


def inverse_wigner(ctx: PhaseSpaceContext, table: GridDist) -> np.ndarray:
    """Operator with the given Wigner table: sum_a table(a) A(a)."""
    if table.modulus != ctx.N:
        raise ValueError(f"table modulus {table.modulus} != context N {ctx.N}")
    return np.einsum("v,vij->ij", table.values.reshape(-1), phase_point_basis(ctx))


def fourier(ctx: PhaseSpaceContext) -> np.ndarray:
    """Discrete Fourier transform, F[k,j] = omega^{jk}/sqrt(N)."""
    j = np.arange(ctx.N)
    return _phases(ctx, np.outer(j, j)) / np.sqrt(ctx.N)


def quadratic_phase(ctx: PhaseSpaceContext, sign: int) -> np.ndarray:
    """Diagonal unitary diag(exp(sign * 2*pi*i * j^2 / N)), sign = +-1.

    The two signs are mutual adjoints.  sign=+1 conjugates phase-point
    labels by [[1, 2], [0, 1]], sign=-1 by its inverse.
    """
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign!r}")
    j = np.arange(ctx.N)
    return np.diag(_phases(ctx, sign * j * j))


def _sl2(ctx: PhaseSpaceContext, rows) -> tuple[tuple[int, int], tuple[int, int]]:
    N = ctx.N
    (a, b), (c, d) = rows
    return ((a % N, b % N), (c % N, d % N))


#: Word symbols accepted by :func:`metaplectic`.
METAPLECTIC_GENERATORS = ("S1", "S1inv", "S2", "S2inv", "J")


def _generator_tables(ctx: PhaseSpaceContext):
    F = fourier(ctx)
    Up = quadratic_phase(ctx, +1)
    Um = quadratic_phase(ctx, -1)
    unitaries = {
        "S1": Up,
        "S1inv": Um,
        "S2": F @ Um @ F.conj().T,
        "S2inv": F @ Up @ F.conj().T,
        "J": F,
    }
    matrices = {
        "S1": _sl2(ctx, ((1, 2), (0, 1))),
        "S1inv": _sl2(ctx, ((1, -2), (0, 1))),
        "S2": _sl2(ctx, ((1, 0), (2, 1))),
        "S2inv": _sl2(ctx, ((1, 0), (-2, 1))),
        "J": _sl2(ctx, ((0, 1), (-1, 0))),
    }
    return unitaries, matrices


def metaplectic(ctx: PhaseSpaceContext, word) -> np.ndarray:
    """Product of generator unitaries for a word over METAPLECTIC_GENERATORS.

    The representation is projective: the result implements the word's
    matrix product on phase-point labels, up to a global phase.
    """
    word = list(word)
    if not word:
        raise ValueError("word must be nonempty")
    unitaries, _ = _generator_tables(ctx)
    try:
        mats = [unitaries[s] for s in word]
    except KeyError as err:
        raise ValueError(
            f"unknown generator symbol {err.args[0]!r}; "
            f"expected one of {METAPLECTIC_GENERATORS}") from None
    out = mats[0]
    for m in mats[1:]:
        out = out @ m
    return out


def word_matrix(ctx: PhaseSpaceContext, word) -> tuple[tuple[int, int], tuple[int, int]]:
    """SL(2, Z_N) matrix product of a generator word (left-to-right)."""
    _, matrices = _generator_tables(ctx)
    N = ctx.N
    acc = ((1, 0), (0, 1))
    for s in word:
        if s not in matrices:
            raise ValueError(f"unknown generator symbol {s!r}")
        (a, b), (c, d) = acc
        (e, f_), (g, h) = matrices[s]
        acc = (((a * e + b * g) % N, (a * f_ + b * h) % N),
               ((c * e + d * g) % N, (c * f_ + d * h) % N))
    return acc


def affine_unitary(ctx: PhaseSpaceContext, T: AffineMap) -> np.ndarray:
    """Unitary U_T = w(shift) mu(linear) with U_T A(v) U_T^dag = A(T(v)).

    Supports linear parts that are a single metaplectic generator (or the
    identity); all eight walk maps qualify.
    """
    if T.modulus != ctx.N:
        raise ValueError(f"map modulus {T.modulus} != context N {ctx.N}")
    unitaries, matrices = _generator_tables(ctx)
    ident = _sl2(ctx, ((1, 0), (0, 1)))
    if T.linear == ident:
        mu = np.eye(ctx.N, dtype=complex)
    else:
        by_matrix = {m: s for s, m in matrices.items()}
        symbol = by_matrix.get(T.linear)
        if symbol is None:
            raise ValueError(f"unsupported linear part {T.linear} mod {ctx.N}")
        mu = unitaries[symbol]
    p, q = T.shift
    return weyl(ctx, p, q) @ mu


# ---------------------------------------------------------------------------
# Operator dump format used by the CLI for golden files.

def operator_to_json(op: np.ndarray) -> str:
    """JSON dump {dim, re, im} with row-major N x N real/imaginary parts."""
    op = np.asarray(op, dtype=complex)
    n = op.shape[0]
    if op.shape != (n, n):
        raise ValueError(f"expected a square operator, got shape {op.shape}")
    return json.dumps({"dim": n, "re": op.real.tolist(), "im": op.imag.tolist()})


def operator_from_json(text: str) -> np.ndarray:
    obj = json.loads(text)
    re = np.array(obj["re"], dtype=float)
    im = np.array(obj["im"], dtype=float)
    if re.shape != (obj["dim"], obj["dim"]) or im.shape != re.shape:
        raise ValueError("malformed operator dump")
    return re + 1j * im
