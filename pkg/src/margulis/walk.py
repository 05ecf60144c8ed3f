"""Classical Margulis expander walk on the N x N integer lattice.

The walk is driven by eight affine maps on Z_N^2: four generators (two
unit-determinant linear parts, each with and without a unit translation)
together with their inverses.  One step replaces a distribution f by the
average of its pullbacks f o T^{-1} over the eight maps, which for this
inverse-closed set equals the pushforward average.  The module exposes the
maps, the step, the dense stochastic matrix of the step, and its spectrum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "AffineMap",
    "GridDist",
    "SpectralReport",
    "GENERATOR_LABELS",
    "GABBER_GALIL_BOUND",
    "generator_data",
    "margulis_generators",
    "generator_map",
    "apply_affine",
    "walk_step",
    "walk_matrix",
    "spectral_report",
    "grid_to_csv",
    "grid_from_csv",
    "grid_to_pgm",
]

#: Upper bound sqrt(2)*5/8 on the subdominant eigenvalue, independent of N.
GABBER_GALIL_BOUND = math.sqrt(2.0) * 5.0 / 8.0

# Linear parts and shifts of the four generators over Z^2 (unreduced).
# The inverses are derived; together the eight maps form the walk's edge set.
_S1 = ((1, 2), (0, 1))
_S2 = ((1, 0), (2, 1))
_GENERATOR_DATA = (
    ("T1", _S1, (0, 0)),
    ("T2", _S1, (1, 0)),
    ("T3", _S2, (0, 0)),
    ("T4", _S2, (0, -1)),
)

#: Labels for the eight maps returned by :func:`margulis_generators`, in order.
GENERATOR_LABELS = ("T1", "T2", "T3", "T4", "T1inv", "T2inv", "T3inv", "T4inv")


def generator_data() -> tuple[tuple[str, tuple, tuple], ...]:
    """All eight maps as exact integer (label, linear, shift) triples over Z^2.

    Inverses are computed by the integer adjugate (the linear parts have
    determinant 1 over Z).  The same data, reduced mod N, drives the lattice
    walk; over the reals it drives the moment maps.
    """
    out = list(_GENERATOR_DATA)
    for name, ((a, b), (c, d)), (s, t) in _GENERATOR_DATA:
        inv = ((d, -b), (-c, a))
        ishift = (-(inv[0][0] * s + inv[0][1] * t), -(inv[1][0] * s + inv[1][1] * t))
        out.append((name + "inv", inv, ishift))
    return tuple(out)


def _require_odd_modulus(N: int) -> None:
    if not isinstance(N, (int, np.integer)):
        raise ValueError(f"modulus must be an integer, got {N!r}")
    if N < 3 or N % 2 == 0:
        raise ValueError(f"modulus must be an odd integer >= 3, got {N}")


@dataclass(frozen=True)
class AffineMap:
    """Invertible affine map v -> linear @ v + shift on Z_N^2.

    Entries are stored reduced mod ``modulus``; the linear part must have
    determinant 1 mod N, which makes the map a bijection on the lattice.
    """

    linear: tuple[tuple[int, int], tuple[int, int]]
    shift: tuple[int, int]
    modulus: int

    def __post_init__(self):
        _require_odd_modulus(self.modulus)
        N = self.modulus
        (a, b), (c, d) = self.linear
        lin = ((a % N, b % N), (c % N, d % N))
        sh = (self.shift[0] % N, self.shift[1] % N)
        if (a * d - b * c) % N != 1:
            raise ValueError(f"linear part {self.linear} has det != 1 mod {N}")
        object.__setattr__(self, "linear", lin)
        object.__setattr__(self, "shift", sh)

    def __call__(self, v: tuple[int, int]) -> tuple[int, int]:
        return apply_affine(self, v)

    def inverse(self) -> "AffineMap":
        """The inverse map v -> linear^{-1} (v - shift)."""
        N = self.modulus
        (a, b), (c, d) = self.linear
        # det == 1 mod N, so the adjugate is the inverse.
        inv = ((d % N, -b % N), (-c % N, a % N))
        t = self.shift
        ishift = (-(inv[0][0] * t[0] + inv[0][1] * t[1]) % N,
                  -(inv[1][0] * t[0] + inv[1][1] * t[1]) % N)
        return AffineMap(inv, ishift, N)

    @staticmethod
    def identity(N: int) -> "AffineMap":
        return AffineMap(((1, 0), (0, 1)), (0, 0), N)


def margulis_generators(N: int) -> list[AffineMap]:
    """The eight walk maps [T1..T4, T1^-1..T4^-1] reduced mod N.

    Parameters
    ----------
    N : odd int >= 3
        Lattice modulus.
    """
    _require_odd_modulus(N)
    return [AffineMap(lin, sh, N) for _, lin, sh in generator_data()]


def generator_map(N: int) -> dict[str, AffineMap]:
    """Label -> map dictionary over :data:`GENERATOR_LABELS`."""
    return dict(zip(GENERATOR_LABELS, margulis_generators(N)))


def apply_affine(T: AffineMap, v: tuple[int, int],
                 modulus: int | None = None) -> tuple[int, int]:
    """Image of lattice point v under T, all arithmetic mod T.modulus.

    ``modulus``, when given, states which lattice v lives on and must match
    the map's modulus.
    """
    N = T.modulus
    if modulus is not None and modulus != N:
        raise ValueError(f"point modulus {modulus} != map modulus {N}")
    p, q = int(v[0]) % N, int(v[1]) % N
    (a, b), (c, d) = T.linear
    s, t = T.shift
    return ((a * p + b * q + s) % N, (c * p + d * q + t) % N)


@dataclass(frozen=True, eq=False)
class GridDist:
    """Real-valued function on Z_N^2, stored as values[p, q]."""

    modulus: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        _require_odd_modulus(self.modulus)
        vals = np.array(self.values, dtype=float)
        if vals.shape != (self.modulus, self.modulus):
            raise ValueError(
                f"values must have shape ({self.modulus}, {self.modulus}), got {vals.shape}")
        if not np.all(np.isfinite(vals)):
            raise ValueError("values must be finite")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @staticmethod
    def delta(N: int, p: int = 0, q: int = 0) -> "GridDist":
        vals = np.zeros((N, N))
        vals[p % N, q % N] = 1.0
        return GridDist(N, vals)

    @staticmethod
    def uniform(N: int) -> "GridDist":
        return GridDist(N, np.full((N, N), 1.0 / N**2))

    def is_probability(self, tol: float = 1e-12) -> bool:
        return bool(np.all(self.values >= -tol) and abs(self.values.sum() - 1.0) <= tol)

    def flatten(self) -> np.ndarray:
        """Vector with index p*N + q, the basis order used by walk_matrix."""
        return self.values.reshape(-1).copy()

    @staticmethod
    def from_flat(N: int, vec: np.ndarray) -> "GridDist":
        return GridDist(N, np.asarray(vec, dtype=float).reshape(N, N))


def walk_step(f: GridDist) -> GridDist:
    """One expander step: average of f o T^{-1} over the eight maps.

    Preserves total mass and nonnegativity; the uniform distribution is its
    fixed point.
    """
    N = f.modulus
    pp, qq = np.meshgrid(np.arange(N), np.arange(N), indexing="ij")
    out = np.zeros((N, N))
    for T in margulis_generators(N):
        Ti = T.inverse()
        (a, b), (c, d) = Ti.linear
        s, t = Ti.shift
        out += f.values[(a * pp + b * qq + s) % N, (c * pp + d * qq + t) % N]
    return GridDist(N, out / 8.0)


def walk_matrix(N: int, max_modulus: int = 49) -> np.ndarray:
    """Dense N^2 x N^2 matrix of walk_step in the point-mass basis.

    Basis index of the point (p, q) is p*N + q.  The matrix is symmetric and
    doubly stochastic: entry (u, v) is (1/8) * #{T : T(v) = u}.

    Parameters
    ----------
    max_modulus : int
        Memory guard; raise for N beyond this cap (pass a larger value to
        override).
    """
    _require_odd_modulus(N)
    if N > max_modulus:
        raise ValueError(
            f"N={N} exceeds the walk_matrix cap {max_modulus}; "
            "pass max_modulus explicitly to override")
    n = N * N
    M = np.zeros((n, n))
    gens = margulis_generators(N)
    for p in range(N):
        for q in range(N):
            v = p * N + q
            for T in gens:
                up, uq = apply_affine(T, (p, q))
                M[up * N + uq, v] += 0.125
    return M


@dataclass(frozen=True)
class SpectralReport:
    """Spectrum summary of a walk (or channel) matrix.

    ``lam`` is the largest absolute eigenvalue on the orthogonal complement
    of the uniform vector; ``spectrum`` is the full spectrum sorted by
    descending absolute value.
    """

    modulus: int
    degree: int
    lam: float
    spectrum: tuple[float, ...]

    def gap(self) -> float:
        return 1.0 - self.lam


def spectral_report(M: np.ndarray, *, modulus: int = 0, degree: int = 8,
                    tol: float = 1e-10) -> SpectralReport:
    """Eigenvalues of a symmetric stochastic matrix and its mixing rate.

    Parameters
    ----------
    M : real symmetric matrix, row-stochastic within ``tol``.

    Raises
    ------
    ValueError
        If M is not symmetric row-stochastic, or its top eigenvalue is not 1.
    RuntimeError
        If the eigendecomposition residual exceeds tolerance.
    """
    M = np.asarray(M, dtype=float)
    n = M.shape[0]
    if M.shape != (n, n) or not np.allclose(M, M.T, atol=tol):
        raise ValueError("matrix must be square and symmetric")
    if not np.allclose(M.sum(axis=1), 1.0, atol=tol):
        raise ValueError("matrix must be row-stochastic")
    eigvals, eigvecs = np.linalg.eigh(M)
    residual = np.linalg.norm(M @ eigvecs - eigvecs * eigvals, ord="fro")
    if residual > 1e-8 * max(1.0, np.linalg.norm(M, ord="fro")):
        raise RuntimeError(f"eigendecomposition residual too large: {residual:.3e}")
    spectrum = tuple(sorted((float(x) for x in eigvals), key=abs, reverse=True))
    if abs(spectrum[0] - 1.0) > tol:
        raise ValueError(f"largest eigenvalue {spectrum[0]!r} is not 1 within {tol}")
    # Deflate the uniform direction; degenerate eigenvalue 1 elsewhere survives.
    deflated = M - np.full((n, n), 1.0 / n)
    lam = float(np.max(np.abs(np.linalg.eigvalsh(deflated))))
    return SpectralReport(modulus=modulus, degree=degree, lam=lam, spectrum=spectrum)


# ---------------------------------------------------------------------------
# Serialization: CSV (p,q,value) and ASCII PGM heatmaps.

def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def grid_to_csv(f: GridDist) -> str:
    """CSV dump with header p,q,value; q is the slow (outer) index."""
    lines = ["p,q,value"]
    for q in range(f.modulus):
        for p in range(f.modulus):
            lines.append(f"{p},{q},{_fmt(f.values[p, q])}")
    return "\n".join(lines) + "\n"


def grid_from_csv(text: str) -> GridDist:
    rows = [ln for ln in text.strip().splitlines() if ln]
    if rows[0].strip() != "p,q,value":
        raise ValueError(f"expected header 'p,q,value', got {rows[0]!r}")
    triples = [ln.split(",") for ln in rows[1:]]
    N = int(math.isqrt(len(triples)))
    if N * N != len(triples):
        raise ValueError(f"expected a square table, got {len(triples)} rows")
    vals = np.zeros((N, N))
    for p, q, v in triples:
        vals[int(p), int(q)] = float(v)
    return GridDist(N, vals)


def grid_to_pgm(f: GridDist, lo: float | None = None, hi: float | None = None) -> str:
    """ASCII (P2) grayscale heatmap; min maps to 0 and max to 255.

    ``lo``/``hi`` override the per-frame range for cross-frame comparability.
    Row r of the image is lattice coordinate p=r, column is q.
    """
    vals = f.values
    lo = float(vals.min()) if lo is None else float(lo)
    hi = float(vals.max()) if hi is None else float(hi)
    if hi > lo:
        pix = np.rint((vals - lo) / (hi - lo) * 255.0).astype(int)
        pix = np.clip(pix, 0, 255)
    else:
        pix = np.zeros_like(vals, dtype=int)
    lines = ["P2", f"{f.modulus} {f.modulus}", "255"]
    lines += [" ".join(str(v) for v in row) for row in pix]
    return "\n".join(lines) + "\n"
