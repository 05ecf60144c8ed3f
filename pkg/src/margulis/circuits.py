"""Qudit gate-list synthesis for the walk unitaries on N = d^n levels.

Registers carry n qudits of odd dimension d with the most significant digit
first: basis label j = sum_l j_l d^{n-l} for qudits l = 1..n.  Circuits are
built from single-qudit Fourier gates, diagonal phase gates with exact
integer parameters, two-qudit controlled phases, and an explicit
digit-reversal permutation.  Every synthesis routine is checked against the
dense operators from :mod:`margulis.phasespace` up to a global phase.

Synthesized families:

* ``qft_circuit``: the N-level Fourier transform from n single-qudit
  Fourier gates, n(n-1)/2 controlled phases, and one reversal.
* ``quadratic_circuit``: diag(exp(sign*2*pi*i*j^2/N)) as its digit
  expansion; pairs (l, l') with l + l' <= n carry integer phase exponents
  and are dropped.
* ``weyl_circuit``: z(p) is a product of n local phases; x(q) is
  synthesized as F^dag z(q) F; the displacement's scalar prefactor is kept
  as an exact global-phase annotation.
* ``affine_circuit``: generator word followed by the displacement.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .walk import AffineMap

__all__ = [
    "Gate",
    "GateList",
    "GATE_KINDS",
    "digits",
    "undigits",
    "gate_matrix",
    "evaluate",
    "inverse_gates",
    "qft_circuit",
    "quadratic_circuit",
    "weyl_circuit",
    "affine_circuit",
    "equal_up_to_phase",
    "gate_list_to_jsonl",
    "gate_list_from_jsonl",
]

GATE_KINDS = ("fourier", "fourier_inv", "linear_phase", "quadratic_phase",
              "cphase", "reverse")

_DIAGONAL_KINDS = ("linear_phase", "quadratic_phase", "cphase")


@dataclass(frozen=True)
class Gate:
    """One qudit gate with exact integer phase parameters.

    Diagonal kinds put phase exp(2*pi*i * c * e / M) on each basis state,
    where e is j (linear_phase), j^2 (quadratic_phase) or j_l * j_l'
    (cphase).  ``reverse`` permutes the whole register and takes no targets.
    """

    kind: str
    d: int
    targets: tuple[int, ...] = ()
    c: int = 0
    M: int = 1

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if self.M < 1:
            raise ValueError(f"M must be positive, got {self.M}")
        ntargets = {"fourier": 1, "fourier_inv": 1, "linear_phase": 1,
                    "quadratic_phase": 1, "cphase": 2, "reverse": 0}[self.kind]
        if len(self.targets) != ntargets:
            raise ValueError(f"{self.kind} takes {ntargets} target(s), got {self.targets}")
        if self.kind == "cphase" and self.targets[0] == self.targets[1]:
            raise ValueError("cphase targets must be distinct")


@dataclass(frozen=True)
class GateList:
    """Ordered gate sequence on n qudits; gates[0] acts first.

    The optional global phase exp(2*pi*i * phase_num / phase_den) is kept as
    an annotation so every listed gate stays a plain textbook gate.
    """

    d: int
    n: int
    gates: tuple[Gate, ...]
    phase_num: int = 0
    phase_den: int = 1

    def __post_init__(self):
        if self.d < 2 or self.n < 1:
            raise ValueError(f"need d >= 2 and n >= 1, got d={self.d}, n={self.n}")
        if self.phase_den < 1:
            raise ValueError("phase_den must be positive")
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if g.d != self.d:
                raise ValueError(f"gate dimension {g.d} != register dimension {self.d}")
            if any(not 1 <= t <= self.n for t in g.targets):
                raise ValueError(f"gate targets {g.targets} outside 1..{self.n}")

    @property
    def dim(self) -> int:
        return self.d ** self.n

    def global_phase(self) -> complex:
        return np.exp(2j * np.pi * self.phase_num / self.phase_den)


def digits(j: int, d: int, n: int) -> tuple[int, ...]:
    """Digit expansion (j_1, ..., j_n) with j = sum j_l d^{n-l}."""
    return tuple((j // d ** (n - l)) % d for l in range(1, n + 1))


def undigits(js, d: int) -> int:
    out = 0
    for jl in js:
        out = out * d + int(jl)
    return out


def _digit_arrays(d: int, n: int) -> np.ndarray:
    """Array D[l-1, j] = j_l for all basis labels j."""
    j = np.arange(d ** n)
    return np.stack([(j // d ** (n - l)) % d for l in range(1, n + 1)])


def gate_matrix(gate: Gate, n: int) -> np.ndarray:
    """Dense matrix of one gate on the full d^n-dimensional register."""
    d = gate.d
    dim = d ** n
    if gate.kind in _DIAGONAL_KINDS:
        dig = _digit_arrays(d, n)
        if gate.kind == "linear_phase":
            e = dig[gate.targets[0] - 1]
        elif gate.kind == "quadratic_phase":
            e = dig[gate.targets[0] - 1] ** 2
        else:
            e = dig[gate.targets[0] - 1] * dig[gate.targets[1] - 1]
        return np.diag(np.exp(2j * np.pi * gate.c * (e % gate.M) / gate.M))
    if gate.kind in ("fourier", "fourier_inv"):
        jk = np.outer(np.arange(d), np.arange(d))
        f = np.exp(2j * np.pi * jk / d) / np.sqrt(d)
        if gate.kind == "fourier_inv":
            f = f.conj().T
        t = gate.targets[0]
        return np.kron(np.kron(np.eye(d ** (t - 1)), f), np.eye(d ** (n - t)))
    # reverse: |j_1 ... j_n> -> |j_n ... j_1>
    perm = np.array([undigits(digits(j, d, n)[::-1], d) for j in range(dim)])
    m = np.zeros((dim, dim), dtype=complex)
    m[perm, np.arange(dim)] = 1.0
    return m


def evaluate(gl: GateList) -> np.ndarray:
    """Dense unitary of the list (first gate rightmost), phase included."""
    acc = np.eye(gl.dim, dtype=complex)
    for g in gl.gates:
        acc = gate_matrix(g, gl.n) @ acc
    return gl.global_phase() * acc


def inverse_gates(gates) -> tuple[Gate, ...]:
    """Gate-by-gate inverse of a sequence, in reversed order."""
    flip = {"fourier": "fourier_inv", "fourier_inv": "fourier"}
    out = []
    for g in reversed(tuple(gates)):
        if g.kind in flip:
            out.append(Gate(flip[g.kind], g.d, g.targets))
        elif g.kind == "reverse":
            out.append(g)
        else:
            out.append(Gate(g.kind, g.d, g.targets, -g.c, g.M))
    return tuple(out)


def _require_odd_d(d: int) -> None:
    if d < 3 or d % 2 == 0:
        raise ValueError(f"qudit dimension must be odd and >= 3, got {d}")


def _qft_gates(d: int, n: int) -> tuple[Gate, ...]:
    gates = []
    for l in range(1, n + 1):
        gates.append(Gate("fourier", d, (l,)))
        for lp in range(l + 1, n + 1):
            gates.append(Gate("cphase", d, (lp, l), 1, d ** (lp - l + 1)))
    if n > 1:
        gates.append(Gate("reverse", d))
    return tuple(gates)


def qft_circuit(d: int, n: int) -> GateList:
    """N-level Fourier transform on n qudits.

    Emits n single-qudit Fourier gates, one controlled phase per qudit pair
    (n(n-1)/2 of them), and a final digit reversal when n > 1; the total
    count is therefore bounded by n^2 + 1.
    """
    _require_odd_d(d)
    return GateList(d, n, _qft_gates(d, n))


def quadratic_circuit(d: int, n: int, sign: int, keep_trivial: bool = False) -> GateList:
    """Circuit for diag(exp(sign*2*pi*i*j^2/d^n)), sign = +-1.

    The digit expansion of j^2 gives one phase term per qudit pair (l, l'),
    with exponent d^{n-l-l'}; terms with l + l' <= n are integer phases and
    are dropped unless ``keep_trivial``.  Off-diagonal pairs are emitted once
    with coefficient 2*sign; diagonal terms become single-qudit quadratic
    phases with coefficient sign.
    """
    _require_odd_d(d)
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign!r}")
    gates = []
    for l in range(1, n + 1):
        for lp in range(l, n + 1):
            coeff = sign if lp == l else 2 * sign
            if l + lp > n:
                M = d ** (l + lp - n)
            elif keep_trivial:
                coeff, M = coeff * d ** (n - l - lp), 1
            else:
                continue
            if lp == l:
                gates.append(Gate("quadratic_phase", d, (l,), coeff, M))
            else:
                gates.append(Gate("cphase", d, (l, lp), coeff, M))
    return GateList(d, n, tuple(gates))


def _linear_phase_gates(d: int, n: int, p: int) -> tuple[Gate, ...]:
    """z(p) as local phases exp(2*pi*i * p * j_l / d^l); trivial gates dropped."""
    gates = []
    for l in range(1, n + 1):
        M = d ** l
        if p % M:
            gates.append(Gate("linear_phase", d, (l,), p % M, M))
    return tuple(gates)


def weyl_circuit(d: int, n: int, p: int, q: int) -> GateList:
    """Displacement w(p,q) = omega^{-inv2*p*q} z(p) x(q) as a gate list.

    x(q) is synthesized as F^dag z(q) F; the scalar prefactor is returned as
    the global-phase annotation.
    """
    _require_odd_d(d)
    N = d ** n
    p, q = p % N, q % N
    gates: list[Gate] = []
    if q:
        gates += list(_qft_gates(d, n))
        gates += list(_linear_phase_gates(d, n, q))
        gates += list(inverse_gates(_qft_gates(d, n)))
    gates += list(_linear_phase_gates(d, n, p))
    inv2 = (N + 1) // 2
    num = (-inv2 * p * q) % N
    if num:
        return GateList(d, n, tuple(gates), phase_num=num, phase_den=N)
    return GateList(d, n, tuple(gates))


# Generator words in circuit order (first gate acts first); the dense
# counterparts live in margulis.phasespace._generator_tables.
def _word_gates(d: int, n: int, symbol: str, keep_trivial: bool) -> tuple[Gate, ...]:
    qft = _qft_gates(d, n)
    if symbol == "S1":
        return quadratic_circuit(d, n, +1, keep_trivial).gates
    if symbol == "S1inv":
        return quadratic_circuit(d, n, -1, keep_trivial).gates
    if symbol == "S2":
        return inverse_gates(qft) + quadratic_circuit(d, n, -1, keep_trivial).gates + qft
    if symbol == "S2inv":
        return inverse_gates(qft) + quadratic_circuit(d, n, +1, keep_trivial).gates + qft
    raise ValueError(f"no circuit word for symbol {symbol!r}")


def affine_circuit(d: int, n: int, T: AffineMap, keep_trivial: bool = False) -> GateList:
    """Gate list for the unitary implementing the affine map T on N = d^n.

    Equals ``phasespace.affine_unitary`` up to a global phase; supported
    linear parts are the four walk generators and the identity.
    """
    _require_odd_d(d)
    N = d ** n
    if T.modulus != N:
        raise ValueError(f"map modulus {T.modulus} != d^n = {N}")
    lin = {((1, 2 % N), (0, 1)): "S1",
           ((1, (-2) % N), (0, 1)): "S1inv",
           ((1, 0), (2 % N, 1)): "S2",
           ((1, 0), ((-2) % N, 1)): "S2inv"}
    if T.linear == ((1, 0), (0, 1)):
        word: tuple[Gate, ...] = ()
    elif T.linear in lin:
        word = _word_gates(d, n, lin[T.linear], keep_trivial)
    else:
        raise ValueError(f"unsupported linear part {T.linear} mod {N}")
    disp = weyl_circuit(d, n, T.shift[0], T.shift[1])
    return GateList(d, n, word + disp.gates,
                    phase_num=disp.phase_num, phase_den=disp.phase_den)


def equal_up_to_phase(A: np.ndarray, B: np.ndarray,
                      tol: float = 1e-8) -> tuple[bool, complex]:
    """Whether B = phase * A for a unimodular phase, and that phase.

    Uses |tr(A^dag B)| = dim, which characterizes projective equality when B
    is unitary.
    """
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    if A.shape != B.shape or A.shape[0] != A.shape[1]:
        raise ValueError(f"operators must be square and same shape, got {A.shape}, {B.shape}")
    t = np.trace(A.conj().T @ B)
    ok = bool(abs(abs(t) - A.shape[0]) < tol)
    phase = t / abs(t) if abs(t) > 0 else complex(1.0)
    return ok, phase


# ---------------------------------------------------------------------------
# JSON-lines serialization: one header line, then one gate per line.

def _gate_obj(g: Gate) -> dict:
    obj: dict = {"op": g.kind}
    if len(g.targets) >= 1:
        obj["t1"] = g.targets[0]
    if len(g.targets) == 2:
        obj["t2"] = g.targets[1]
    if g.kind in _DIAGONAL_KINDS:
        obj["c"] = g.c
        obj["M"] = g.M
    obj["d"] = g.d
    return obj


def gate_list_to_jsonl(gl: GateList, transform: str = "") -> str:
    header = {"d": gl.d, "n": gl.n, "transform": transform,
              "global_phase_num": gl.phase_num, "global_phase_den": gl.phase_den}
    lines = [json.dumps(header)]
    lines += [json.dumps(_gate_obj(g)) for g in gl.gates]
    return "\n".join(lines) + "\n"


def gate_list_from_jsonl(text: str) -> tuple[GateList, str]:
    """Parse a dump back into (GateList, transform label)."""
    lines = [ln for ln in text.strip().splitlines() if ln]
    header = json.loads(lines[0])
    gates = []
    for ln in lines[1:]:
        obj = json.loads(ln)
        targets = tuple(obj[k] for k in ("t1", "t2") if k in obj)
        gates.append(Gate(obj["op"], obj["d"], targets,
                          obj.get("c", 0), obj.get("M", 1)))
    gl = GateList(header["d"], header["n"], tuple(gates),
                  phase_num=header["global_phase_num"],
                  phase_den=header["global_phase_den"])
    return gl, header.get("transform", "")
