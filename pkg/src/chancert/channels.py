"""Quantum channels in Kraus form.

Channels are immutable :class:`QuantumChannel` values holding a tuple of
``d x d`` Kraus operators.  Composition and powers compress the Kraus family
through the Choi matrix whenever it grows beyond ``d**2`` operators.

Choi convention: ``C_E = sum_ij E(|i><j|) (x) |i><j|`` (unnormalised, trace
``d``).  With row-major vectorisation this is ``sum_k vec(A_k) vec(A_k)^dagger``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from chancert.matcore import (
    TOL,
    as_matrix,
    complete_unitary,
    dagger,
    haar_unitary,
    is_unitary,
    max_entangled_state,
    partial_trace,
    projector,
)

# eigenvalues of the Choi matrix at or below this are dropped when compressing
KRAUS_EIG_CUTOFF = 1e-12


@dataclass(frozen=True, eq=False)
class QuantumChannel:
    """CPTP map on a ``dim``-dimensional system, stored as Kraus operators."""

    dim: int
    kraus: tuple

    def __post_init__(self):
        if len(self.kraus) == 0:
            raise ValueError("a channel needs at least one Kraus operator")
        for a in self.kraus:
            if a.shape != (self.dim, self.dim):
                raise ValueError(f"Kraus operator of shape {a.shape} on a dim-{self.dim} channel")
            a.setflags(write=False)

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.dim}, n_kraus={len(self.kraus)})"

    @property
    def n_kraus(self) -> int:
        return len(self.kraus)

    def __call__(self, rho):
        return apply(self, rho)


@dataclass(frozen=True, eq=False)
class UnitaryChannel(QuantumChannel):
    """``rho -> U rho U^dagger``; ``kraus`` is ``(U,)``."""

    @property
    def u(self) -> np.ndarray:
        return self.kraus[0]

    def inverse(self) -> "UnitaryChannel":
        return unitary_channel(dagger(self.u))


@dataclass(frozen=True, eq=False)
class SourceCode:
    """Unitary ``w`` on system (x) environment whose reduced action is a channel.

    The system is the first tensor factor; the environment starts in ``|0>``.
    """

    sys_dim: int
    env_dim: int
    w: np.ndarray

    def __post_init__(self):
        n = self.sys_dim * self.env_dim
        if self.w.shape != (n, n):
            raise ValueError(f"w has shape {self.w.shape}, expected {(n, n)}")
        if not is_unitary(self.w):
            raise ValueError("source code is not unitary")
        self.w.setflags(write=False)

    def channel(self) -> QuantumChannel:
        """The channel ``rho -> tr_B(W (rho (x) |0><0|) W^dagger)``."""
        d, db = self.sys_dim, self.env_dim
        blocks = self.w.reshape(d, db, d, db)[:, :, :, 0]
        ops = [blocks[:, b, :] for b in range(db)]
        ops = [a for a in ops if np.linalg.norm(a) > KRAUS_EIG_CUTOFF] or ops[:1]
        return from_kraus(ops)

    def run(self, rho) -> np.ndarray:
        rho = as_matrix(rho)
        env0 = np.zeros((self.env_dim, self.env_dim), dtype=np.complex128)
        env0[0, 0] = 1.0
        full = self.w @ np.kron(rho, env0) @ dagger(self.w)
        return partial_trace(full, [self.sys_dim, self.env_dim], keep=0)


def _check_tp(ops: Sequence[np.ndarray], dim: int) -> None:
    s = sum(dagger(a) @ a for a in ops)
    err = np.max(np.abs(s - np.eye(dim)))
    if err > TOL.derived:
        raise ValueError(f"Kraus family is not trace preserving (max |sum A^dag A - I| = {err:.3g})")


def from_kraus(ops) -> QuantumChannel:
    """Build a validated channel from a list of square Kraus operators."""
    ops = [as_matrix(a) for a in ops]
    if not ops:
        raise ValueError("empty Kraus family")
    d = ops[0].shape[0]
    for a in ops:
        if a.shape != (d, d):
            raise ValueError("Kraus operators must all be square with the same dimension")
    _check_tp(ops, d)
    return QuantumChannel(d, tuple(np.array(a) for a in ops))


def unitary_channel(u) -> UnitaryChannel:
    u = as_matrix(u)
    if not is_unitary(u):
        raise ValueError("matrix is not unitary")
    return UnitaryChannel(u.shape[0], (np.array(u),))


def identity_channel(d: int) -> UnitaryChannel:
    return UnitaryChannel(d, (np.eye(d, dtype=np.complex128),))


def _as_unitary(u) -> np.ndarray:
    if isinstance(u, UnitaryChannel):
        return u.u
    if isinstance(u, QuantumChannel):
        if u.n_kraus != 1:
            raise ValueError("expected a unitary channel")
        return u.kraus[0]
    return as_matrix(u)


def apply(e: QuantumChannel, rho) -> np.ndarray:
    """``sum_k A_k rho A_k^dagger``."""
    rho = as_matrix(rho)
    if rho.shape != (e.dim, e.dim):
        raise ValueError(f"state of shape {rho.shape} does not match channel dim {e.dim}")
    return sum(a @ rho @ dagger(a) for a in e.kraus)


def apply_extended(e: QuantumChannel, rho, anc_dim: int) -> np.ndarray:
    """``(E (x) id)(rho)`` for ``rho`` on system (x) ancilla."""
    rho = as_matrix(rho)
    n = e.dim * anc_dim
    if rho.shape != (n, n):
        raise ValueError(f"state of shape {rho.shape} does not match {e.dim}x{anc_dim}")
    eye = np.eye(anc_dim)
    out = np.zeros_like(rho)
    for a in e.kraus:
        big = np.kron(a, eye)
        out += big @ rho @ dagger(big)
    return out


def choi(e: QuantumChannel) -> np.ndarray:
    vecs = np.stack([a.reshape(-1) for a in e.kraus], axis=1)
    return vecs @ dagger(vecs)


def kraus_from_choi(c: np.ndarray, dim: int) -> list:
    """Minimal Kraus family reproducing a (PSD) Choi matrix."""
    c = 0.5 * (c + dagger(c))
    w, v = np.linalg.eigh(c)
    keep = w > KRAUS_EIG_CUTOFF
    if not np.any(keep):
        raise ValueError("Choi matrix has no positive eigenvalues")
    return [np.sqrt(lam) * v[:, i].reshape(dim, dim) for i, lam in zip(np.nonzero(keep)[0], w[keep])]


def compress(e: QuantumChannel) -> QuantumChannel:
    """Re-express ``e`` with at most ``d**2`` Kraus operators."""
    ops = kraus_from_choi(choi(e), e.dim)
    return QuantumChannel(e.dim, tuple(ops))


def compose(f: QuantumChannel, e: QuantumChannel) -> QuantumChannel:
    """``f o e``: apply ``e`` first, then ``f``."""
    if f.dim != e.dim:
        raise ValueError("cannot compose channels of different dimension")
    if isinstance(f, UnitaryChannel) and isinstance(e, UnitaryChannel):
        return UnitaryChannel(e.dim, (f.u @ e.u,))
    ops = tuple(b @ a for b in f.kraus for a in e.kraus)
    out = QuantumChannel(e.dim, ops)
    if len(ops) > e.dim**2:
        out = compress(out)
    return out


def power(e: QuantumChannel, n: int) -> QuantumChannel:
    """``n``-fold self-composition, by repeated squaring."""
    if n < 1:
        raise ValueError("power needs n >= 1")
    result = None
    base = e
    while True:
        if n & 1:
            result = base if result is None else compose(result, base)
        n >>= 1
        if not n:
            return result
        base = compose(base, base)


def entanglement_fidelity(e: QuantumChannel, u) -> float:
    """``(1/d^2) sum_k |tr(U^dagger A_k)|^2``, the overlap of the two Choi states."""
    u = _as_unitary(u)
    if u.shape[0] != e.dim:
        raise ValueError("dimension mismatch between channel and unitary")
    ud = dagger(u)
    s = sum(abs(np.trace(ud @ a)) ** 2 for a in e.kraus)
    return float(min(1.0, max(0.0, s / e.dim**2)))


def entanglement_fidelity_choi(e: QuantumChannel, u) -> float:
    """Same quantity as :func:`entanglement_fidelity` via ``tr(C_U C_E) / d^2``."""
    cu = choi(unitary_channel(_as_unitary(u)))
    return float(np.real(np.trace(cu @ choi(e)))) / e.dim**2


def entanglement_fidelity_projector(e: QuantumChannel, u) -> float:
    """Same quantity via ``<Phi| ((U^-1 o E) (x) id)(|Phi><Phi|) |Phi>``."""
    f = compose(unitary_channel(dagger(_as_unitary(u))), e)
    phi = max_entangled_state(e.dim)
    out = apply_extended(f, projector(phi), e.dim)
    return float(np.real(np.vdot(phi, out @ phi)))


def stinespring(e: QuantumChannel) -> np.ndarray:
    """Isometry ``V = sum_k A_k (x) |k>`` from ``C^d`` into system (x) ancilla."""
    k = e.n_kraus
    v = np.zeros((e.dim * k, e.dim), dtype=np.complex128)
    for i, a in enumerate(e.kraus):
        v[i::k, :] = a
    return v


def source_code(e: QuantumChannel, env_dim: int | None = None) -> SourceCode:
    """Complete the Stinespring isometry of ``e`` to a unitary source code.

    Input ``|i>|0>`` is mapped to ``V|i>``; all other columns come from
    Gram-Schmidt over the lexicographic standard basis.
    """
    k = e.n_kraus
    env_dim = k if env_dim is None else env_dim
    if env_dim < k:
        raise ValueError("environment too small for this Kraus family")
    v = np.zeros((e.dim * env_dim, e.dim), dtype=np.complex128)
    for i, a in enumerate(e.kraus):
        v[i::env_dim, :] = a
    positions = [i * env_dim for i in range(e.dim)]
    w = complete_unitary(v, positions, e.dim * env_dim)
    return SourceCode(e.dim, env_dim, w)


def grover_oracle(d: int, k: int) -> np.ndarray:
    """``I - 2|k><k|``."""
    if not 0 <= k < d:
        raise ValueError(f"marked index {k} out of range for d={d}")
    o = np.eye(d, dtype=np.complex128)
    o[k, k] = -1.0
    return o


def faulty_grover(d: int, k: int, p: float) -> QuantumChannel:
    """``rho -> p rho + (1-p) O_k rho O_k``."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must be a probability")
    o = grover_oracle(d, k)
    if p == 1.0:
        return identity_channel(d)
    if p == 0.0:
        return unitary_channel(o)
    return from_kraus([np.sqrt(p) * np.eye(d), np.sqrt(1.0 - p) * o])


def faulty_grover_source(d: int, k: int, p: float) -> SourceCode:
    """Source code of :func:`faulty_grover` with a one-qubit environment.

    ``W(|psi>|0>) = sqrt(p)|psi>|0> + sqrt(1-p) O_k|psi>|1>``.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must be a probability")
    o = grover_oracle(d, k)
    e = QuantumChannel(d, (np.sqrt(p) * np.eye(d, dtype=np.complex128), np.sqrt(1.0 - p) * o))
    return source_code(e, env_dim=2)


def random_channel(d: int, env_dim: int | None, rng: np.random.Generator) -> QuantumChannel:
    """Channel whose Stinespring isometry is the first ``d`` columns of a Haar unitary."""
    env_dim = d if env_dim is None else env_dim
    if env_dim < 1:
        raise ValueError("env_dim must be >= 1")
    if env_dim == 1:
        return unitary_channel(haar_unitary(d, rng))
    v = haar_unitary(d * env_dim, rng)[:, :d]
    return from_kraus([v[k::env_dim, :] for k in range(env_dim)])


def mixture(channels: Sequence[QuantumChannel], weights: Sequence[float]) -> QuantumChannel:
    """Convex combination ``sum_i w_i E_i``."""
    weights = np.asarray(weights, dtype=float)
    if np.any(weights < 0) or abs(weights.sum() - 1.0) > TOL.derived:
        raise ValueError("weights must be a probability vector")
    ops = [np.sqrt(w) * a for w, ch in zip(weights, channels) if w > 0 for a in ch.kraus]
    out = from_kraus(ops)
    return compress(out) if out.n_kraus > out.dim**2 else out
