"""Dense complex linear algebra used throughout the package.

Matrices are plain ``numpy`` complex arrays. Pure states are 1-D amplitude
vectors and density matrices are square 2-D arrays; the ``check_*`` helpers
validate them against the global tolerances in :data:`TOL`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np


@dataclass
class Tolerances:
    """Global numeric tolerances.

    ``structural`` is used for unitarity / hermiticity / normalisation checks,
    ``derived`` for equalities that accumulate roundoff over several products
    (trace preservation of Kraus families, Choi comparisons).
    """

    structural: float = 1e-10
    derived: float = 1e-8
    psd: float = 1e-9


TOL = Tolerances()


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(m).T


def tensor(a, b, *more) -> np.ndarray:
    """Kronecker product of two or more matrices (or vectors)."""
    out = np.kron(np.asarray(a, dtype=np.complex128), np.asarray(b, dtype=np.complex128))
    for m in more:
        out = np.kron(out, np.asarray(m, dtype=np.complex128))
    return out


def partial_trace(m, dims: Sequence[int], keep) -> np.ndarray:
    """Trace out every subsystem of ``m`` not listed in ``keep``.

    Args:
        m: square matrix on the tensor product of subsystems with sizes ``dims``
            (first subsystem is the most significant index).
        dims: subsystem dimensions.
        keep: index or iterable of indices of the subsystems to keep.  The kept
            subsystems appear in increasing index order in the result.

    Returns:
        The reduced matrix on the kept subsystems.
    """
    m = np.asarray(m, dtype=np.complex128)
    dims = [int(x) for x in dims]
    if isinstance(keep, (int, np.integer)):
        keep = [int(keep)]
    keep = sorted(set(int(k) for k in keep))
    n = len(dims)
    total = int(np.prod(dims)) if dims else 1
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"partial_trace needs a square matrix, got {m.shape}")
    if m.shape[0] != total:
        raise ValueError(f"dims {dims} do not match matrix dimension {m.shape[0]}")
    if any(k < 0 or k >= n for k in keep):
        raise ValueError(f"keep indices {keep} out of range for {n} subsystems")

    t = m.reshape(dims + dims)
    # trace from the highest index down so axis numbers stay valid
    n_left = n
    for i in reversed(range(n)):
        if i in keep:
            continue
        t = np.trace(t, axis1=i, axis2=i + n_left)
        n_left -= 1
    kd = int(np.prod([dims[k] for k in keep])) if keep else 1
    return t.reshape(kd, kd)


def trace_norm(m) -> float:
    """Sum of singular values.

    Hermitian inputs go through ``eigvalsh``; anything else through the
    eigenvalues of ``m^dagger m``.
    """
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"trace_norm needs a square matrix, got {m.shape}")
    if np.allclose(m, dagger(m), atol=TOL.structural, rtol=0.0):
        h = 0.5 * (m + dagger(m))
        return float(np.sum(np.abs(np.linalg.eigvalsh(h))))
    ev = np.linalg.eigvalsh(dagger(m) @ m)
    return float(np.sum(np.sqrt(np.clip(ev, 0.0, None))))


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random ``d x d`` unitary from the QR decomposition of a Ginibre matrix."""
    if d < 1:
        raise ValueError("d must be >= 1")
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diag = np.diag(r)
    phases = diag / np.abs(diag)
    return q * phases[np.newaxis, :]


def haar_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Uniformly random pure state of dimension ``dim``."""
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def max_entangled_state(d: int) -> np.ndarray:
    """``(1/sqrt(d)) sum_i |i>|i>`` as a vector of length ``d**2``."""
    if d < 1:
        raise ValueError("d must be >= 1")
    return np.eye(d, dtype=np.complex128).reshape(d * d) / np.sqrt(d)


def basis_state(dim: int, i: int) -> np.ndarray:
    v = np.zeros(dim, dtype=np.complex128)
    v[i] = 1.0
    return v


def projector(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=np.complex128)
    return np.outer(psi, np.conj(psi))


def is_unitary(u, atol: float | None = None) -> bool:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    atol = TOL.structural if atol is None else atol
    return bool(np.max(np.abs(dagger(u) @ u - np.eye(u.shape[0]))) < atol)


def is_isometry(v, atol: float | None = None) -> bool:
    v = np.asarray(v)
    atol = TOL.derived if atol is None else atol
    return bool(np.max(np.abs(dagger(v) @ v - np.eye(v.shape[1]))) < atol)


def check_pure_state(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=np.complex128)
    if psi.ndim != 1:
        raise ValueError("a pure state is a 1-D amplitude vector")
    if abs(np.linalg.norm(psi) - 1.0) > TOL.structural:
        raise ValueError("pure state is not normalised")
    return psi


def check_density_matrix(rho) -> np.ndarray:
    """Validate hermiticity, unit trace and positivity; return ``rho`` as an array."""
    rho = as_matrix(rho)
    if rho.shape[0] != rho.shape[1]:
        raise ValueError("density matrix must be square")
    if np.max(np.abs(rho - dagger(rho))) > TOL.structural:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > TOL.structural:
        raise ValueError("density matrix does not have unit trace")
    if np.min(np.linalg.eigvalsh(0.5 * (rho + dagger(rho)))) < -TOL.psd:
        raise ValueError("density matrix has a negative eigenvalue")
    return rho


def complete_unitary(cols: np.ndarray, positions: Sequence[int], dim: int) -> np.ndarray:
    """Extend orthonormal columns to a ``dim x dim`` unitary.

    ``cols[:, j]`` is placed in column ``positions[j]``.  The remaining columns
    are filled, in increasing column order, by Gram-Schmidt orthogonalisation
    of the standard basis vectors taken in lexicographic order, skipping any
    that are (numerically) in the span already built.
    """
    cols = np.asarray(cols, dtype=np.complex128)
    if cols.shape[0] != dim:
        raise ValueError("column length does not match dim")
    if len(positions) != cols.shape[1] or len(set(positions)) != len(positions):
        raise ValueError("positions must be distinct, one per column")
    if not is_isometry(cols):
        raise ValueError("columns are not orthonormal")

    out = np.zeros((dim, dim), dtype=np.complex128)
    basis = [cols[:, j] for j in range(cols.shape[1])]
    for j, pos in enumerate(positions):
        out[:, pos] = cols[:, j]
    free = [c for c in range(dim) if c not in set(positions)]
    candidate = 0
    for pos in free:
        while True:
            if candidate >= dim:
                raise RuntimeError("ran out of basis vectors during completion")
            v = basis_state(dim, candidate)
            candidate += 1
            for b in basis:
                v = v - np.vdot(b, v) * b
            # second pass keeps the new vector orthogonal to working precision
            for b in basis:
                v = v - np.vdot(b, v) * b
            nrm = np.linalg.norm(v)
            if nrm > 1e-8:
                v = v / nrm
                break
        basis.append(v)
        out[:, pos] = v
    return out
