"""Lower bounds on the diamond distance and numerical checks of the two
inequalities the certification algorithms rely on.

The diamond norm is never computed exactly here.  Every estimate is a witness
value ``||((E - F) (x) id)(|w><w|)||_1`` for an explicit input ``|w>`` on
system (x) ancilla (ancilla dimension ``d``), hence a certified lower bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np

from chancert.channels import (
    QuantumChannel,
    entanglement_fidelity,
    identity_channel,
    power,
)
from chancert.matcore import dagger, haar_state, max_entangled_state

MAX_ASCENT_STEPS = 200
ASCENT_TOL = 1e-9
DEFAULT_RESTARTS = 32
# slack on "holds" comparisons, absorbs eigensolver roundoff
CHECK_SLACK = 1e-9


@dataclass(frozen=True)
class DiamondEstimate:
    lower_bound: float
    method: Literal["choi-state", "input-search", "analytic"]
    witness: Optional[np.ndarray] = None

    def __post_init__(self):
        if not -1e-12 <= self.lower_bound <= 2.0 + 1e-9:
            raise ValueError(f"diamond lower bound {self.lower_bound} outside [0, 2]")


@dataclass(frozen=True)
class FidelityDiamondReport:
    lhs: float
    rhs: float
    holds: bool


@dataclass(frozen=True)
class AmplificationReport:
    """Outcome of one power-amplification check.

    ``status`` is ``"holds"`` when the lower bound exceeds ``n*eps/2``,
    ``"violated"`` only when an exact distance was supplied and falls short,
    and ``"inconclusive"`` when a numerical lower bound is simply too weak.
    """

    n: int
    eps: float
    lhs_lb: float
    rhs: float
    status: Literal["holds", "violated", "inconclusive"]

    @property
    def holds(self) -> bool:
        return self.status == "holds"


def _difference_map(e: QuantumChannel, f: QuantumChannel):
    """Stacked Kraus operators of ``E`` and ``F`` with signs +1 / -1."""
    if e.dim != f.dim:
        raise ValueError("channels must have equal dimension")
    ops = np.stack(list(e.kraus) + list(f.kraus))
    signs = np.concatenate([np.ones(e.n_kraus), -np.ones(f.n_kraus)])
    return ops, signs


def _output_difference(ops: np.ndarray, signs: np.ndarray, x: np.ndarray) -> np.ndarray:
    """``((E - F) (x) id)(|w><w|)`` with ``|w> = vec(x)`` (row-major, ancilla second).

    ``(A (x) I) vec(x) = vec(A x)``, so each Kraus term is a rank-one outer product.
    """
    y = (ops @ x).reshape(len(ops), -1)
    out = (y.T * signs) @ y.conj()
    return 0.5 * (out + dagger(out))


def witness_value(e: QuantumChannel, f: QuantumChannel, w) -> float:
    """``||((E - F) (x) id)(|w><w|)||_1`` for a pure input on system (x) ancilla."""
    ops, signs = _difference_map(e, f)
    d = e.dim
    w = np.asarray(w, dtype=np.complex128)
    if w.size != d * d:
        raise ValueError("witness must live on system (x) d-dimensional ancilla")
    m = _output_difference(ops, signs, w.reshape(d, d) / np.linalg.norm(w))
    return float(np.sum(np.abs(np.linalg.eigvalsh(m))))


def choi_state_lower_bound(e: QuantumChannel, f: QuantumChannel) -> DiamondEstimate:
    """Trace distance of the two Choi states (witness ``|Phi>``)."""
    phi = max_entangled_state(e.dim)
    val = witness_value(e, f, phi)
    return DiamondEstimate(min(val, 2.0), "choi-state", phi)


def _ascend(ops: np.ndarray, signs: np.ndarray, d: int, w: np.ndarray) -> tuple[float, np.ndarray]:
    """Monotone see-saw ascent of the witness value from a starting input.

    With ``S`` the sign of the current output difference, ``||M(w')||_1 >=
    <w'|G|w'>`` where ``G = sum A^dag S A - sum B^dag S B`` (Kraus ops
    extended by the ancilla identity), with equality at ``w' = w``.  Moving to
    the top eigenvector of ``G`` therefore never decreases the objective.
    """
    best = -1.0
    ext = np.kron(ops, np.eye(d))  # batched A_k (x) I
    ext_dag = np.conj(np.swapaxes(ext, 1, 2)) * signs[:, None, None]
    for _ in range(MAX_ASCENT_STEPS):
        m = _output_difference(ops, signs, w.reshape(d, d))
        evals, evecs = np.linalg.eigh(m)
        val = float(np.sum(np.abs(evals)))
        if val < best + ASCENT_TOL:
            break
        best = val
        sgn = (evecs * np.sign(evals)) @ dagger(evecs)
        g = np.sum(ext_dag @ sgn @ ext, axis=0)
        _, gv = np.linalg.eigh(0.5 * (g + dagger(g)))
        w = gv[:, -1]
    return best, w


def diamond_lower_bound(
    e: QuantumChannel,
    f: QuantumChannel,
    restarts: int = DEFAULT_RESTARTS,
    rng: np.random.Generator | None = None,
) -> DiamondEstimate:
    """Best witness value over ``restarts`` random starts plus the ``|Phi>`` start.

    The bound is re-evaluated at the returned witness, so ``witness_value``
    reproduces ``lower_bound``.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    if rng is None:
        rng = np.random.default_rng(0)
    ops, signs = _difference_map(e, f)
    d = e.dim
    starts = [max_entangled_state(d)] + [haar_state(d * d, rng) for _ in range(restarts)]
    best_val, best_w = -1.0, starts[0]
    for w0 in starts:
        val, w = _ascend(ops, signs, d, w0)
        if val > best_val:
            best_val, best_w = val, w
    # re-evaluate at the witness we report
    best_w = best_w / np.linalg.norm(best_w)
    val = witness_value(e, f, best_w)
    return DiamondEstimate(min(max(val, 0.0), 2.0), "input-search", best_w)


def faulty_grover_diamond_exact(p: float, n: int = 1) -> float:
    """``|| E_k^n - id ||_diamond = 1 - (2p - 1)^n`` for the faulty Grover channel.

    ``E_k^n = q id + (1 - q) O_k . O_k`` with ``q = (1 + (2p-1)^n) / 2``; the
    witness ``(|k> + |j>)/sqrt(2)`` attains ``2(1 - q)`` and convexity caps the
    distance at the same value.
    """
    if not 0.5 < p <= 1.0:
        raise ValueError("p must lie in (1/2, 1]")
    if n < 1:
        raise ValueError("n must be >= 1")
    return 1.0 - (2.0 * p - 1.0) ** n


def fidelity_diamond_check(
    e: QuantumChannel, u, dlb: DiamondEstimate | float
) -> FidelityDiamondReport:
    """Test ``sqrt(F_ent(E, U)) <= 1 - D^2 / (8d)`` for a diamond lower bound ``D``.

    The right side decreases in ``D``, so a lower bound in place of the true
    distance gives a weaker but still valid test.
    """
    bound = dlb.lower_bound if isinstance(dlb, DiamondEstimate) else float(dlb)
    lhs = math.sqrt(entanglement_fidelity(e, u))
    rhs = 1.0 - bound**2 / (8.0 * e.dim)
    return FidelityDiamondReport(lhs, rhs, lhs <= rhs + CHECK_SLACK)


def max_amplification_power(eps: float) -> int:
    """Largest ``n`` with ``n <= 1/(2 eps)`` (unbounded for ``eps == 0``)."""
    if eps <= 0.0:
        return math.inf
    # guard against 1/(2*0.02) evaluating to 24.999999999999996
    return int(math.floor(1.0 / (2.0 * eps) + 1e-9))


def power_amplification_check(
    e: QuantumChannel,
    n: int,
    eps: float,
    d_exact: float | None = None,
    restarts: int = DEFAULT_RESTARTS,
    rng: np.random.Generator | None = None,
) -> AmplificationReport:
    """Check ``||E^n - id||_diamond > n * eps / 2`` where ``eps = ||E - id||_diamond``.

    ``d_exact`` (the exact value of ``||E^n - id||``) is used when given;
    otherwise a witness search on ``power(e, n)`` supplies the lower bound.
    """
    if eps < 0.0 or eps > 2.0:
        raise ValueError("eps must lie in [0, 2]")
    if n < 1 or n > max_amplification_power(eps):
        raise ValueError(f"n={n} outside 1 <= n <= 1/(2 eps) for eps={eps}")
    rhs = 0.5 * n * eps
    if d_exact is not None:
        lhs = float(d_exact)
        exact = True
    else:
        lhs = diamond_lower_bound(power(e, n), identity_channel(e.dim), restarts, rng).lower_bound
        exact = False
    if lhs > rhs or (rhs == 0.0 and lhs >= 0.0):
        # rhs == 0 only for eps == 0 (E = id); the strict inequality degenerates to 0 <= 0
        status = "holds"
    elif exact and lhs < rhs - CHECK_SLACK:
        status = "violated"
    else:
        status = "inconclusive"
    return AmplificationReport(n, eps, lhs, rhs, status)
