"""The three certification testers and the simulated amplitude estimator.

Every tester returns a :class:`CertVerdict` carrying an exact
:class:`QueryLedger`.  Measurement outcomes are sampled from their exact
probabilities instead of simulating full state vectors:

* an incoherent round is a Bernoulli trial that returns 0 with probability
  ``F_ent(E, U)``;
* amplitude estimation draws phase-estimation outcomes from their exact
  distribution, which depends on the target amplitude only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Optional

import numpy as np

from chancert.channels import (
    QuantumChannel,
    SourceCode,
    _as_unitary,
    compose,
    entanglement_fidelity,
    unitary_channel,
)
from chancert.matcore import complete_unitary, dagger, max_entangled_state

Decision = Literal["accept", "reject"]

# fidelities this close to 1 are roundoff on an exact match
FIDELITY_SNAP = 1e-12
# guards ceil() against values like 64.00000000000001 whose exact value is an integer
CEIL_GUARD = 1e-9
# precision and confidence used for every inner incoherent call of the coherent tester
COH_INNER_EPS = 1.0 / 8.0


@dataclass
class QueryLedger:
    channel_queries: int = 0
    forward_code_queries: int = 0
    inverse_code_queries: int = 0

    def __add__(self, other: "QueryLedger") -> "QueryLedger":
        return QueryLedger(
            self.channel_queries + other.channel_queries,
            self.forward_code_queries + other.forward_code_queries,
            self.inverse_code_queries + other.inverse_code_queries,
        )

    @property
    def code_queries(self) -> int:
        return self.forward_code_queries + self.inverse_code_queries


@dataclass
class CertVerdict:
    decision: Decision
    ledger: QueryLedger
    detail: dict = field(default_factory=dict)

    @property
    def accepted(self) -> bool:
        return self.decision == "accept"


@dataclass(frozen=True)
class CohSchedule:
    T: int
    rows: tuple  # (j, p_j, delta_j)

    @property
    def powers(self) -> list:
        return [p for _, p, _ in self.rows]

    @property
    def deltas(self) -> list:
        return [dj for _, _, dj in self.rows]


@dataclass(frozen=True)
class AEConfig:
    """Phase-estimation grid size and median-of-``repetitions`` amplification."""

    grid_size: int
    repetitions: int
    queries_per_iteration: int = 2

    def __post_init__(self):
        if self.grid_size < 2:
            raise ValueError("grid_size must be >= 2")
        if self.repetitions < 1 or self.repetitions % 2 == 0:
            raise ValueError("repetitions must be odd")

    @classmethod
    def for_accuracy(cls, eps_prime: float, delta: float) -> "AEConfig":
        """``M = ceil(pi/eps') + 1`` and ``R = 2 ceil(6 ln(1/delta)) + 1``.

        One run lands on a nearest grid neighbour of the true phase with
        probability at least ``8/pi^2``; the grid spacing keeps such a run
        within ``pi/M < eps'``.  ``R`` pushes the median's failure rate below
        ``delta`` by a Chernoff bound with a factor-two margin.
        """
        if not 0.0 < eps_prime < 1.0:
            raise ValueError("eps_prime must lie in (0, 1)")
        if not 0.0 < delta < 1.0:
            raise ValueError("delta must lie in (0, 1)")
        m = math.ceil(math.pi / eps_prime) + 1
        r = 2 * math.ceil(6.0 * math.log(1.0 / delta)) + 1
        return cls(m, r)

    @property
    def forward_queries(self) -> int:
        return (self.grid_size - 1) * self.repetitions

    @property
    def inverse_queries(self) -> int:
        return (self.grid_size - 1) * self.repetitions


def _guarded_ceil(x: float) -> int:
    return math.ceil(x - CEIL_GUARD * max(1.0, abs(x)))


def _snap_fidelity(f: float) -> float:
    f = min(1.0, max(0.0, f))
    return 1.0 if f >= 1.0 - FIDELITY_SNAP else f


def _check_eps_delta(eps: float, delta: float) -> None:
    if not 0.0 < eps <= 2.0:
        raise ValueError(f"eps must lie in (0, 2], got {eps}")
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")


def incoh_rounds(eps: float, delta: float, d: int) -> int:
    """Number of rounds ``ceil(8 d ln(1/delta) / eps^2)``."""
    _check_eps_delta(eps, delta)
    return _guarded_ceil(8.0 * d * math.log(1.0 / delta) / eps**2)


def incoh_round(
    e: QuantumChannel,
    u,
    rng: np.random.Generator,
    ledger: QueryLedger | None = None,
    fidelity: float | None = None,
) -> int:
    """One round: send half of ``|Phi>`` through ``U^-1 o E`` and measure ``{|Phi><Phi|, rest}``.

    Returns 0 (projected onto ``|Phi>``) with probability ``F_ent(E, U)``.
    """
    if fidelity is None:
        fidelity = _snap_fidelity(entanglement_fidelity(e, u))
    if ledger is not None:
        ledger.channel_queries += 1
    return 0 if rng.random() < fidelity else 1


def incoh_cert(
    eps: float,
    delta: float,
    e: QuantumChannel,
    u,
    rng: np.random.Generator,
    fidelity: float | None = None,
) -> CertVerdict:
    """Accept iff all ``ceil(8d ln(1/delta)/eps^2)`` rounds return 0.

    The rounds are i.i.d., so instead of drawing them one by one the index of
    the first 1 is drawn from a geometric law, and the number of further 1s
    from a binomial.  ``detail`` records ``n``, the fidelity, ``first_one``
    (1-based, ``None`` if every round returned 0) and ``ones``.
    """
    n = incoh_rounds(eps, delta, e.dim)
    if fidelity is None:
        fidelity = entanglement_fidelity(e, u)
    fidelity = _snap_fidelity(fidelity)

    if fidelity >= 1.0:
        first_one, ones = None, 0
    else:
        g = int(rng.geometric(1.0 - fidelity))
        if g > n:
            first_one, ones = None, 0
        else:
            first_one = g
            ones = 1 + int(rng.binomial(n - g, 1.0 - fidelity))
    decision = "accept" if ones == 0 else "reject"
    detail = {"n": n, "fidelity": fidelity, "first_one": first_one, "ones": ones}
    return CertVerdict(decision, QueryLedger(channel_queries=n), detail)


def coh_schedule(eps: float, delta: float) -> CohSchedule:
    """``T = ceil(log2(1/eps) + 1)``, ``p_j = 2^j``, ``delta_j = delta 2^(j-T-1)``."""
    _check_eps_delta(eps, delta)
    t = max(0, _guarded_ceil(math.log2(1.0 / eps) + 1.0))
    rows = tuple((j, 2**j, delta * 2.0 ** (j - t - 1)) for j in range(t + 1))
    return CohSchedule(t, rows)


def coh_stage_fidelities(e: QuantumChannel, u, schedule: CohSchedule) -> list:
    """``F_ent((U^-1 o E)^(p_j), id)`` for every stage, by repeated squaring."""
    f = compose(unitary_channel(dagger(_as_unitary(u))), e)
    out = []
    for j in range(schedule.T + 1):
        if j > 0:
            f = compose(f, f)
        out.append(_snap_fidelity(entanglement_fidelity(f, np.eye(e.dim))))
    return out


def coh_full_queries(eps: float, delta: float, d: int) -> int:
    """Ledger of a run that accepts, i.e. executes every stage."""
    sched = coh_schedule(eps, delta)
    return sum(p * incoh_rounds(COH_INNER_EPS, dj, d) for _, p, dj in sched.rows)


def coh_cert(
    eps: float,
    delta: float,
    e: QuantumChannel,
    u,
    rng: np.random.Generator,
    fidelities: list | None = None,
) -> CertVerdict:
    """Run the incoherent tester at precision 1/8 on ``(U^-1 o E)^(2^j)``, j = 0..T.

    Each inner round uses ``p_j`` channel queries.  Stops at the first
    rejecting stage.  ``fidelities`` may carry precomputed per-stage
    fidelities (see :func:`coh_stage_fidelities`) to skip the channel powers.
    """
    _check_eps_delta(eps, delta)
    sched = coh_schedule(eps, delta)
    if fidelities is None:
        fidelities = coh_stage_fidelities(e, u, sched)
    ledger = QueryLedger()
    stages = []
    decision: Decision = "accept"
    for (j, p, dj), fj in zip(sched.rows, fidelities):
        inner = incoh_cert(COH_INNER_EPS, dj, e, None, rng, fidelity=fj)
        ledger.channel_queries += p * inner.ledger.channel_queries
        stages.append({"j": j, "p": p, "delta": dj, "b": inner.decision, **inner.detail})
        if not inner.accepted:
            decision = "reject"
            break
    return CertVerdict(decision, ledger, {"T": sched.T, "stages": stages})


def _fejer(delta: np.ndarray, m: int) -> np.ndarray:
    """``|S_M(x)|^2 = sin^2(M pi x) / (M^2 sin^2(pi x))`` with value 1 at integers."""
    x = delta - np.round(delta)
    den = (m * np.sin(np.pi * x)) ** 2
    out = np.ones_like(x)
    ok = np.abs(x) > 1e-13
    out[ok] = np.sin(m * np.pi * x[ok]) ** 2 / den[ok]
    return out


def qpe_outcome_distribution(theta: float, m: int) -> np.ndarray:
    """Outcome law of ``m``-point phase estimation on the amplitude-estimation
    Grover operator, whose eigenphases are ``+theta`` and ``-theta`` (units of 2 pi).

    The start state has weight 1/2 on each eigenvector; the eigenvectors are
    orthogonal, so the two branches add without interference.
    """
    if m < 2:
        raise ValueError("M must be >= 2")
    if not -1e-12 <= theta <= 0.5 + 1e-12:
        raise ValueError("theta must lie in [0, 1/2]")
    y = np.arange(m) / m
    probs = 0.5 * _fejer(theta - y, m) + 0.5 * _fejer(-theta - y, m)
    return probs / probs.sum()


def sqrt_ampl_est(
    eps_prime: float,
    delta: float,
    a_true: float,
    rng: np.random.Generator,
    config: AEConfig | None = None,
) -> tuple[float, QueryLedger]:
    """Estimate ``sqrt(a_true)`` to within ``eps_prime`` with probability >= ``1 - delta``.

    Median of ``R`` independent ``M``-point phase-estimation runs, each read
    out as ``sin(pi * min(y, M - y) / M)``.
    """
    if not -1e-12 <= a_true <= 1.0 + 1e-12:
        raise ValueError("a_true must lie in [0, 1]")
    cfg = config or AEConfig.for_accuracy(eps_prime, delta)
    a = min(1.0, max(0.0, a_true))
    theta = math.asin(math.sqrt(a)) / math.pi
    m = cfg.grid_size
    ys = rng.choice(m, size=cfg.repetitions, p=qpe_outcome_distribution(theta, m))
    folded = np.minimum(ys, m - ys)
    estimate = float(np.median(np.sin(np.pi * folded / m)))
    ledger = QueryLedger(forward_code_queries=cfg.forward_queries, inverse_code_queries=cfg.inverse_queries)
    return estimate, ledger


def sourcecode_threshold(eps: float, d: int) -> float:
    return eps / (4.0 * math.sqrt(d))


def sourcecode_cert(
    eps: float,
    delta: float,
    code: SourceCode,
    u,
    rng: np.random.Generator,
    a_true: float | None = None,
) -> CertVerdict:
    """Estimate ``sqrt(1 - F_ent)`` with accuracy ``eps/(16 sqrt d)``; accept below ``eps/(4 sqrt d)``.

    The amplitude fed to the estimator is ``1 - F_ent(E, U)`` for the channel
    ``E`` implemented by ``code``; it can be supplied as ``a_true`` to skip
    recomputing it.
    """
    _check_eps_delta(eps, delta)
    uu = _as_unitary(u)
    d = code.sys_dim
    if uu.shape[0] != d:
        raise ValueError("source code and target unitary act on different dimensions")
    if a_true is None:
        a_true = 1.0 - _snap_fidelity(entanglement_fidelity(code.channel(), uu))
    eps_prime = eps / (16.0 * math.sqrt(d))
    est, ledger = sqrt_ampl_est(eps_prime, delta, a_true, rng)
    thr = sourcecode_threshold(eps, d)
    decision = "accept" if est < thr else "reject"
    return CertVerdict(decision, ledger, {"estimate": est, "a_true": a_true, "threshold": thr, "eps_prime": eps_prime})


def entangler(d: int) -> np.ndarray:
    """A unitary on ``C^d (x) C^d`` whose first column is ``|Phi>``."""
    return complete_unitary(max_entangled_state(d)[:, None], [0], d * d)


def certification_unitary(code: SourceCode, u) -> np.ndarray:
    """The unitary whose ``|0>`` amplitude the source-code tester estimates.

    Registers are ordered system A, environment B, reference C.  It equals
    ``(U_Phi^dag (x) I_B)((U^dag W) (x) I_C)(U_Phi (x) I_B)`` with ``U_Phi``
    acting on A and C.  Only used to verify the amplitude identity; the tester
    itself never builds it.
    """
    uu = _as_unitary(u)
    d, db = code.sys_dim, code.env_dim
    ab = np.kron(dagger(uu), np.eye(db)) @ code.w
    middle = np.kron(ab, np.eye(d))
    # U_Phi on (A, C) embedded into A (x) B (x) C
    uphi = entangler(d).reshape(d, d, d, d)
    eye_b = np.eye(db)
    prep = np.einsum("acxz,by->abcxyz", uphi, eye_b).reshape(d * db * d, d * db * d)
    return dagger(prep) @ middle @ prep


def good_amplitude_weight(code: SourceCode, u) -> float:
    """``|| (<0|_A <0|_C (x) I_B) V |0>_ABC ||^2``, which should equal ``F_ent``."""
    v = certification_unitary(code, u)
    d, db = code.sys_dim, code.env_dim
    col = v[:, 0].reshape(d, db, d)
    return float(np.sum(np.abs(col[0, :, 0]) ** 2))
