"""Simulation of quantum channel certification to a target unitary.

Three testers are provided (incoherent, coherent, source-code access) along
with the channel algebra, distance bounds and experiment harness they need.
"""

from chancert.matcore import (
    TOL,
    haar_unitary,
    max_entangled_state,
    partial_trace,
    tensor,
    trace_norm,
)
from chancert.channels import (
    QuantumChannel,
    SourceCode,
    UnitaryChannel,
    apply,
    apply_extended,
    choi,
    compose,
    entanglement_fidelity,
    faulty_grover,
    faulty_grover_source,
    from_kraus,
    identity_channel,
    power,
    random_channel,
    source_code,
    stinespring,
    unitary_channel,
)
from chancert.distances import (
    DiamondEstimate,
    choi_state_lower_bound,
    diamond_lower_bound,
    faulty_grover_diamond_exact,
    fidelity_diamond_check,
    power_amplification_check,
)
from chancert.certify import (
    AEConfig,
    CertVerdict,
    CohSchedule,
    QueryLedger,
    coh_cert,
    coh_schedule,
    incoh_cert,
    incoh_round,
    qpe_outcome_distribution,
    sourcecode_cert,
    sqrt_ampl_est,
)

__version__ = "0.1.0"
