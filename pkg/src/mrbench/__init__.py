"""Test bench for macrorealism: Leggett-Garg inequalities, no-signaling in
time, coherence witnesses, and explicit joint-distribution construction with
an exact rational feasibility oracle."""

from .conditions import (
    DEFAULT_EPS,
    ConditionReport,
    Slack,
    classify,
    eigenstate_lg,
    lg2_check,
    lg3_check,
    lg4_check,
    max_deviation,
    nsit_deviation,
    verdicts_from_slacks,
)
from .marginals import (
    DInterval,
    Feasible4Result,
    Joint3Result,
    LpResult,
    MarginalProblem,
    chsh_check,
    d_interval,
    eprb_problem,
    feasible4,
    joint3_construct,
    lp_feasible,
    lp_feasible_moments,
    three_time_problem,
    three_time_slacks,
)
from .measure import (
    MomentSet,
    OutcomeTable,
    Schedule,
    correlation,
    degeneracy_probs,
    interference_term,
    moment_set,
    moments_from_probs,
    probs_from_moments,
    quasi_prob2,
    seq_prob,
    witness,
)
from .qops import (
    DichotomicObservable,
    Hamiltonian,
    Projector,
    State,
    density_from_bloch,
    evolve_heisenberg,
    expectation,
    pauli_observable,
    projector,
    propagator,
    sample_state,
)
from .scenarios import (
    EPRBModel,
    EPRBResult,
    NegativeQuasiInstance,
    PrecessionModel,
    PrecessionResult,
    SweepPoint,
    classical_markov_moments,
    run_eprb,
    run_precession,
    search_negative_quasi,
    sweep,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # qops
    "DichotomicObservable",
    "State",
    "Hamiltonian",
    "Projector",
    "pauli_observable",
    "propagator",
    "evolve_heisenberg",
    "projector",
    "density_from_bloch",
    "expectation",
    "sample_state",
    # measure
    "Schedule",
    "OutcomeTable",
    "MomentSet",
    "seq_prob",
    "quasi_prob2",
    "correlation",
    "moment_set",
    "probs_from_moments",
    "moments_from_probs",
    "interference_term",
    "witness",
    "degeneracy_probs",
    # conditions
    "DEFAULT_EPS",
    "Slack",
    "ConditionReport",
    "lg2_check",
    "lg3_check",
    "lg4_check",
    "eigenstate_lg",
    "nsit_deviation",
    "max_deviation",
    "verdicts_from_slacks",
    "classify",
    # marginals
    "DInterval",
    "Joint3Result",
    "Feasible4Result",
    "MarginalProblem",
    "LpResult",
    "three_time_slacks",
    "d_interval",
    "joint3_construct",
    "feasible4",
    "chsh_check",
    "three_time_problem",
    "eprb_problem",
    "lp_feasible",
    "lp_feasible_moments",
    # scenarios
    "PrecessionModel",
    "PrecessionResult",
    "SweepPoint",
    "EPRBModel",
    "EPRBResult",
    "NegativeQuasiInstance",
    "run_precession",
    "sweep",
    "run_eprb",
    "classical_markov_moments",
    "search_negative_quasi",
]
