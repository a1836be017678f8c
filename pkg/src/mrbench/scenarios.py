"""Canonical physical setups driving the condition checks.

    * spin precession: Q = q_axis.sigma under H = (omega/2) axis.sigma,
      probed at three or four times;
    * the two-particle singlet bench with two settings per side, including
      sequential both-settings-per-side measurements;
    * a classical telegraph (two-state Markov) control whose moments always
      admit a joint distribution;
    * a randomized search for negative quasi-probability coexisting with
      exact no-signaling once measurement degeneracy is broken (dim >= 3).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .conditions import (
    ConditionReport,
    Slack,
    _classify_tables,
    nsit_deviation,
    verdicts_from_slacks,
)
from .marginals import chsh_check, feasible4
from .measure import (
    MomentSet,
    OutcomeTable,
    Schedule,
    degeneracy_probs,
    interference_term,
    moment_set,
    moments_from_probs,
    quasi_prob2,
    seq_prob,
    witness,
)
from .qops import (
    DichotomicObservable,
    Hamiltonian,
    Projector,
    State,
    matrix,
    pauli_observable,
)

__all__ = [
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


def _unit3(value, what: str) -> tuple:
    v = np.asarray(value, dtype=float)
    if v.shape != (3,):
        raise ValueError(f"{what} must be a real 3-vector, got shape {v.shape}")
    norm = float(np.linalg.norm(v))
    if abs(norm - 1.0) > 1e-12:
        raise ValueError(f"{what} must be a unit vector: norm {norm!r} != 1")
    return tuple(float(x) for x in v)


@dataclass(frozen=True, eq=False)
class PrecessionModel:
    """Qubit precession scenario: rotation axis, measured axis, state, times."""

    omega: float
    axis: tuple
    q_axis: tuple
    initial: State
    times: tuple

    def __post_init__(self) -> None:
        object.__setattr__(self, "omega", float(self.omega))
        if not np.isfinite(self.omega):
            raise ValueError(f"omega must be finite, got {self.omega}")
        object.__setattr__(self, "axis", _unit3(self.axis, "axis"))
        object.__setattr__(self, "q_axis", _unit3(self.q_axis, "q_axis"))
        if self.initial.dim != 2:
            raise ValueError(f"precession needs a qubit state, got dim {self.initial.dim}")
        ts = tuple(float(t) for t in self.times)
        if len(ts) not in (3, 4):
            raise ValueError(f"times must list 3 or 4 values, got {len(ts)}")
        if any(b >= a for a, b in zip(ts[1:], ts)):
            raise ValueError(f"times must be strictly increasing, got {ts}")
        object.__setattr__(self, "times", ts)

    @property
    def hamiltonian(self) -> Hamiltonian:
        return Hamiltonian(0.5 * self.omega * pauli_observable(self.axis).matrix)

    @property
    def observable(self) -> DichotomicObservable:
        return pauli_observable(self.q_axis)


@dataclass(frozen=True, eq=False)
class PrecessionResult:
    """Classification report plus the raw statistics it was computed from."""

    model: PrecessionModel
    report: ConditionReport
    moments: MomentSet
    tables: dict
    witness: float
    interference: float


@dataclass(frozen=True, eq=False)
class SweepPoint:
    parameter: str
    value: float
    result: PrecessionResult


def run_precession(model: PrecessionModel, eps: float = 1e-9) -> PrecessionResult:
    """Evaluate every condition for one precession scenario.

    Three times: full classification (12 + 4 LG slacks, five NSIT deviation
    groups, all three verdicts). Four times: the four-time bench (16 + 8
    slacks, mr_weak only). The witness and interference values refer to the
    first pair of times.
    """
    rho, Q, H = model.initial, model.observable, model.hamiltonian
    ts = model.times
    tables = {}
    if len(ts) == 3:
        moments = moment_set(rho, Q, H, ts)
        t1, t2, t3 = ts
        tables["p1"] = seq_prob(rho, Q, H, Schedule((t1,)))
        tables["p2"] = seq_prob(rho, Q, H, Schedule((t2,)))
        tables["p3"] = seq_prob(rho, Q, H, Schedule((t3,)))
        tables["p12"] = seq_prob(rho, Q, H, Schedule((t1, t2)))
        tables["p13"] = seq_prob(rho, Q, H, Schedule((t1, t3)))
        tables["p23"] = seq_prob(rho, Q, H, Schedule((t2, t3)))
        tables["p123"] = seq_prob(rho, Q, H, Schedule(ts))
        tables["q12"] = quasi_prob2(rho, Q, H, t1, t2)
        report = _classify_tables(
            moments,
            tables["p123"],
            tables["p12"],
            tables["p13"],
            tables["p23"],
            tables["p2"],
            tables["p3"],
            eps,
        )
        # same arithmetic as measure.witness, reusing the tables above
        marg = tables["p12"].sum_out(0)
        w_plus = abs(marg.value((1,)) - tables["p2"].value((1,)))
    else:
        moments = moment_set(rho, Q, H, ts)
        outcome = feasible4(moments, eps=eps)
        report = ConditionReport(
            slacks=outcome.slacks, tolerance=eps, mr_weak=outcome.feasible
        )
        tables["p1234"] = seq_prob(rho, Q, H, Schedule(ts))
        tables["q12"] = quasi_prob2(rho, Q, H, ts[0], ts[1])
        w_plus, _ = witness(rho, Q, H, ts[0], ts[1])
    interf = interference_term(rho, Q, H, ts[0], ts[1])
    return PrecessionResult(
        model=model,
        report=report,
        moments=moments,
        tables=tables,
        witness=w_plus,
        interference=interf,
    )


def sweep(model: PrecessionModel, parameter: str, grid, eps: float = 1e-9) -> list:
    """Re-run one scenario across a parameter grid.

    parameter "omega" sets the precession frequency directly;
    parameter "omega_tau" is the dimensionless rotation angle per interval
    and requires equally spaced times (omega = value / spacing), which keeps
    value 0 well-defined.
    """
    if parameter not in ("omega", "omega_tau"):
        raise ValueError(f"unknown sweep parameter {parameter!r}; expected 'omega' or 'omega_tau'")
    values = [float(v) for v in grid]
    if not values:
        raise ValueError("sweep grid is empty")
    if parameter == "omega_tau":
        gaps = np.diff(model.times)
        if float(np.max(np.abs(gaps - gaps[0]))) > 1e-12:
            raise ValueError(
                f"omega_tau sweeps need equally spaced times, got {model.times}"
            )
        spacing = float(gaps[0])
    points = []
    for v in values:
        omega = v if parameter == "omega" else v / spacing
        varied = PrecessionModel(
            omega=omega,
            axis=model.axis,
            q_axis=model.q_axis,
            initial=model.initial,
            times=model.times,
        )
        points.append(SweepPoint(parameter=parameter, value=v, result=run_precession(varied, eps=eps)))
    return points


@dataclass(frozen=True, eq=False)
class EPRBModel:
    """Singlet bench: two measurement directions per side."""

    a: tuple
    a_prime: tuple
    b: tuple
    b_prime: tuple

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", _unit3(self.a, "a"))
        object.__setattr__(self, "a_prime", _unit3(self.a_prime, "a_prime"))
        object.__setattr__(self, "b", _unit3(self.b, "b"))
        object.__setattr__(self, "b_prime", _unit3(self.b_prime, "b_prime"))


@dataclass(frozen=True, eq=False)
class EPRBResult:
    """Pair tables, correlators, CHSH slacks, and the sequential sum rules.

    nosignal holds per-outcome deviations of every pair-table marginal from
    the corresponding single-setting distribution. seqsum_late compares the
    sequential four-setting table summed over the later measurements with
    the first-measurements pair table (an identity); seqsum_early sums out
    the first measurements, which generically fails to reproduce the
    second-measurements pair table.
    """

    model: EPRBModel
    tables: dict
    correlators: dict
    chsh: tuple
    nosignal: tuple
    seqsum_late: tuple
    seqsum_early: tuple


_SINGLET = np.array([0.0, 1.0, -1.0, 0.0], dtype=complex) / np.sqrt(2.0)


def _qubit_projectors(direction) -> dict:
    q = pauli_observable(direction).matrix
    eye = np.eye(2)
    return {s: 0.5 * (eye + s * q) for s in (1, -1)}


def _singlet_value(op_a: np.ndarray, op_b: np.ndarray) -> float:
    return float((_SINGLET.conj() @ np.kron(op_a, op_b) @ _SINGLET).real)


def run_eprb(model: EPRBModel) -> EPRBResult:
    """Evaluate the singlet bench for the four given directions."""
    proj = {
        "1": _qubit_projectors(model.a),
        "2": _qubit_projectors(model.a_prime),
        "3": _qubit_projectors(model.b),
        "4": _qubit_projectors(model.b_prime),
    }
    eye = np.eye(2)

    tables = {}
    singles = {}
    for side, label in (("first", "1"), ("first", "2"), ("second", "3"), ("second", "4")):
        values = np.empty(2)
        for i, s in enumerate((1, -1)):
            if side == "first":
                values[i] = _singlet_value(proj[label][s], eye)
            else:
                values[i] = _singlet_value(eye, proj[label][s])
        singles[label] = OutcomeTable(values, kind="probability")
        tables[f"p{label}"] = singles[label]
    for la, lb in (("1", "3"), ("1", "4"), ("2", "3"), ("2", "4")):
        values = np.empty((2, 2))
        for i, sa in enumerate((1, -1)):
            for j, sb in enumerate((1, -1)):
                values[i, j] = _singlet_value(proj[la][sa], proj[lb][sb])
        tables[f"p{la}{lb}"] = OutcomeTable(values, kind="probability")

    correlators = {
        pair: moments_from_probs(tables[f"p{pair}"]).pair(0, 1)
        for pair in ("13", "14", "23", "24")
    }
    chsh = tuple(
        chsh_check(correlators["13"], correlators["14"], correlators["23"], correlators["24"])
    )

    nosignal = []
    for pair in ("13", "14", "23", "24"):
        first, second = pair[0], pair[1]
        nosignal.extend(
            nsit_deviation(singles[second], tables[f"p{pair}"], 0, f"nosignal_{pair}_sum{first}")
        )
        nosignal.extend(
            nsit_deviation(singles[first], tables[f"p{pair}"], 1, f"nosignal_{pair}_sum{second}")
        )

    # sequential: both settings measured on each side, first a/b then a'/b'
    values = np.empty((2, 2, 2, 2))
    for i1, s1 in enumerate((1, -1)):
        for i2, s2 in enumerate((1, -1)):
            op_a = proj["1"][s1] @ proj["2"][s2] @ proj["1"][s1]
            for i3, s3 in enumerate((1, -1)):
                for i4, s4 in enumerate((1, -1)):
                    op_b = proj["3"][s3] @ proj["4"][s4] @ proj["3"][s3]
                    values[i1, i2, i3, i4] = _singlet_value(op_a, op_b)
    p_seq = OutcomeTable(values, kind="probability")
    tables["p1234"] = p_seq

    late = np.abs(values.sum(axis=(1, 3)) - tables["p13"].values)
    early = np.abs(values.sum(axis=(0, 2)) - tables["p24"].values)
    chars = {0: "p", 1: "m"}
    seqsum_late = tuple(
        Slack(f"seqsum_late_{chars[i]}{chars[j]}", float(late[i, j]))
        for i in range(2)
        for j in range(2)
    )
    seqsum_early = tuple(
        Slack(f"seqsum_early_{chars[i]}{chars[j]}", float(early[i, j]))
        for i in range(2)
        for j in range(2)
    )

    return EPRBResult(
        model=model,
        tables=tables,
        correlators=correlators,
        chsh=chsh,
        nosignal=tuple(nosignal),
        seqsum_late=seqsum_late,
        seqsum_early=seqsum_early,
    )


def classical_markov_moments(flip_rate: float, bias: float, times) -> MomentSet:
    """Moments of a classical telegraph signal (two-state Markov jump process).

    The process starts at the first listed time with the given bias; flips
    occur at the given Poisson rate, so correlators decay as
    exp(-2*flip_rate*(tj - ti)) independently of the bias. Three-time sets
    include the triple moment bias*exp(-2*flip_rate*(t3 - t2)).
    """
    gamma = float(flip_rate)
    b = float(bias)
    if not np.isfinite(gamma) or gamma < 0:
        raise ValueError(f"flip rate must be >= 0, got {flip_rate!r}")
    if abs(b) > 1.0 + 1e-12:
        raise ValueError(f"bias must lie in [-1, 1], got {bias!r}")
    ts = tuple(float(t) for t in times)
    if len(ts) not in (3, 4):
        raise ValueError(f"times must list 3 or 4 values, got {len(ts)}")
    if any(y >= x for x, y in zip(ts[1:], ts)):
        raise ValueError(f"times must be strictly increasing, got {ts}")

    def decay(dt: float) -> float:
        return float(np.exp(-2.0 * gamma * dt))

    singles = tuple(b * decay(t - ts[0]) for t in ts)
    pair_keys = ((0, 1), (0, 2), (1, 2)) if len(ts) == 3 else ((0, 1), (1, 2), (2, 3), (0, 3))
    pairs = {(i, j): decay(ts[j] - ts[i]) for i, j in pair_keys}
    triple = b * decay(ts[2] - ts[1]) if len(ts) == 3 else None
    return MomentSet(singles=singles, pairs=pairs, triple=triple)


@dataclass(frozen=True, eq=False)
class NegativeQuasiInstance:
    """A found dim >= 3 case: some q(n1,n2) < 0 with NSIT holding exactly."""

    state: State
    family1: tuple
    family2: tuple
    q_min: float
    nsit_dev: float


def _haar_unitary(rng, dim: int) -> np.ndarray:
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(a)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def search_negative_quasi(seed: int, dim: int = 3, attempts: int = 200) -> list:
    """Search for negative fine-grained quasi-probability under exact NSIT.

    Strategy: first family is the computational basis, second a Haar-random
    basis. A traceless Hermitian perturbation O with zero diagonal is solved
    to be invisible to the second basis (<u_k|O|u_k> = 0 for all k); then
    rho = 1/dim + eps*O satisfies the no-signaling equality exactly while
    q(n1,n2) = Re <u_n2|n1><n1|rho|u_n2> can dip negative. Returns the list
    of instances found (q_min < -1e-10, deviation <= 1e-12).
    """
    if dim < 3:
        raise ValueError(f"degeneracy-breaking search needs dim >= 3, got {dim}")
    rng = np.random.default_rng(seed)
    eye = np.eye(dim)
    family1 = tuple(Projector(np.outer(eye[n], eye[n])) for n in range(dim))
    found = []
    n_off = dim * (dim - 1) // 2
    for _ in range(int(attempts)):
        u = _haar_unitary(rng, dim)
        # rows: <u_k|O|u_k> = sum_{i<j} 2 Re(conj(u_ik) u_jk O_ij) = 0
        rows = np.zeros((dim, 2 * n_off))
        col_pairs = [(i, j) for i in range(dim) for j in range(i + 1, dim)]
        for k in range(dim):
            for c, (i, j) in enumerate(col_pairs):
                z = np.conj(u[i, k]) * u[j, k]
                rows[k, 2 * c] = 2.0 * z.real
                rows[k, 2 * c + 1] = -2.0 * z.imag
        _, svals, vt = np.linalg.svd(rows)
        rank = int(np.sum(svals > 1e-10 * svals[0]))
        null = vt[rank:]
        if null.shape[0] == 0:
            continue
        weights = rng.normal(size=null.shape[0])
        params = weights @ null
        o = np.zeros((dim, dim), dtype=complex)
        for c, (i, j) in enumerate(col_pairs):
            o[i, j] = params[2 * c] + 1j * params[2 * c + 1]
            o[j, i] = np.conj(o[i, j])
        lam = np.linalg.eigvalsh(o)
        lo = float(lam[0])
        if lo > -1e-12:
            continue
        eps = 0.999 / (dim * abs(lo))
        state = State(eye / dim + eps * o)
        family2 = tuple(Projector(np.outer(u[:, k], u[:, k].conj())) for k in range(dim))
        p, q = degeneracy_probs(state, family1, family2)
        p2 = np.array([float(np.trace(matrix(pr) @ matrix(state)).real) for pr in family2])
        dev = float(np.max(np.abs(p.values.sum(axis=0) - p2)))
        q_min = float(q.values.min())
        if q_min < -1e-10 and dev <= 1e-12:
            found.append(
                NegativeQuasiInstance(
                    state=state, family1=family1, family2=family2, q_min=q_min, nsit_dev=dev
                )
            )
    return found
