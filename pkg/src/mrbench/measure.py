"""Measurement statistics for a dichotomic observable probed at several times.

Two routes to two-time statistics are kept deliberately distinct:

    * seq_prob        -- projective (Lueders) sequential measurement,
                         p(s1,..,sk) = Tr(P_k .. P_1 rho P_1 .. P_k);
    * quasi_prob2     -- symmetrized quasi-probability,
                         q(s1,s2) = Re Tr(P_2 P_1 rho),
                         which marginalizes exactly but may go negative.

They differ by an interference term proportional to <[Q1,Q2]Q1>; the
coherence witness is twice its magnitude.

Table axis convention: a size-2 axis is indexed 0 -> outcome +1,
1 -> outcome -1. General alphabets (degeneracy-broken measurements)
use plain 0-based indices.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .qops import (
    DichotomicObservable,
    Hamiltonian,
    Projector,
    State,
    heisenberg_matrix,
    matrix,
)

__all__ = [
    "SIGNS",
    "sign_index",
    "sign_tuples",
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
]

SIGNS = (1, -1)

SUM_TOL = 1e-10
NONNEG_TOL = 1e-12
RANGE_TOL = 1e-12

THREE_TIME_PAIRS = ((0, 1), (0, 2), (1, 2))
FOUR_TIME_PAIRS = ((0, 1), (1, 2), (2, 3), (0, 3))


def sign_index(s: int) -> int:
    if s == 1:
        return 0
    if s == -1:
        return 1
    raise ValueError(f"outcome sign must be +1 or -1, got {s!r}")


def sign_tuples(arity: int):
    """All sign tuples in table order: (+..+), .., (-..-)."""
    return itertools.product(SIGNS, repeat=arity)


@dataclass(frozen=True, eq=False)
class Schedule:
    """Strictly increasing measurement times with a measured/unmeasured mask.

    Unmeasured times are placeholders that keep moment labels aligned across
    contexts; they contribute no projectors to the statistics.
    """

    times: tuple
    measured: tuple = None

    def __post_init__(self) -> None:
        times = tuple(float(t) for t in self.times)
        if len(times) == 0:
            raise ValueError("schedule needs at least one time")
        if any(b >= a for a, b in zip(times[1:], times)):
            raise ValueError(f"times must be strictly increasing, got {times}")
        measured = self.measured
        if measured is None:
            measured = (True,) * len(times)
        measured = tuple(bool(m) for m in measured)
        if len(measured) != len(times):
            raise ValueError(
                f"mask length {len(measured)} does not match {len(times)} times"
            )
        if not any(measured):
            raise ValueError("schedule must measure at least one time")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "measured", measured)

    @property
    def measured_times(self) -> tuple:
        return tuple(t for t, m in zip(self.times, self.measured) if m)

    @property
    def arity(self) -> int:
        return sum(self.measured)


@dataclass(frozen=True, eq=False)
class OutcomeTable:
    """Real-valued table over measurement outcomes.

    kind "probability" requires entries >= -1e-12; kind "quasi" allows any
    sign. Both kinds must sum to 1 within 1e-10.
    """

    values: np.ndarray
    kind: str = "probability"
    times: tuple = None

    def __post_init__(self) -> None:
        v = np.array(self.values, dtype=float)
        if v.ndim == 0:
            raise ValueError("outcome table must have at least one axis")
        if not np.all(np.isfinite(v)):
            raise ValueError("outcome table contains non-finite entries")
        if self.kind not in ("probability", "quasi"):
            raise ValueError(f"kind must be 'probability' or 'quasi', got {self.kind!r}")
        total = float(v.sum())
        if abs(total - 1.0) > SUM_TOL:
            raise ValueError(f"outcome table must sum to 1, got {total!r}")
        if self.kind == "probability":
            lo = float(v.min())
            if lo < -NONNEG_TOL:
                raise ValueError(f"probability table has negative entry {lo!r}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        if self.times is not None:
            object.__setattr__(self, "times", tuple(float(t) for t in self.times))

    @property
    def arity(self) -> int:
        return self.values.ndim

    @property
    def alphabet(self) -> tuple:
        return self.values.shape

    def value(self, outcomes) -> float:
        """Entry at a tuple of outcomes: signs +/-1 on size-2 axes, else indices."""
        idx = []
        for axis, o in enumerate(outcomes):
            if self.values.shape[axis] == 2 and o in (1, -1):
                idx.append(sign_index(o))
            else:
                idx.append(int(o))
        return float(self.values[tuple(idx)])

    def sum_out(self, axis: int) -> "OutcomeTable":
        """Marginalize one axis; kind and remaining time labels carry over."""
        v = self.values.sum(axis=axis)
        times = None
        if self.times is not None:
            times = tuple(t for i, t in enumerate(self.times) if i != axis)
        return OutcomeTable(v, kind=self.kind, times=times)


def _pair_key(pair) -> tuple:
    i, j = (int(pair[0]), int(pair[1]))
    if i >= j:
        raise ValueError(f"pair indices must satisfy i < j, got {(i, j)}")
    return (i, j)


@dataclass(frozen=True, eq=False)
class MomentSet:
    """First and second moments <Q_i>, C_ij (and optionally the triple moment).

    Indices are 0-based positions in the underlying time list. All entries
    must lie in [-1, 1] within 1e-12.
    """

    singles: tuple
    pairs: Mapping[tuple, float] = field(default_factory=dict)
    triple: float = None

    def __post_init__(self) -> None:
        singles = tuple(float(x) for x in self.singles)
        if not 2 <= len(singles) <= 4:
            raise ValueError(f"moment set supports 2..4 times, got {len(singles)}")
        pairs = {}
        for key, val in dict(self.pairs).items():
            i, j = _pair_key(key)
            if j >= len(singles):
                raise ValueError(f"pair {key} out of range for {len(singles)} times")
            pairs[(i, j)] = float(val)
        for name, val in [(f"singles[{i}]", x) for i, x in enumerate(singles)] + [
            (f"pairs[{k}]", v) for k, v in pairs.items()
        ]:
            if not np.isfinite(val) or abs(val) > 1.0 + RANGE_TOL:
                raise ValueError(f"{name} = {val!r} outside [-1, 1]")
        triple = self.triple
        if triple is not None:
            triple = float(triple)
            if len(singles) != 3:
                raise ValueError("triple moment only applies to 3-time moment sets")
            if not np.isfinite(triple) or abs(triple) > 1.0 + RANGE_TOL:
                raise ValueError(f"triple = {triple!r} outside [-1, 1]")
        object.__setattr__(self, "singles", singles)
        object.__setattr__(self, "pairs", dict(pairs))
        object.__setattr__(self, "triple", triple)

    @property
    def arity(self) -> int:
        return len(self.singles)

    def pair(self, i: int, j: int) -> float:
        key = _pair_key((i, j))
        if key not in self.pairs:
            raise ValueError(f"pair {key} missing from moment set (has {sorted(self.pairs)})")
        return self.pairs[key]

    def has_pair(self, i: int, j: int) -> bool:
        return _pair_key((i, j)) in self.pairs


def _check_model(rho: State, Q: DichotomicObservable, H: Hamiltonian) -> None:
    if not (rho.dim == Q.dim == H.dim):
        raise ValueError(
            f"dimension mismatch: state {rho.dim}, observable {Q.dim}, Hamiltonian {H.dim}"
        )


def _sign_projectors(Q: DichotomicObservable, H: Hamiltonian, t: float) -> dict:
    qt = heisenberg_matrix(Q, H, t)
    eye = np.eye(Q.dim)
    return {s: 0.5 * (eye + s * qt) for s in SIGNS}


def seq_prob(rho: State, Q: DichotomicObservable, H: Hamiltonian, schedule: Schedule) -> OutcomeTable:
    """Sequential projective measurement statistics over the measured times.

    Returns an OutcomeTable of arity len(schedule.measured_times); entry
    (s1,..,sk) is Tr(P_k(t_k) .. P_1(t_1) rho P_1(t_1) .. P_k(t_k)) with the
    state updated by the Lueders rule at each measured time. Marginalizing
    the last measured time reproduces the table of the shortened schedule.
    """
    _check_model(rho, Q, H)
    times = schedule.measured_times
    projs = [_sign_projectors(Q, H, t) for t in times]
    arity = len(times)
    values = np.empty((2,) * arity)

    def descend(branch: np.ndarray, depth: int, idx: tuple) -> None:
        if depth == arity:
            values[idx] = float(np.trace(branch).real)
            return
        for s in SIGNS:
            p = projs[depth][s]
            descend(p @ branch @ p, depth + 1, idx + (sign_index(s),))

    descend(matrix(rho), 0, ())
    return OutcomeTable(values, kind="probability", times=times)


def quasi_prob2(rho: State, Q: DichotomicObservable, H: Hamiltonian, t1: float, t2: float) -> OutcomeTable:
    """Symmetrized two-time quasi-probability q(s1,s2) = Re Tr(P_2 P_1 rho).

    Marginalizes exactly to the single-time distributions at both times but
    may contain negative entries. Requires t1 <= t2; at t1 = t2 (or commuting
    dynamics) it coincides with seq_prob.
    """
    _check_model(rho, Q, H)
    if t1 > t2:
        raise ValueError(f"need t1 <= t2, got {t1} > {t2}")
    p1 = _sign_projectors(Q, H, t1)
    p2 = _sign_projectors(Q, H, t2)
    r = matrix(rho)
    values = np.empty((2, 2))
    for s1 in SIGNS:
        for s2 in SIGNS:
            sym = 0.5 * (p2[s2] @ p1[s1] + p1[s1] @ p2[s2])
            values[sign_index(s1), sign_index(s2)] = float(np.trace(sym @ r).real)
    return OutcomeTable(values, kind="quasi", times=(t1, t2))


def correlation(rho: State, Q: DichotomicObservable, H: Hamiltonian, ti: float, tj: float) -> float:
    """Symmetrized correlation <(Q_i Q_j + Q_j Q_i)/2>.

    The symmetrized product commutes with both Q_i and Q_j (a consequence of
    Q^2 = 1), equals the sign correlator of both seq_prob and quasi_prob2
    tables, and is symmetric in its time arguments; ti = tj gives 1.
    """
    _check_model(rho, Q, H)
    qi = heisenberg_matrix(Q, H, ti)
    qj = heisenberg_matrix(Q, H, tj)
    sym = 0.5 * (qi @ qj + qj @ qi)
    return float(np.trace(sym @ matrix(rho)).real)


def moment_set(rho: State, Q: DichotomicObservable, H: Hamiltonian, times) -> MomentSet:
    """No-measurement singles plus symmetrized pair correlators.

    Three times: pairs (0,1), (0,2), (1,2). Four times: the four-time bench
    set (0,1), (1,2), (2,3), (0,3) only. The triple moment is left absent.
    """
    _check_model(rho, Q, H)
    ts = tuple(float(t) for t in times)
    if len(ts) not in (3, 4):
        raise ValueError(f"moment_set needs 3 or 4 times, got {len(ts)}")
    if any(b >= a for a, b in zip(ts[1:], ts)):
        raise ValueError(f"times must be strictly increasing, got {ts}")
    r = matrix(rho)
    singles = []
    for t in ts:
        qt = heisenberg_matrix(Q, H, t)
        singles.append(float(np.trace(qt @ r).real))
    pair_keys = THREE_TIME_PAIRS if len(ts) == 3 else FOUR_TIME_PAIRS
    pairs = {(i, j): correlation(rho, Q, H, ts[i], ts[j]) for i, j in pair_keys}
    return MomentSet(singles=tuple(singles), pairs=pairs)


def probs_from_moments(m: MomentSet) -> OutcomeTable:
    """Moment expansion of a (quasi-)probability table.

    Arity 2: q(s1,s2) = (1 + s1<Q1> + s2<Q2> + s1 s2 C12)/4, needs pair (0,1).
    Arity 3: p(s1,s2,s3) = (1 + sum_i s_i<Q_i> + sum_{i<j} s_i s_j C_ij
    + s1 s2 s3 D)/8, needs all three pairs and the triple moment D.
    Returned kind is "quasi": positivity is exactly what is not guaranteed.
    """
    if m.arity == 2:
        c = m.pair(0, 1)
        values = np.empty((2, 2))
        for s1, s2 in sign_tuples(2):
            values[sign_index(s1), sign_index(s2)] = 0.25 * (
                1.0 + s1 * m.singles[0] + s2 * m.singles[1] + s1 * s2 * c
            )
        return OutcomeTable(values, kind="quasi")
    if m.arity == 3:
        if m.triple is None:
            raise ValueError("arity-3 expansion requires the triple moment D")
        c01, c02, c12 = m.pair(0, 1), m.pair(0, 2), m.pair(1, 2)
        values = np.empty((2, 2, 2))
        for s in sign_tuples(3):
            values[tuple(sign_index(x) for x in s)] = 0.125 * (
                1.0
                + s[0] * m.singles[0]
                + s[1] * m.singles[1]
                + s[2] * m.singles[2]
                + s[0] * s[1] * c01
                + s[0] * s[2] * c02
                + s[1] * s[2] * c12
                + s[0] * s[1] * s[2] * m.triple
            )
        return OutcomeTable(values, kind="quasi")
    raise ValueError(f"moment expansion defined for arity 2 or 3, got {m.arity}")


def moments_from_probs(table: OutcomeTable) -> MomentSet:
    """Linear extraction of moments from a dichotomic table (arity 2 or 3).

    Inverse of probs_from_moments. Applied to a sequential table the values
    are the context-dependent moments of that measurement arrangement.
    """
    if table.arity not in (2, 3):
        raise ValueError(f"moment extraction defined for arity 2 or 3, got {table.arity}")
    if any(n != 2 for n in table.alphabet):
        raise ValueError(f"moment extraction needs dichotomic axes, got alphabet {table.alphabet}")
    k = table.arity
    singles = []
    for axis in range(k):
        acc = 0.0
        for s in sign_tuples(k):
            acc += s[axis] * table.value(s)
        singles.append(acc)
    pairs = {}
    for i in range(k):
        for j in range(i + 1, k):
            acc = 0.0
            for s in sign_tuples(k):
                acc += s[i] * s[j] * table.value(s)
            pairs[(i, j)] = acc
    triple = None
    if k == 3:
        triple = 0.0
        for s in sign_tuples(3):
            triple += s[0] * s[1] * s[2] * table.value(s)
    return MomentSet(singles=tuple(singles), pairs=pairs, triple=triple)


def interference_term(rho: State, Q: DichotomicObservable, H: Hamiltonian, t1: float, t2: float) -> float:
    """(1/8) <[Q(t1), Q(t2)] Q(t1)>, the p-q mismatch amplitude.

    seq_prob and quasi_prob2 are related entry-by-entry by
    p(s1,s2) = q(s1,s2) + s2 * interference_term. Vanishes whenever the
    two-time commutator does, and for any state with no coherence between
    the Q(t1) eigenspaces.
    """
    _check_model(rho, Q, H)
    if t1 > t2:
        raise ValueError(f"need t1 <= t2, got {t1} > {t2}")
    q1 = heisenberg_matrix(Q, H, t1)
    q2 = heisenberg_matrix(Q, H, t2)
    op = (q1 @ q2 - q2 @ q1) @ q1
    val = complex(np.trace(op @ matrix(rho)))
    return 0.125 * val.real


def witness(rho: State, Q: DichotomicObservable, H: Hamiltonian, t1: float, t2: float):
    """Coherence witness W(s2) = |sum_{s1} p12(s1,s2) - p2(s2)|.

    Returned as (W(+1), W(-1)); the two values agree and equal twice the
    magnitude of interference_term.
    """
    _check_model(rho, Q, H)
    if t1 >= t2:
        raise ValueError(f"need t1 < t2, got {t1} >= {t2}")
    p12 = seq_prob(rho, Q, H, Schedule((t1, t2)))
    p2 = seq_prob(rho, Q, H, Schedule((t2,)))
    marg = p12.sum_out(0)
    return (
        abs(marg.value((1,)) - p2.value((1,))),
        abs(marg.value((-1,)) - p2.value((-1,))),
    )


def _check_family(family, dim: int, which: str) -> list:
    mats = [matrix(p) for p in family]
    if len(mats) != dim:
        raise ValueError(f"{which} family must have {dim} rank-1 projectors, got {len(mats)}")
    total = np.zeros((dim, dim), dtype=complex)
    for n, p in enumerate(mats):
        if p.shape != (dim, dim):
            raise ValueError(f"{which} family entry {n} has shape {p.shape}, expected {(dim, dim)}")
        tr = float(np.trace(p).real)
        if abs(tr - 1.0) > 1e-10:
            raise ValueError(f"{which} family entry {n} is not rank-1: trace {tr!r}")
        total += p
    if float(np.max(np.abs(total - np.eye(dim)))) > 1e-10:
        raise ValueError(f"{which} family is incomplete or non-orthogonal: sum != identity")
    for a in range(dim):
        for b in range(a + 1, dim):
            if float(np.max(np.abs(mats[a] @ mats[b]))) > 1e-10:
                raise ValueError(f"{which} family entries {a},{b} are not orthogonal")
    return mats


def degeneracy_probs(rho: State, family1: Sequence[Projector], family2: Sequence[Projector]):
    """Fine-grained two-time statistics for rank-1 projector families.

    family1 and family2 are complete orthogonal rank-1 families (the first
    and second measurement, already expressed at their respective times).
    Returns (p, q): the sequential table p(n1,n2) = Tr(P2 P1 rho P1) and the
    symmetrized quasi table q(n1,n2) = Re Tr(P2 P1 rho). q marginalizes over
    n1 to the undisturbed second-measurement distribution exactly, so
    |sum_{n1} p(n1,n2) - p2(n2)| = |sum_{n1} (p - q)(n1,n2)|.
    """
    d = rho.dim
    f1 = _check_family(family1, d, "first")
    f2 = _check_family(family2, d, "second")
    r = matrix(rho)
    p = np.empty((d, d))
    q = np.empty((d, d))
    for n1, p1 in enumerate(f1):
        for n2, p2 in enumerate(f2):
            p[n1, n2] = float(np.trace(p2 @ p1 @ r @ p1).real)
            q[n1, n2] = float(np.trace(p2 @ p1 @ r).real)
    return (
        OutcomeTable(p, kind="probability"),
        OutcomeTable(q, kind="quasi"),
    )
