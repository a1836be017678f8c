"""Joint-distribution feasibility: explicit construction and an exact oracle.

Two independent routes decide whether given low-order moments admit a joint
probability distribution:

    * d_interval / joint3_construct -- closed-form bounds on the triple
      moment D from nonnegativity of the eight-entry expansion; the interval
      is non-empty exactly when the 12 two-time and 4 three-time LG slacks
      are all nonnegative, and its midpoint yields an explicit joint table;
    * lp_feasible -- a phase-1 simplex in exact rational arithmetic
      (Bland's rule, gmpy2 rationals) over the <= 16 dimensional joint
      simplex with one equality per marginal entry.

The two must agree; tests and the acceptance suite enforce it.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from gmpy2 import mpq

from .conditions import Slack, lg2_check, lg3_check, lg4_check
from .measure import MomentSet, OutcomeTable, probs_from_moments, sign_tuples

__all__ = [
    "EMPTY_TOL",
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
]

EMPTY_TOL = 1e-12
MAX_JOINT_SIZE = 16


@dataclass(frozen=True)
class DInterval:
    """Bounds on the triple moment D; empty iff lower > upper + 1e-12."""

    lower: float
    upper: float
    empty: bool


@dataclass(frozen=True)
class Joint3Result:
    """Outcome of the explicit three-time joint construction.

    When the interval is empty, `table` is None and `violated` names the
    negative LG slacks; otherwise `table` is the midpoint-D joint.
    """

    interval: DInterval
    table: OutcomeTable
    violated: tuple


@dataclass(frozen=True)
class Feasible4Result:
    """Four-time moment feasibility: all 16 + 8 slacks >= -eps."""

    feasible: bool
    slacks: tuple


def three_time_slacks(m: MomentSet) -> list:
    """The 16 augmented LG slacks (12 two-time + 4 three-time) of a 3-time set."""
    if m.arity != 3:
        raise ValueError(f"need a 3-time moment set, got arity {m.arity}")
    slacks = []
    for pair in ((0, 1), (0, 2), (1, 2)):
        slacks.extend(lg2_check(m, pair))
    slacks.extend(lg3_check(m.pair(0, 1), m.pair(1, 2), m.pair(0, 2)))
    return slacks


def _expansion_without_triple(m: MomentSet, signs) -> float:
    s1, s2, s3 = signs
    return (
        1.0
        + s1 * m.singles[0]
        + s2 * m.singles[1]
        + s3 * m.singles[2]
        + s1 * s2 * m.pair(0, 1)
        + s1 * s3 * m.pair(0, 2)
        + s2 * s3 * m.pair(1, 2)
    )


def d_interval(m: MomentSet) -> DInterval:
    """Admissible range of the triple moment D given singles and pairs.

    Sign tuples with s1 s2 s3 = -1 bound D from above, those with +1 from
    below. Non-empty exactly when the 16 slacks of three_time_slacks are
    all nonnegative.
    """
    if m.arity != 3:
        raise ValueError(f"need a 3-time moment set, got arity {m.arity}")
    lower = -np.inf
    upper = np.inf
    for s in sign_tuples(3):
        f = _expansion_without_triple(m, s)
        if s[0] * s[1] * s[2] == -1:
            upper = min(upper, f)
        else:
            lower = max(lower, -f)
    return DInterval(lower=float(lower), upper=float(upper), empty=lower > upper + EMPTY_TOL)


def joint3_construct(m: MomentSet) -> Joint3Result:
    """Explicit three-time joint distribution via the midpoint of the D interval.

    Returns the interval, the constructed table (kind "probability"; every
    marginal pair reproduces the two-time expansion exactly), and, when the
    interval is empty, the names of the violated LG inequalities.
    """
    interval = d_interval(m)
    if interval.empty:
        violated = tuple(s.name for s in three_time_slacks(m) if s.value < 0.0)
        return Joint3Result(interval=interval, table=None, violated=violated)
    d_mid = 0.5 * (interval.lower + interval.upper)
    completed = MomentSet(singles=m.singles, pairs=m.pairs, triple=d_mid)
    quasi = probs_from_moments(completed)
    # midpoint D keeps every entry >= (upper - lower)/16, so the raw values
    # satisfy the probability-kind validation without clipping and the
    # marginal identities stay exact
    table = OutcomeTable(quasi.values, kind="probability")
    return Joint3Result(interval=interval, table=table, violated=())


def feasible4(m: MomentSet, eps: float = 1e-9) -> Feasible4Result:
    """Four-time joint feasibility from the 16 two-time and 8 four-time slacks."""
    slacks = []
    for pair in ((0, 1), (1, 2), (2, 3), (0, 3)):
        slacks.extend(lg2_check(m, pair))
    slacks.extend(lg4_check(m))
    feasible = min(s.value for s in slacks) >= -eps
    return Feasible4Result(feasible=feasible, slacks=tuple(slacks))


def chsh_check(c13: float, c14: float, c23: float, c24: float) -> list:
    """Eight CHSH slacks: -2 <= K <= 2 for each single-minus placement.

    Placement order 13, 14, 23, 24; for each, slack "lo" = 2 + K and
    "hi" = 2 - K where K carries the minus sign on the named correlator.
    """
    values = {"13": c13, "14": c14, "23": c23, "24": c24}
    total = sum(values.values())
    out = []
    for label, c in values.items():
        k = total - 2.0 * c
        out.append(Slack(f"chsh_{label}_lo", 2.0 + k))
        out.append(Slack(f"chsh_{label}_hi", 2.0 - k))
    return out


@dataclass(frozen=True, eq=False)
class MarginalProblem:
    """Marginal-matching feasibility instance over a small product space.

    alphabet gives the outcome count per variable; each constraint is
    (indices, table) demanding that the joint's marginal on those variables
    equal the table entry-by-entry. Tables must be normalized; negative
    (quasi) entries are accepted and simply make the instance infeasible,
    which is the oracle's call to make. Consistency between overlapping
    constraints is not assumed.
    """

    alphabet: tuple
    constraints: tuple

    def __post_init__(self) -> None:
        alphabet = tuple(int(n) for n in self.alphabet)
        if not alphabet or any(n < 2 for n in alphabet):
            raise ValueError(f"alphabet sizes must all be >= 2, got {alphabet}")
        size = int(np.prod(alphabet))
        if size > MAX_JOINT_SIZE:
            raise ValueError(
                f"joint space size {size} exceeds supported bound {MAX_JOINT_SIZE}"
            )
        constraints = []
        for pos, (indices, table) in enumerate(self.constraints):
            idx = tuple(int(i) for i in indices)
            if not idx:
                raise ValueError(f"constraint {pos}: empty index set")
            if any(i < 0 or i >= len(alphabet) for i in idx):
                raise ValueError(f"constraint {pos}: indices {idx} out of range")
            if any(b <= a for a, b in zip(idx, idx[1:])):
                raise ValueError(f"constraint {pos}: indices {idx} must be strictly increasing")
            expected = tuple(alphabet[i] for i in idx)
            if table.alphabet != expected:
                raise ValueError(
                    f"constraint {pos}: table alphabet {table.alphabet} does not match "
                    f"declared sizes {expected}"
                )
            constraints.append((idx, table))
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "constraints", tuple(constraints))

    @property
    def n_variables(self) -> int:
        return len(self.alphabet)


@dataclass(frozen=True, eq=False)
class LpResult:
    """Verdict of the exact rational feasibility oracle.

    witness / witness_exact hold one feasible joint (float table and exact
    rationals keyed by outcome tuple) when feasible; rationalization_error
    bounds the input float -> rational rounding applied before solving.
    """

    feasible: bool
    witness: OutcomeTable
    witness_exact: dict
    rationalization_error: float


def three_time_problem(m: MomentSet) -> MarginalProblem:
    """Pairwise-marginal problem of a 3-time moment set (constraint per pair)."""
    if m.arity != 3:
        raise ValueError(f"need a 3-time moment set, got arity {m.arity}")
    constraints = []
    for i, j in ((0, 1), (0, 2), (1, 2)):
        sub = MomentSet(
            singles=(m.singles[i], m.singles[j]), pairs={(0, 1): m.pair(i, j)}
        )
        constraints.append(((i, j), probs_from_moments(sub)))
    return MarginalProblem(alphabet=(2, 2, 2), constraints=tuple(constraints))


def eprb_problem(p13: OutcomeTable, p14: OutcomeTable, p23: OutcomeTable, p24: OutcomeTable) -> MarginalProblem:
    """Four-marginal problem of the two-settings-per-side structure.

    Variables (0,1) are the two first-side settings, (2,3) the two
    second-side settings; the measured pairs are the four cross pairs.
    """
    return MarginalProblem(
        alphabet=(2, 2, 2, 2),
        constraints=(((0, 2), p13), ((0, 3), p14), ((1, 2), p23), ((1, 3), p24)),
    )


def _rationalize(x: float, max_denominator) -> Fraction:
    f = Fraction(float(x))
    if max_denominator is None:
        return f
    return f.limit_denominator(int(max_denominator))


def lp_feasible(problem: MarginalProblem, max_denominator: int = 10**9) -> LpResult:
    """Exact feasibility of a marginal problem over the joint simplex.

    Builds one equality row per marginal entry plus normalization, maps the
    right-hand sides to rationals (continued-fraction limited to
    max_denominator; None keeps the exact binary-float value), and runs a
    phase-1 simplex with Bland's rule in exact rational arithmetic. The
    verdict is exact for the rationalized instance; rationalization_error
    reports the largest input rounding.
    """
    variables = list(np.ndindex(*problem.alphabet))
    n_vars = len(variables)

    rows = []
    rhs = []
    rat_error = 0.0
    for indices, table in problem.constraints:
        for out_idx in np.ndindex(*table.alphabet):
            coeffs = [0] * n_vars
            for col, joint in enumerate(variables):
                if tuple(joint[i] for i in indices) == out_idx:
                    coeffs[col] = 1
            val = float(table.values[out_idx])
            frac = _rationalize(val, max_denominator)
            rat_error = max(rat_error, abs(float(Fraction(val) - frac)))
            rows.append(coeffs)
            rhs.append(frac)
    rows.append([1] * n_vars)
    rhs.append(Fraction(1))
    return _solve_rows(rows, rhs, problem.alphabet, variables, rat_error)


def lp_feasible_moments(m: MomentSet, max_denominator: int = 10**9) -> LpResult:
    """Exact joint feasibility of a three- or four-time moment set.

    Rationalizes the moment values themselves and expands the pair tables in
    exact arithmetic, so overlapping constraints stay consistent by
    construction. Rationalizing already-expanded float tables (as the generic
    lp_feasible must) makes overlapping marginals disagree at the last bit,
    and the exact solver rightly rejects such instances; this entry point is
    therefore the one to use when the input is a moment set. Three-time sets
    constrain all three pairs, four-time sets the cycle pairs
    (0,1), (1,2), (2,3), (0,3).
    """
    if m.arity == 3:
        pair_list = ((0, 1), (0, 2), (1, 2))
    elif m.arity == 4:
        pair_list = ((0, 1), (1, 2), (2, 3), (0, 3))
    else:
        raise ValueError(f"need a 3- or 4-time moment set, got arity {m.arity}")

    rat_error = 0.0
    singles = []
    for x in m.singles:
        frac = _rationalize(x, max_denominator)
        rat_error = max(rat_error, abs(float(Fraction(x) - frac)))
        singles.append(frac)
    pairs = {}
    for key in pair_list:
        x = m.pair(*key)
        frac = _rationalize(x, max_denominator)
        rat_error = max(rat_error, abs(float(Fraction(x) - frac)))
        pairs[key] = frac

    alphabet = (2,) * m.arity
    variables = list(np.ndindex(*alphabet))
    n_vars = len(variables)
    rows = []
    rhs = []
    for i, j in pair_list:
        for si, sj in sign_tuples(2):
            coeffs = [0] * n_vars
            for col, joint in enumerate(variables):
                if (1 - 2 * joint[i], 1 - 2 * joint[j]) == (si, sj):
                    coeffs[col] = 1
            rows.append(coeffs)
            rhs.append((1 + si * singles[i] + sj * singles[j] + si * sj * pairs[i, j]) / 4)
    rows.append([1] * n_vars)
    rhs.append(Fraction(1))
    return _solve_rows(rows, rhs, alphabet, variables, rat_error)


def _solve_rows(rows, rhs, alphabet, variables, rat_error: float) -> LpResult:
    # marginals of a nonnegative joint cannot be negative: presolve rejection
    if any(b < 0 for b in rhs):
        return LpResult(
            feasible=False, witness=None, witness_exact=None, rationalization_error=rat_error
        )
    n_vars = len(variables)
    tableau = [[mpq(c) for c in row] + [mpq(b.numerator, b.denominator)] for row, b in zip(rows, rhs)]
    feasible, solution = _phase1_simplex(tableau, n_vars)
    if not feasible:
        return LpResult(
            feasible=False, witness=None, witness_exact=None, rationalization_error=rat_error
        )
    witness_exact = {}
    values = np.zeros(alphabet, dtype=float)
    for col, joint in enumerate(variables):
        q = solution[col]
        witness_exact[joint] = Fraction(q.numerator, q.denominator)
        values[joint] = float(q)
    table = OutcomeTable(values, kind="probability")
    return LpResult(
        feasible=True,
        witness=table,
        witness_exact=witness_exact,
        rationalization_error=rat_error,
    )


def _phase1_simplex(tableau, n_vars: int):
    """Minimize the artificial-variable sum; exact rationals, Bland's rule.

    tableau rows are [a_1 .. a_n | b] with b >= 0; the starting basis is one
    artificial per row (labels n_vars + i, never re-entered). Returns
    (feasible, solution) with solution a list of mpq values.
    """
    zero = mpq(0)
    m = len(tableau)
    basis = [n_vars + i for i in range(m)]
    obj = [sum(row[j] for row in tableau) for j in range(n_vars + 1)]

    while True:
        entering = -1
        for j in range(n_vars):
            if obj[j] > zero:
                entering = j
                break
        if entering < 0:
            break
        pivot_row = -1
        best = None
        for i, row in enumerate(tableau):
            a = row[entering]
            if a > zero:
                ratio = row[n_vars] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[pivot_row]):
                    best = ratio
                    pivot_row = i
        if pivot_row < 0:
            raise RuntimeError("phase-1 objective unbounded; constraint rows corrupted")
        prow = tableau[pivot_row]
        pivot = prow[entering]
        if pivot != 1:
            tableau[pivot_row] = prow = [x / pivot for x in prow]
        for i, row in enumerate(tableau):
            if i == pivot_row:
                continue
            factor = row[entering]
            if factor != zero:
                tableau[i] = [x - factor * y for x, y in zip(row, prow)]
        factor = obj[entering]
        if factor != zero:
            obj = [x - factor * y for x, y in zip(obj, prow)]
        basis[pivot_row] = entering

    if obj[n_vars] != zero:
        return False, None
    solution = [zero] * n_vars
    for i, b in enumerate(basis):
        if b < n_vars:
            solution[b] = tableau[i][n_vars]
    return True, solution
