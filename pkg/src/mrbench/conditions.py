"""Macrorealism conditions: augmented Leggett-Garg inequalities, no-signaling
in time equalities, and the weak/intermediate/strong classification.

Slack conventions:
    * inequality slacks (names "lg2_*", "lg3_*", "lg4_*", "eiglg_*") are the
      left-hand sides of ">= 0" forms; satisfied iff value >= -eps;
    * equality deviations (names "nsit_*") are absolute values; satisfied
      iff value <= eps.

Verdicts are recomputable from the named slacks alone (see
verdicts_from_slacks), which the report type relies on.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .measure import (
    MomentSet,
    OutcomeTable,
    Schedule,
    moment_set,
    seq_prob,
    sign_tuples,
)
from .qops import DichotomicObservable, Hamiltonian, State

__all__ = [
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
]

DEFAULT_EPS = 1e-9

LG3_SIGNS = ((1, 1, 1), (-1, -1, 1), (1, -1, -1), (-1, 1, -1))

MR_INT_NSIT = ("nsit_sum1_keep2", "nsit_sum1_keep3", "nsit_sum2_keep3")
MR_STRONG_NSIT = ("nsit_sum2_keep3", "nsit_sum1_keep23", "nsit_sum2_keep13")


@dataclass(frozen=True)
class Slack:
    """A named scalar: inequality left-hand side or equality deviation."""

    name: str
    value: float


@dataclass(frozen=True)
class ConditionReport:
    """Named slacks plus the hierarchy verdicts evaluated at `tolerance`.

    mr_int and mr_strong are None for reports that do not carry the
    sequential three-time conditions (e.g. the four-time bench).
    """

    slacks: tuple
    tolerance: float
    mr_weak: bool
    mr_int: bool = None
    mr_strong: bool = None

    @property
    def verdicts(self) -> dict:
        return {"mr_weak": self.mr_weak, "mr_int": self.mr_int, "mr_strong": self.mr_strong}

    def slack(self, name: str) -> float:
        for s in self.slacks:
            if s.name == name:
                return s.value
        raise KeyError(name)

    def group(self, prefix: str) -> list:
        return [s for s in self.slacks if s.name.startswith(prefix)]


def _sign_chars(signs) -> str:
    return "".join("p" if s == 1 else "m" for s in signs)


def lg2_check(m: MomentSet, pair) -> list:
    """Four two-time Leggett-Garg slacks 1 + si<Qi> + sj<Qj> + si sj Cij.

    Sign order (si,sj): (+,+), (+,-), (-,+), (-,-). Names use 1-based time
    labels, e.g. lg2_12_pm.
    """
    i, j = int(pair[0]), int(pair[1])
    c = m.pair(i, j)
    qi, qj = m.singles[i], m.singles[j]
    out = []
    for si, sj in sign_tuples(2):
        value = 1.0 + si * qi + sj * qj + si * sj * c
        out.append(Slack(f"lg2_{i + 1}{j + 1}_{_sign_chars((si, sj))}", value))
    return out


def lg3_check(c12: float, c23: float, c13: float) -> list:
    """Four three-time Leggett-Garg slacks 1 +/- C12 +/- C23 +/- C13.

    The four sign patterns are the ones with an even number of minus signs:
    (+,+,+), (-,-,+), (+,-,-), (-,+,-), in that order.
    """
    out = []
    for a, b, c in LG3_SIGNS:
        value = 1.0 + a * c12 + b * c23 + c * c13
        out.append(Slack(f"lg3_{_sign_chars((a, b, c))}", value))
    return out


def lg4_check(m: MomentSet) -> list:
    """Eight four-time Leggett-Garg slacks.

    For each placement of the single minus sign among (C12, C23, C34, C14),
    the combination K must satisfy -2 <= K <= 2; slacks are 2 + K ("lo")
    and 2 - K ("hi"). Placement order: 12, 23, 34, 14.
    """
    if m.arity != 4:
        raise ValueError(f"four-time check needs a 4-time moment set, got arity {m.arity}")
    cycle = ((0, 1), (1, 2), (2, 3), (0, 3))
    values = {p: m.pair(*p) for p in cycle}
    out = []
    for minus in cycle:
        k = sum(-v if p == minus else v for p, v in values.items())
        label = f"{minus[0] + 1}{minus[1] + 1}"
        out.append(Slack(f"lg4_{label}_lo", 2.0 + k))
        out.append(Slack(f"lg4_{label}_hi", 2.0 - k))
    return out


def eigenstate_lg(q2: float, q3: float, c23: float) -> list:
    """The four three-time LG slacks in eigenstate-reduced form.

    When the initial state is a Q(t1) eigenstate (so C12 = <Q2> and
    C13 = <Q3>), the three-time inequalities collapse to
    1 +/- <Q2> +/- <Q3> +/- C23 with an even number of minus signs; these
    coincide with the (2,3) two-time set and with
    lg3_check(<Q2>, C23, <Q3>) up to ordering.
    """
    combos = ((1, 1, 1), (-1, -1, 1), (1, -1, -1), (-1, 1, -1))
    out = []
    for a, b, c in combos:
        value = 1.0 + a * q2 + b * q3 + c * c23
        out.append(Slack(f"eiglg_{_sign_chars((a, b, c))}", value))
    return out


def nsit_deviation(coarse: OutcomeTable, fine: OutcomeTable, summed_axis: int, condition: str) -> list:
    """Per-outcome no-signaling-in-time deviations.

    Marginalizes `fine` over `summed_axis` and returns
    |marginal - coarse| per retained outcome as named slacks. The condition
    holds at tolerance eps iff every deviation is <= eps.
    """
    if fine.arity != coarse.arity + 1:
        raise ValueError(
            f"fine table arity {fine.arity} must exceed coarse arity {coarse.arity} by one"
        )
    if not 0 <= summed_axis < fine.arity:
        raise ValueError(f"summed axis {summed_axis} out of range for arity {fine.arity}")
    marg = fine.values.sum(axis=summed_axis)
    if marg.shape != coarse.values.shape:
        raise ValueError(
            f"marginal shape {marg.shape} does not match coarse shape {coarse.values.shape}"
        )
    dev = np.abs(marg - coarse.values)
    out = []
    for idx in np.ndindex(*dev.shape):
        if all(n == 2 for n in dev.shape):
            suffix = _sign_chars(tuple(1 - 2 * i for i in idx))
        else:
            suffix = "_".join(str(i) for i in idx)
        out.append(Slack(f"{condition}_{suffix}", float(dev[idx])))
    return out


def max_deviation(slacks) -> float:
    return max(s.value for s in slacks)


def _group_values(slacks, prefixes) -> list:
    vals = []
    for s in slacks:
        if any(s.name.startswith(p + "_") or s.name == p for p in prefixes):
            vals.append(s.value)
    return vals


def verdicts_from_slacks(slacks, eps: float) -> dict:
    """Recompute the hierarchy verdicts from named slacks alone.

    mr_weak: every lg2/lg3 (or lg2/lg4) slack >= -eps.
    mr_int: the three two-time NSIT deviations <= eps and lg3 >= -eps.
    mr_strong: NSIT_(2)3, NSIT_(1)23, NSIT_1(2)3 deviations <= eps.
    Verdicts whose inputs are absent come back None.
    """
    lg_weak = _group_values(slacks, ["lg2", "lg3", "lg4"])
    lg3 = _group_values(slacks, ["lg3"])
    int_nsit = _group_values(slacks, list(MR_INT_NSIT))
    strong_nsit = _group_values(slacks, list(MR_STRONG_NSIT))

    mr_weak = min(lg_weak) >= -eps if lg_weak else None
    mr_int = None
    if int_nsit and lg3:
        mr_int = max(int_nsit) <= eps and min(lg3) >= -eps
    mr_strong = max(strong_nsit) <= eps if strong_nsit else None
    return {"mr_weak": mr_weak, "mr_int": mr_int, "mr_strong": mr_strong}


def _classify_tables(m: MomentSet, p123, p12, p13, p23, p2, p3, eps: float) -> ConditionReport:
    # shared by classify and run_precession, which already has the tables
    if eps < 0:
        raise ValueError(f"tolerance must be nonnegative, got {eps}")
    slacks = []
    for pair in ((0, 1), (0, 2), (1, 2)):
        slacks.extend(lg2_check(m, pair))
    slacks.extend(lg3_check(m.pair(0, 1), m.pair(1, 2), m.pair(0, 2)))

    slacks.extend(nsit_deviation(p2, p12, 0, "nsit_sum1_keep2"))
    slacks.extend(nsit_deviation(p3, p13, 0, "nsit_sum1_keep3"))
    slacks.extend(nsit_deviation(p3, p23, 0, "nsit_sum2_keep3"))
    slacks.extend(nsit_deviation(p23, p123, 0, "nsit_sum1_keep23"))
    slacks.extend(nsit_deviation(p13, p123, 1, "nsit_sum2_keep13"))

    verdicts = verdicts_from_slacks(slacks, eps)
    return ConditionReport(slacks=tuple(slacks), tolerance=eps, **verdicts)


def classify(rho: State, Q: DichotomicObservable, H: Hamiltonian, times, eps: float = DEFAULT_EPS) -> ConditionReport:
    """Full three-time macrorealism classification of one scenario.

    Computes the 12 two-time and 4 three-time LG slacks from the
    no-measurement moment set, the five NSIT deviation groups from
    sequential tables, and the three hierarchy verdicts at tolerance eps.
    """
    ts = tuple(float(t) for t in times)
    if len(ts) != 3:
        raise ValueError(f"classification needs exactly 3 times, got {len(ts)}")

    m = moment_set(rho, Q, H, ts)
    t1, t2, t3 = ts
    p123 = seq_prob(rho, Q, H, Schedule(ts))
    p12 = seq_prob(rho, Q, H, Schedule((t1, t2)))
    p13 = seq_prob(rho, Q, H, Schedule((t1, t3)))
    p23 = seq_prob(rho, Q, H, Schedule((t2, t3)))
    p2 = seq_prob(rho, Q, H, Schedule((t2,)))
    p3 = seq_prob(rho, Q, H, Schedule((t3,)))
    return _classify_tables(m, p123, p12, p13, p23, p2, p3, eps)
