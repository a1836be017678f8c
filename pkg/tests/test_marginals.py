from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from conftest import rand_qubit_model
from mrbench import (
    MarginalProblem,
    MomentSet,
    OutcomeTable,
    State,
    chsh_check,
    d_interval,
    eprb_problem,
    feasible4,
    joint3_construct,
    lp_feasible,
    lp_feasible_moments,
    moments_from_probs,
    moment_set,
    probs_from_moments,
    three_time_problem,
    three_time_slacks,
)

R2 = np.sqrt(2.0)


def rand_moments3(rng: np.random.Generator) -> MomentSet:
    s = rng.uniform(-1.0, 1.0, size=3)
    c = rng.uniform(-1.0, 1.0, size=3)
    return MomentSet(
        singles=tuple(s), pairs={(0, 1): c[0], (0, 2): c[1], (1, 2): c[2]}
    )


def rand_moments4(rng: np.random.Generator) -> MomentSet:
    s = rng.uniform(-1.0, 1.0, size=4)
    c = rng.uniform(-1.0, 1.0, size=4)
    return MomentSet(
        singles=tuple(s),
        pairs={(0, 1): c[0], (1, 2): c[1], (2, 3): c[2], (0, 3): c[3]},
    )


def pair_table(correlator: float) -> OutcomeTable:
    return probs_from_moments(
        MomentSet(singles=(0.0, 0.0), pairs={(0, 1): correlator})
    )


# ---------------------------------------------------------------- D interval


def test_d_interval_trivial_moments() -> None:
    m = MomentSet(singles=(0.0,) * 3, pairs={(0, 1): 0.0, (0, 2): 0.0, (1, 2): 0.0})
    iv = d_interval(m)
    assert (iv.lower, iv.upper, iv.empty) == (-1.0, 1.0, False)


def test_d_interval_deterministic_moments() -> None:
    # perfectly correlated outcomes pin the triple moment completely
    m = MomentSet(singles=(1.0,) * 3, pairs={(0, 1): 1.0, (0, 2): 1.0, (1, 2): 1.0})
    iv = d_interval(m)
    assert (iv.lower, iv.upper, iv.empty) == (1.0, 1.0, False)


def test_d_interval_frozen_empty() -> None:
    m = MomentSet(singles=(0.0,) * 3, pairs={(0, 1): -0.5, (0, 2): -0.5, (1, 2): -0.5})
    iv = d_interval(m)
    assert iv.empty
    assert iv.lower == pytest.approx(0.5, abs=1e-15)
    assert iv.upper == pytest.approx(-0.5, abs=1e-15)


def test_d_interval_needs_three_times() -> None:
    with pytest.raises(ValueError):
        d_interval(MomentSet(singles=(0.0, 0.0), pairs={(0, 1): 0.0}))


def test_d_interval_bounds_stay_in_unit_range() -> None:
    # each bound comes from four expansions averaging to one, so the lower
    # bound is never below -1 and the upper never above +1
    rng = np.random.default_rng(17)
    for _ in range(300):
        iv = d_interval(rand_moments3(rng))
        assert iv.lower >= -1.0 - 1e-12
        assert iv.upper <= 1.0 + 1e-12


def test_d_interval_empty_iff_lg_slack_negative() -> None:
    rng = np.random.default_rng(19)
    seen_empty = 0
    for _ in range(400):
        m = rand_moments3(rng)
        worst = min(s.value for s in three_time_slacks(m))
        iv = d_interval(m)
        assert iv.empty == (worst < 0.0)
        seen_empty += iv.empty
    assert 0 < seen_empty < 400


# ---------------------------------------------------------------- joint construction


def test_joint3_uniform() -> None:
    m = MomentSet(singles=(0.0,) * 3, pairs={(0, 1): 0.0, (0, 2): 0.0, (1, 2): 0.0})
    res = joint3_construct(m)
    assert res.violated == ()
    assert np.allclose(res.table.values, 0.125)
    assert res.table.kind == "probability"


def test_joint3_frozen_example() -> None:
    m = MomentSet(
        singles=(1.0, 0.5, -0.5), pairs={(0, 1): 0.5, (0, 2): -0.5, (1, 2): -0.5}
    )
    res = joint3_construct(m)
    assert res.interval.lower == pytest.approx(-0.5, abs=1e-15)
    assert res.interval.upper == pytest.approx(-0.5, abs=1e-15)
    expected = {
        (1, 1, 1): 0.125,
        (1, 1, -1): 0.625,
        (1, -1, 1): 0.125,
        (1, -1, -1): 0.125,
    }
    for signs, want in expected.items():
        assert res.table.value(signs) == pytest.approx(want, abs=1e-14)
    for s2 in (1, -1):
        for s3 in (1, -1):
            assert res.table.value((-1, s2, s3)) == pytest.approx(0.0, abs=1e-14)


def test_joint3_infeasible_names_violated_inequality() -> None:
    m = MomentSet(singles=(0.0,) * 3, pairs={(0, 1): -0.5, (0, 2): -0.5, (1, 2): -0.5})
    res = joint3_construct(m)
    assert res.table is None
    assert res.interval.empty
    assert res.violated == ("lg3_ppp",)


def test_joint3_reproduces_input_moments() -> None:
    rng = np.random.default_rng(23)
    checked = 0
    while checked < 40:
        m = rand_moments3(rng)
        res = joint3_construct(m)
        if res.table is None:
            continue
        checked += 1
        back = moments_from_probs(res.table)
        assert np.allclose(back.singles, m.singles, atol=1e-13)
        for pair in ((0, 1), (0, 2), (1, 2)):
            assert back.pair(*pair) == pytest.approx(m.pair(*pair), abs=1e-13)
        mid = 0.5 * (res.interval.lower + res.interval.upper)
        assert back.triple == pytest.approx(mid, abs=1e-13)


def test_joint3_pair_marginals_match_two_time_tables() -> None:
    rng = np.random.default_rng(29)
    checked = 0
    while checked < 25:
        m = rand_moments3(rng)
        res = joint3_construct(m)
        if res.table is None:
            continue
        checked += 1
        for (i, j), out_axis in (((0, 1), 2), ((0, 2), 1), ((1, 2), 0)):
            sub = MomentSet(
                singles=(m.singles[i], m.singles[j]), pairs={(0, 1): m.pair(i, j)}
            )
            marg = res.table.sum_out(out_axis)
            assert np.allclose(marg.values, probs_from_moments(sub).values, atol=1e-13)


def test_joint3_from_quantum_moments() -> None:
    # maximally mixed scenarios have zero singles, so feasibility rides on
    # the three-time inequalities alone; when a joint exists the constructed
    # table must be a valid probability table
    rng = np.random.default_rng(31)
    mixed = State(np.eye(2) / 2)
    feasible = 0
    for _ in range(200):
        _, Q, H, _ = rand_qubit_model(rng)
        m = moment_set(mixed, Q, H, np.sort(rng.uniform(0.0, 4.0, size=3)))
        res = joint3_construct(m)
        if res.table is not None:
            feasible += 1
            assert float(res.table.values.min()) >= -1e-12
    assert feasible > 10


# ---------------------------------------------------------------- four-time check


def test_feasible4_trivial() -> None:
    m = MomentSet(
        singles=(0.0,) * 4,
        pairs={(0, 1): 0.0, (1, 2): 0.0, (2, 3): 0.0, (0, 3): 0.0},
    )
    res = feasible4(m)
    assert res.feasible
    names = [s.name for s in res.slacks]
    expected = []
    for label in ("12", "23", "34", "14"):
        expected += [f"lg2_{label}_{sc}" for sc in ("pp", "pm", "mp", "mm")]
    for label in ("12", "23", "34", "14"):
        expected += [f"lg4_{label}_lo", f"lg4_{label}_hi"]
    assert names == expected
    assert len(names) == 24


def test_feasible4_frozen_quarter_period() -> None:
    c = R2 / 2
    m = MomentSet(
        singles=(0.0,) * 4,
        pairs={(0, 1): c, (1, 2): c, (2, 3): c, (0, 3): -c},
    )
    res = feasible4(m)
    assert not res.feasible
    worst = min(res.slacks, key=lambda s: s.value)
    assert worst.name == "lg4_14_hi"
    assert worst.value == pytest.approx(2.0 - 2.0 * R2, abs=1e-14)


def test_feasible4_markov_chain_moments() -> None:
    # exponentially decaying chain correlations always admit a joint
    c = 0.8
    m = MomentSet(
        singles=(0.0,) * 4,
        pairs={(0, 1): c, (1, 2): c, (2, 3): c, (0, 3): c**3},
    )
    res = feasible4(m)
    assert res.feasible
    assert min(s.value for s in res.slacks) >= 0.0


def test_feasible4_agrees_with_exact_oracle() -> None:
    # cycle-marginal feasibility is exactly the 16 + 8 slack conditions
    rng = np.random.default_rng(37)
    outcomes = {True: 0, False: 0}
    for _ in range(300):
        m = rand_moments4(rng)
        res = feasible4(m, eps=0.0)
        assert lp_feasible_moments(m, max_denominator=None).feasible == res.feasible
        outcomes[res.feasible] += 1
    assert outcomes[True] > 0 and outcomes[False] > 0


# ---------------------------------------------------------------- CHSH form


def test_chsh_trivial() -> None:
    slacks = chsh_check(0.0, 0.0, 0.0, 0.0)
    names = [s.name for s in slacks]
    assert names == [
        "chsh_13_lo",
        "chsh_13_hi",
        "chsh_14_lo",
        "chsh_14_hi",
        "chsh_23_lo",
        "chsh_23_hi",
        "chsh_24_lo",
        "chsh_24_hi",
    ]
    assert all(s.value == 2.0 for s in slacks)


def test_chsh_frozen_singlet_value() -> None:
    c = R2 / 2
    slacks = chsh_check(-c, c, -c, -c)
    worst = min(slacks, key=lambda s: s.value)
    assert worst.name == "chsh_14_lo"
    assert worst.value == pytest.approx(2.0 - 2.0 * R2, abs=1e-14)


def test_chsh_deterministic_strategies_never_violate() -> None:
    for a1 in (1, -1):
        for a2 in (1, -1):
            for b1 in (1, -1):
                for b2 in (1, -1):
                    slacks = chsh_check(a1 * b1, a1 * b2, a2 * b1, a2 * b2)
                    assert min(s.value for s in slacks) >= 0.0


# ---------------------------------------------------------------- problem containers


def test_marginal_problem_validation() -> None:
    good = pair_table(0.0)
    with pytest.raises(ValueError):
        MarginalProblem(alphabet=(2, 1), constraints=())
    with pytest.raises(ValueError):
        MarginalProblem(alphabet=(2,) * 5, constraints=())  # 32 > 16
    with pytest.raises(ValueError):
        MarginalProblem(alphabet=(2, 2), constraints=(((0, 2), good),))
    with pytest.raises(ValueError):
        MarginalProblem(alphabet=(2, 2), constraints=(((1, 0), good),))
    with pytest.raises(ValueError):
        MarginalProblem(alphabet=(2, 2), constraints=(((), good),))
    with pytest.raises(ValueError):
        MarginalProblem(
            alphabet=(2, 2), constraints=(((0,), OutcomeTable(np.full(3, 1 / 3))),)
        )
    p = MarginalProblem(alphabet=(2, 2, 2), constraints=(((0, 1), good),))
    assert p.n_variables == 3


def test_three_time_problem_structure() -> None:
    m = MomentSet(singles=(0.0,) * 3, pairs={(0, 1): 0.3, (0, 2): 0.1, (1, 2): 0.2})
    p = three_time_problem(m)
    assert p.alphabet == (2, 2, 2)
    assert [idx for idx, _ in p.constraints] == [(0, 1), (0, 2), (1, 2)]
    with pytest.raises(ValueError):
        three_time_problem(MomentSet(singles=(0.0, 0.0), pairs={(0, 1): 0.0}))


def test_eprb_problem_structure() -> None:
    tables = [pair_table(c) for c in (0.1, 0.2, 0.3, 0.4)]
    p = eprb_problem(*tables)
    assert p.alphabet == (2, 2, 2, 2)
    assert [idx for idx, _ in p.constraints] == [(0, 2), (0, 3), (1, 2), (1, 3)]


# ---------------------------------------------------------------- exact oracle


def test_lp_single_variable() -> None:
    table = OutcomeTable(np.array([0.3, 0.7]))
    res = lp_feasible(MarginalProblem(alphabet=(2,), constraints=(((0,), table),)))
    assert res.feasible
    assert np.allclose(res.witness.values, [0.3, 0.7], atol=1e-12)
    assert res.witness_exact[(0,)] == Fraction(3, 10)
    assert res.witness_exact[(1,)] == Fraction(7, 10)
    assert 0.0 < res.rationalization_error < 1e-15


def test_lp_exact_floats_have_zero_rationalization_error() -> None:
    table = OutcomeTable(np.array([0.25, 0.75]))
    res = lp_feasible(
        MarginalProblem(alphabet=(2,), constraints=(((0,), table),)),
        max_denominator=None,
    )
    assert res.feasible
    assert res.rationalization_error == 0.0
    assert res.witness_exact[(0,)] == Fraction(1, 4)


def test_lp_witness_reproduces_dyadic_tables_exactly() -> None:
    # dyadic entries survive float storage, so the generic table-level oracle
    # can be held to exact reproduction here
    m = MomentSet(
        singles=(0.25, -0.5, 0.0), pairs={(0, 1): 0.25, (0, 2): -0.25, (1, 2): 0.5}
    )
    problem = three_time_problem(m)
    res = lp_feasible(problem, max_denominator=None)
    assert res.feasible
    assert res.rationalization_error == 0.0
    for indices, table in problem.constraints:
        for out_idx in np.ndindex(*table.alphabet):
            total = sum(
                q
                for joint, q in res.witness_exact.items()
                if tuple(joint[i] for i in indices) == out_idx
            )
            assert total == Fraction(float(table.values[out_idx]))


def test_lp_moments_witness_reproduces_rationalized_moments_exactly() -> None:
    rng = np.random.default_rng(41)
    pairs = ((0, 1), (0, 2), (1, 2))
    checked = 0
    while checked < 10:
        m = rand_moments3(rng)
        res = lp_feasible_moments(m)
        if not res.feasible:
            continue
        checked += 1
        assert 0.0 < res.rationalization_error < 1e-9
        sign = {0: 1, 1: -1}
        for i, j in pairs:
            qi = Fraction(m.singles[i]).limit_denominator(10**9)
            qj = Fraction(m.singles[j]).limit_denominator(10**9)
            c = Fraction(m.pair(i, j)).limit_denominator(10**9)
            for si in (1, -1):
                for sj in (1, -1):
                    total = sum(
                        q
                        for joint, q in res.witness_exact.items()
                        if (sign[joint[i]], sign[joint[j]]) == (si, sj)
                    )
                    assert total == (1 + si * qi + sj * qj + si * sj * c) / 4


def test_lp_moments_rejects_other_arities() -> None:
    with pytest.raises(ValueError):
        lp_feasible_moments(MomentSet(singles=(0.0, 0.0), pairs={(0, 1): 0.0}))


def test_lp_singlet_statistics_infeasible() -> None:
    c = R2 / 2
    problem = eprb_problem(
        pair_table(-c), pair_table(c), pair_table(-c), pair_table(-c)
    )
    res = lp_feasible(problem)
    assert not res.feasible
    assert res.witness is None
    assert res.witness_exact is None


def test_lp_negative_entry_presolve() -> None:
    quasi = OutcomeTable(np.array([-0.1, 1.1]), kind="quasi")
    res = lp_feasible(MarginalProblem(alphabet=(2,), constraints=(((0,), quasi),)))
    assert not res.feasible


def test_lp_duplicate_constraints() -> None:
    table = pair_table(0.4)
    problem = MarginalProblem(
        alphabet=(2, 2), constraints=(((0, 1), table), ((0, 1), table))
    )
    assert lp_feasible(problem).feasible


def test_lp_inconsistent_overlap_infeasible() -> None:
    a = OutcomeTable(np.array([0.3, 0.7]))
    b = OutcomeTable(np.array([0.6, 0.4]))
    problem = MarginalProblem(alphabet=(2, 2), constraints=(((0,), a), ((0,), b)))
    assert not lp_feasible(problem).feasible


def test_lp_nonbinary_alphabet() -> None:
    tri = OutcomeTable(np.full(3, 1.0 / 3.0))
    duo = OutcomeTable(np.array([0.5, 0.5]))
    problem = MarginalProblem(
        alphabet=(3, 2), constraints=(((0,), tri), ((1,), duo))
    )
    res = lp_feasible(problem)
    assert res.feasible
    marg0 = res.witness.values.sum(axis=1)
    assert np.allclose(marg0, 1.0 / 3.0, atol=1e-12)


# ---------------------------------------------------------------- route agreement


def test_three_routes_agree() -> None:
    # interval construction, slack signs, and the exact oracle must give the
    # same verdict on the same moments
    rng = np.random.default_rng(43)
    counts = {True: 0, False: 0}
    for k in range(250):
        if k % 2 == 0:
            m = rand_moments3(rng)
        else:
            rho, Q, H, _ = rand_qubit_model(rng)
            m = moment_set(rho, Q, H, np.sort(rng.uniform(0.0, 4.0, size=3)))
        by_interval = not d_interval(m).empty
        by_slacks = min(s.value for s in three_time_slacks(m)) >= 0.0
        by_lp = lp_feasible_moments(m, max_denominator=None).feasible
        assert by_interval == by_slacks == by_lp
        counts[by_lp] += 1
    assert counts[True] > 0 and counts[False] > 0
