"""Unit tests for the descending recurrence, chain assembly and exact replay."""

import math
from fractions import Fraction

import pytest

from conftest import solve_model, solved
from qespectra import models, polynomials, recurrence
from qespectra.errors import DivisionByZeroMultiplicator, NotARoot


# ---------------------------------------------------------------------------
# multiplicator plumbing
# ---------------------------------------------------------------------------

def test_multiplicator_values_is_the_quadratic_definition():
    ode = recurrence.OdeCoefficients(
        a3=2, a2=-1, a1=3, b2=5, b1=0, b0=-2, c1=7, c0=11,
    )
    f1, f0, fm1 = recurrence.multiplicator_values(ode, 3)
    kk = 3 * 2
    assert f1 == kk * 2 + 3 * 5 + 7
    assert f0 == kk * -1 + 3 * 0 + 11
    assert fm1 == kk * 3 + 3 * -2


def test_slice_multiplicators_grouping_and_scan_slope():
    mult = recurrence.SliceMultiplicators(
        lead=(1, -2, 3), mid=(0, 5, -1), trail=(2, 0, 0), sigma0=-4,
    )
    assert mult.f1(3) == 9 - 6 + 3
    assert mult.f0_const(2) == 10 - 1
    assert mult.f0(2, 0.5) == 9 + (-4) * 0.5
    assert mult.fm1(2) == 8


def test_build_baseline_reads_model_fields():
    model = models.make("coulomb", 2, {"lambda": Fraction(1, 2)})
    system = recurrence.build_baseline(model)
    assert system.n == 2
    assert system.scan_variable == "beta"
    assert system.baseline_name == "epsilon"
    assert system.baseline_value == 2


# ---------------------------------------------------------------------------
# chain construction against hand-solved instances
# ---------------------------------------------------------------------------

def test_coulomb_n1_constraint_by_hand():
    # F1(k) = n - k, F0(k; x) = x, Fm1(k) = k (k + 2 lam - 1):
    # P[1,1] = -x, constraint = 2 lam - x^2; roots +-1 at lam = 1/2.
    model = models.make("coulomb", 1, {"lambda": Fraction(1, 2)})
    system, chain, ttrr, roots = solve_model(model)
    assert chain.n == 1
    assert list(chain.members[0]) == [1]
    assert [float(c) for c in chain.members[1]] == [0.0, -1.0]
    constraint = [float(c) for c in chain.constraint]
    assert constraint == pytest.approx([1.0, 0.0, -1.0])
    assert roots.roots == pytest.approx([-1.0, 1.0])


def test_coulomb_n2_roots_by_hand():
    # constraint x^3/2 - 3x at lam = 1/2: roots -sqrt(6), 0, sqrt(6)
    model = models.make("coulomb", 2, {"lambda": Fraction(1, 2)})
    _, _, _, roots = solve_model(model)
    s6 = math.sqrt(6.0)
    assert roots.roots == pytest.approx([-s6, 0.0, s6], abs=1e-12)


def test_constraint_couples_the_last_two_members():
    # The constraint must be Fm1(1) * P[n,n-1] + F0(0; x) * P[n,n]
    # with both members exactly as stored on the chain.
    _, system, chain, _, _ = solved("razavy")
    b0 = system.mult.fm1(1)
    c0 = system.mult.f0_const(0)
    assert chain.b0 == b0
    assert chain.c0_const == c0
    lhs = polynomials.poly_add(
        polynomials.poly_scale(list(chain.members[chain.n - 1]), b0),
        polynomials.poly_mul_linear(
            list(chain.members[chain.n]), c0, chain.sigma0
        ),
    )
    # exact-parameter instance: the chain runs in Fraction arithmetic with
    # no rescaling, so the recombination must match coefficient for
    # coefficient, exactly
    assert chain.constraint_exp2 == chain.member_exp2[chain.n]
    assert list(lhs) == list(chain.constraint)


def test_division_by_zero_multiplicator():
    class BadMult:
        sigma0 = 1.0

        def f1(self, k):
            return 0.0

        def f0_const(self, k):
            return 1.0

        def f0(self, k, x):
            return 1.0 + x

        def fm1(self, k):
            return 1.0

    class BadSystem:
        n = 2
        mult = BadMult()
        scan_variable = "x"
        baseline_name = "none"
        baseline_value = 0

    with pytest.raises(DivisionByZeroMultiplicator):
        recurrence.run_ttrr(BadSystem())


# ---------------------------------------------------------------------------
# exact rational replay
# ---------------------------------------------------------------------------

RATIONAL_INSTANCES = [
    ("coulomb", 4, {"lambda": Fraction(1, 2)}),
    ("xie-even", 4, {"V1": 1, "V2": -6}),
    ("razavy", 4, {"xi": Fraction(1, 2), "alpha": 0, "beta": 1}),
    ("chen-even", 3, {"V1": Fraction(3, 16), "V3": 4, "g": Fraction(1, 3)}),
    ("dshg", 4, {"xi": Fraction(3, 7)}),
    ("perturbed-dshg", 4, {"xi": 2, "alpha": 2, "beta": 0}),
]


@pytest.mark.parametrize("model_id,n,params", RATIONAL_INSTANCES)
def test_exact_replay_matches_float_chain(model_id, n, params):
    """Fraction replay and float chain agree coefficient by coefficient."""
    model = models.make(model_id, n, params)
    system = recurrence.build_baseline(model)
    chain = recurrence.run_ttrr(system)
    exact = recurrence.exact_chain(system)
    assert exact.n == chain.n
    assert all(e == 0 for e in exact.member_exp2)
    for k in range(n + 1):
        floats = [
            math.ldexp(float(c), chain.member_exp2[k]) for c in chain.members[k]
        ]
        exacts = [float(c) for c in exact.members[k]]
        assert len(floats) == len(exacts)
        scale = max(1.0, max(abs(v) for v in exacts))
        for a, b in zip(floats, exacts):
            assert abs(a - b) <= 1e-12 * scale


def test_exact_chain_members_are_fractions():
    _, system, _, _, _ = solved("dshg")
    exact = recurrence.exact_chain(system)
    assert all(
        isinstance(c, (int, Fraction)) for member in exact.members for c in member
    )
    assert all(isinstance(c, (int, Fraction)) for c in exact.constraint)


# ---------------------------------------------------------------------------
# exact Newton polish / solution assembly
# ---------------------------------------------------------------------------

def test_exact_solution_coulomb_n1_is_z_minus_1():
    model = models.make("coulomb", 1, {"lambda": Fraction(1, 2)})
    system = recurrence.build_baseline(model)
    coeffs = recurrence.exact_solution(system, 1.0)
    assert [float(c) for c in coeffs] == [-1.0, 1.0]
    assert coeffs[-1] == 1  # monic


def test_exact_solution_polishes_a_float_accurate_root():
    # Feed a root perturbed at the float level; the polish must land within
    # 1e-25 of the true value sqrt(6) (far beyond float resolution).
    model = models.make("coulomb", 2, {"lambda": Fraction(1, 2)})
    system = recurrence.build_baseline(model)
    rough = math.sqrt(6.0)  # correctly rounded double, off by ~1e-17
    coeffs = recurrence.exact_solution(system, rough)
    # S(z) = z^2 - sqrt(6) z + ...: check the linear coefficient against a
    # 50-digit-rational sqrt(6)
    s6 = Fraction(math.isqrt(6 * 10 ** 100), 10 ** 50)
    assert abs(coeffs[1] + s6) < Fraction(1, 10 ** 25)


def test_exact_solution_iterates_stay_coarse_grained():
    # The polish rounds every iterate to 200 fractional bits, so the
    # returned coefficients must keep bounded denominators even for the
    # deepest chain in the suite.
    model, system, _, _, roots = solved("dshg")
    coeffs = recurrence.exact_solution(system, roots.roots[0])
    worst = max(Fraction(c).denominator.bit_length() for c in coeffs)
    assert worst < 5000


def test_exact_solution_rejects_a_non_root():
    _, system, _, _, roots = solved("dshg")
    not_root = roots.roots[0] + 1.0
    with pytest.raises(NotARoot):
        recurrence.exact_solution(system, not_root)


def test_exact_solution_accepts_exact_zero_root_of_n0_chain():
    # n = 0: the constraint is sigma * x; x = 0 is an exact root where both
    # the value and the Horner magnitude vanish — it must not be rejected.
    model = models.make("coulomb", 0, {"lambda": Fraction(1, 2)})
    system = recurrence.build_baseline(model)
    coeffs = recurrence.exact_solution(system, 0.0)
    assert [float(c) for c in coeffs] == [1.0]


def test_assemble_solution_float_path_matches_exact():
    model, system, chain, _, roots = solved("xie-even")
    root = roots.roots[0]
    floats = recurrence.assemble_solution(chain, root)
    exacts = recurrence.exact_solution(system, root)
    assert len(floats) == len(exacts)
    # the high-order coefficients are well-conditioned in float;
    # low-order ones are exactly what the exact path is for
    assert floats[-1] == pytest.approx(float(exacts[-1]))
    assert floats[-2] == pytest.approx(float(exacts[-2]), rel=1e-9)


# ---------------------------------------------------------------------------
# ODE residual of assembled solutions
# ---------------------------------------------------------------------------

def test_ode_residual_detects_wrong_solution():
    model = models.make("coulomb", 1, {"lambda": Fraction(1, 2)})
    ode = model.ode_coefficients(1.0)
    good = recurrence.exact_solution(recurrence.build_baseline(model), 1.0)
    bad = [c + Fraction(1, 10) for c in good]
    assert recurrence.relative_ode_residual(ode, [float(c) for c in good]) < 1e-14
    assert recurrence.relative_ode_residual(ode, [float(c) for c in bad]) > 1e-3


def test_ode_residual_zero_solution_is_zero():
    model = models.make("coulomb", 1, {"lambda": Fraction(1, 2)})
    ode = model.ode_coefficients(1.0)
    assert recurrence.relative_ode_residual(ode, [0.0, 0.0]) == 0.0
