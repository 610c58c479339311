"""Gradation slicing of the canonical ODE into a three-term recurrence.

A second-order ODE of the shape

    (a3 z^3 + a2 z^2 + a1 z) phi'' + (b2 z^2 + b1 z + b0) phi' + (c1 z + c0) phi = 0

acts on the monomial z^k by shifting its degree by at most one.  Collecting
the action by that shift ("grade") gives three quadratic-in-k multiplicator
functions:

    F_{+1}(k) = k (k-1) a3 + k b2 + c1
    F_{ 0}(k) = k (k-1) a2 + k b1 + c0
    F_{-1}(k) = k (k-1) a1 + k b0

A degree-n polynomial solution ``sum_k P[n,k] z^(n-k)`` exists when
``F_{+1}(n) = 0`` (the baseline condition, which pins one model parameter)
and the coefficients satisfy the descending three-term recurrence coded in
:func:`run_ttrr`.  The leftover relation that cannot be absorbed — the
grade-(-1) action on the constant term — is the *constraint polynomial* in
the one remaining free (scan) parameter; its roots select the solvable
members of the family.

All arithmetic here is number-type generic: model tables built from
:class:`fractions.Fraction` values run exactly, which the tests use as an
oracle for the floating-point path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import DivisionByZeroMultiplicator, NotARoot
from .polynomials import (
    poly_add,
    poly_deriv,
    poly_eval,
    poly_eval_mag,
    poly_mul,
    poly_mul_linear,
    poly_scale,
)

# Rescale a running chain member once its largest coefficient passes this.
_RESCALE_AT = 1e150
# Backward-error threshold for "this scan value annihilates the constraint".
_ROOT_BWD_TOL = 1e-8


@dataclass(frozen=True)
class OdeCoefficients:
    """Coefficients of the canonical ODE at one fixed scan value.

    For energy-scan models the constant term is affine in the energy,
    ``c0 = c0_base + sigma_e * E``; the split is recorded so callers can
    reconstruct the scan dependence without re-deriving the table.
    """

    a3: object
    a2: object
    a1: object
    b2: object
    b1: object
    b0: object
    c1: object
    c0: object
    c0_base: object = None
    sigma_e: object = None


def multiplicator_values(ode, k):
    """Grade (+1, 0, -1) multiplicators read directly off ODE coefficients.

    This is the definition, used in tests to cross-check every model's
    closed-form multiplicator table against its ODE coefficient table.
    """
    kk = k * (k - 1)
    f1 = kk * ode.a3 + k * ode.b2 + ode.c1
    f0 = kk * ode.a2 + k * ode.b1 + ode.c0
    fm1 = kk * ode.a1 + k * ode.b0
    return f1, f0, fm1


@dataclass(frozen=True)
class SliceMultiplicators:
    """Closed-form slice multiplicators of one model on its baseline.

    Each grade is stored as quadratic coefficients ``(q2, q1, q0)`` in the
    slice index ``k``; the grade-0 function additionally carries the scan
    variable linearly with slope ``sigma0``:

        F0(k; x) = q2 k^2 + q1 k + q0 + sigma0 * x

    The evaluation below groups terms as ``(q2 k^2 + q1 k) + q0`` on
    purpose: model tables build ``q0`` with the matching grouping so that
    the baseline zero ``F1(n) == 0`` comes out exact in floating point.
    """

    lead: tuple
    mid: tuple
    trail: tuple
    sigma0: object

    @staticmethod
    def _quad(coeffs, k):
        q2, q1, q0 = coeffs
        return (q2 * k * k + q1 * k) + q0

    def f1(self, k):
        return self._quad(self.lead, k)

    def f0_const(self, k):
        return self._quad(self.mid, k)

    def f0(self, k, x):
        return self._quad(self.mid, k) + self.sigma0 * x

    def fm1(self, k):
        return self._quad(self.trail, k)


@dataclass(frozen=True)
class BaselineSystem:
    """A model pinned to its baseline: everything the recurrence needs."""

    n: int
    mult: SliceMultiplicators
    scan_variable: str
    baseline_name: str
    baseline_value: object


def build_baseline(model):
    """Assemble the baseline recurrence data for a model instance."""
    name, value = model.baseline()
    return BaselineSystem(
        n=model.n,
        mult=model.multiplicators(),
        scan_variable=model.scan_name,
        baseline_name=name,
        baseline_value=value,
    )


@dataclass(frozen=True)
class ConstraintChain:
    """Chain of coefficient polynomials in the scan variable.

    ``members[k]`` holds P[n, k] (ascending coefficients); the terminal
    ``constraint`` polynomial has degree n+1 and its roots are the
    admissible scan values.  Floating-point runs rescale members by powers
    of two when coefficients threaten to overflow; ``member_exp2[k]`` is the
    binary exponent to restore the true value (exact runs keep all zeros).
    """

    n: int
    members: tuple
    member_exp2: tuple
    constraint: tuple
    constraint_exp2: int
    b0: object
    c0_const: object
    sigma0: object


def _is_exact(value):
    return isinstance(value, (int, Fraction))


def _max_abs(coeffs):
    return max((abs(float(c)) for c in coeffs), default=0.0)


def run_ttrr(system):
    """Run the descending three-term recurrence and extract the constraint.

    Starting from P[n,0] = 1, each slice k = 1..n resolves

        P[n,k] = -( F0(n+1-k; x) P[n,k-1] + Fm1(n+2-k) P[n,k-2] ) / F1(n-k)

    as a polynomial in the scan variable x.  The relation the chain cannot
    absorb — the grade-(-1) remnant of the last two members — is the
    constraint polynomial

        P(x) = Fm1(1) P[n,n-1] + F0(0; x) P[n,n].
    """
    mult = system.mult
    n = system.n
    sigma = mult.sigma0
    exact = (
        _is_exact(sigma)
        and all(_is_exact(c) for grp in (mult.lead, mult.mid, mult.trail) for c in grp)
    )

    prev, cur = [], [1 if exact else 1.0]
    exp2 = 0
    members = [tuple(cur)]
    exps = [0]
    for k in range(1, n + 1):
        f1 = mult.f1(n - k)
        if f1 == 0:
            raise DivisionByZeroMultiplicator(
                f"leading multiplicator vanishes at slice {n - k}; "
                "the recurrence cannot be continued"
            )
        new = poly_add(
            poly_scale(prev, -mult.fm1(n + 2 - k) / f1),
            poly_mul_linear(cur, -mult.f0_const(n + 1 - k) / f1, -sigma / f1),
        )
        prev, cur = cur, new
        members.append(tuple(cur))
        exps.append(exp2)
        if not exact:
            big = _max_abs(cur)
            if big > _RESCALE_AT:
                shrink = int(math.log2(big)) - 16
                factor = math.ldexp(1.0, -shrink)
                prev = poly_scale(prev, factor)
                cur = poly_scale(cur, factor)
                exp2 += shrink

    b0 = mult.fm1(1)
    c0_const = mult.f0_const(0)
    constraint = poly_add(
        poly_scale(prev, b0),
        poly_mul_linear(cur, c0_const, sigma),
    )
    return ConstraintChain(
        n=n,
        members=tuple(members),
        member_exp2=tuple(exps),
        constraint=tuple(constraint),
        constraint_exp2=exp2,
        b0=b0,
        c0_const=c0_const,
        sigma0=sigma,
    )


def assemble_solution(chain, root):
    """Monic polynomial solution S(z) at one root of the constraint.

    Returns ascending coefficients ``S[j]`` of ``S(z) = sum_j S[j] z^j``
    with ``S[n] = 1``: the member P[n, n-j] evaluated at the root supplies
    the coefficient of ``z^j``.

    Raises:
        NotARoot: the backward error of the constraint at ``root`` is too
            large for it to count as a zero.
    """
    value, mag = poly_eval_mag([float(c) for c in chain.constraint], float(root))
    # mag bounds |value| from above, so mag == 0 forces value == 0: an exact
    # root of a constraint whose terms all vanish at this point (e.g. the
    # n = 0 chain evaluated at scan value 0).  Only a genuinely nonzero
    # residual relative to the term magnitude disqualifies the root.
    if abs(value) > _ROOT_BWD_TOL * mag:
        raise NotARoot(
            f"constraint backward error {abs(value):.3g} / {mag:.3g} "
            f"at scan value {float(root):.6g}"
        )
    coeffs = []
    for j in range(chain.n + 1):
        member = chain.members[chain.n - j]
        exp = chain.member_exp2[chain.n - j]
        val = poly_eval(member, root)
        if exp:
            val = math.ldexp(float(val), exp)
        coeffs.append(val)
    return coeffs


@lru_cache(maxsize=64)
def exact_chain(system):
    """Replay the chain over `Fraction` images of the multiplicators.

    Every float multiplicator entry is a finite binary rational, so the
    replay is exact: the returned chain's members and constraint carry
    `Fraction` coefficients (never rescaled — all ``member_exp2`` stay 0).
    Cached per baseline system; treat the result as read-only.
    """
    mult = system.mult
    twin = BaselineSystem(
        n=system.n,
        mult=SliceMultiplicators(
            lead=tuple(Fraction(v) for v in mult.lead),
            mid=tuple(Fraction(v) for v in mult.mid),
            trail=tuple(Fraction(v) for v in mult.trail),
            sigma0=Fraction(mult.sigma0),
        ),
        scan_variable=system.scan_variable,
        baseline_name=system.baseline_name,
        baseline_value=system.baseline_value,
    )
    return run_ttrr(twin)


# Exact Newton polish: stop once the step is below scale / 10**32.
_POLISH_STEPS = 6
_POLISH_GRAIN = 1 << 200


def exact_solution(system, root):
    """Assemble S(z) at a constraint root with exact rational arithmetic.

    Two separate precision cliffs make the floating path useless for deep
    wells.  First, the floating chain evaluates each member at the root by
    Horner on coefficients that can sit 15+ orders of magnitude above the
    member's value there, so assembled low-order coefficients lose every
    correct digit.  Second, the coefficients are violently sensitive to the
    root position itself: constraint slopes reach ~1e12 while the solution
    needs the root to ~1e-30, far beyond float resolution — assembling at a
    merely float-accurate root yields a polynomial whose ODE defect is
    comparable to the solution itself.

    Both are curable because every multiplicator entry is a finite binary
    float — an exact rational — and the whole computation is field
    operations: the chain is replayed over `Fraction` images (cached per
    baseline system), the root is Newton-polished in that exact arithmetic
    (quadratic convergence: two steps from a float-accurate start), and the
    members are evaluated at the polished rational root.  O(n^3) bignum
    work, well under a millisecond at catalog sizes.

    Returns ascending exact coefficients of the monic S(z).

    Raises:
        NotARoot: ``root`` does not identify a constraint root (it drifts
            under polish, or the backward-error gate of
            :func:`assemble_solution` rejects it).
    """
    chain = exact_chain(system)
    x = Fraction(root)
    scale = max(Fraction(1), abs(x))
    derivative = poly_deriv(chain.constraint)
    moved = Fraction(0)
    for _ in range(_POLISH_STEPS):
        value = poly_eval(chain.constraint, x)
        if value == 0:
            break
        slope = poly_eval(derivative, x)
        if slope == 0:
            break
        step = value / slope
        x -= step
        # Newton squares the iterate's bit length each pass; unchecked, the
        # rational blows up to megabit denominators.  Rounding to a fixed
        # 200 fractional bits (~60 digits) keeps every evaluation cheap while
        # staying far inside the 1e-32 stopping tolerance.
        x = Fraction(round(x * _POLISH_GRAIN), _POLISH_GRAIN)
        moved += abs(step)
        if abs(step) <= scale / 10**32:
            break
    if moved > scale / 10**6:
        raise NotARoot(
            f"scan value {float(root):.6g} drifted by {float(moved):.3g} "
            "under exact Newton polish; it does not identify a root"
        )
    return assemble_solution(chain, x)


def ode_residual(ode, solution):
    """Residual polynomial of the ODE applied to a candidate solution.

    Computes A(z) S'' + B(z) S' + C(z) S with A, B, C rebuilt from the ODE
    coefficients; identically zero (to rounding) iff S solves the equation.
    """
    a = [0, ode.a1, ode.a2, ode.a3]
    b = [ode.b0, ode.b1, ode.b2]
    c = [ode.c0, ode.c1]
    d1 = poly_deriv(solution)
    d2 = poly_deriv(d1)
    return poly_add(
        poly_add(poly_mul(a, d2), poly_mul(b, d1)),
        poly_mul(c, list(solution)),
    )


def relative_ode_residual(ode, solution):
    """Max residual coefficient over the size of the largest contribution.

    The scale is floored at (largest ODE coefficient) * (largest solution
    coefficient): for a constant solution every derivative term vanishes and
    the one surviving product is the defect itself, which would otherwise
    make a perfectly solved equation read as relative residual 1.
    """
    a = [0, ode.a1, ode.a2, ode.a3]
    b = [ode.b0, ode.b1, ode.b2]
    c = [ode.c0, ode.c1]
    d1 = poly_deriv(solution)
    d2 = poly_deriv(d1)
    terms = [poly_mul(a, d2), poly_mul(b, d1), poly_mul(c, list(solution))]
    scale = max(_max_abs(t) for t in terms)
    scale = max(scale, _max_abs(a + b + c) * _max_abs(list(solution)))
    res = poly_add(poly_add(terms[0], terms[1]), terms[2])
    if scale == 0.0:
        return 0.0
    return _max_abs(res) / scale
