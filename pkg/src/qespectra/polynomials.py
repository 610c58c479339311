"""Dense polynomial arithmetic and constraint-polynomial root extraction.

Polynomials are plain Python sequences of coefficients in ascending order
(``p[k]`` multiplies ``x**k``); the zero polynomial is the empty list.  The
arithmetic helpers never call numpy, so the same code path runs on floats
and on :class:`fractions.Fraction` entries — exact rational replays of the
recurrence are used as an oracle in the test suite.

The second half of the module converts a terminating three-term recurrence
into its *canonical* monic form

    m_0 = 1,   m_k(y) = (y - d_k) m_{k-1}(y) - lam_k m_{k-2}(y)

in the rescaled scan variable ``y``.  When every product ``lam_k`` is
positive, the terminal member's roots are the eigenvalues of the symmetric
(Jacobi) tridiagonal matrix with diagonal ``d`` and off-diagonal
``sqrt(lam)``; they are therefore real and simple, and LAPACK's tridiagonal
solver delivers them to machine precision.  When every ``lam_k`` is
negative, no symmetric matrix exists (the chain can have complex zeros in
general), but the sign-flipped chain

    m_k(y) = (-y - d_k) m_{k-1}(y) + lam_k m_{k-2}(y),   lam_k > 0

is still the characteristic polynomial of a real *nonsymmetric* tridiagonal
comrade matrix, which the general eigensolver handles well; a Newton polish
through the recurrence itself then restores full accuracy.  Root finding on
monomial coefficients (companion matrix) is kept as an independent
cross-check.
"""

from __future__ import annotations

import math
import warnings
from fractions import Fraction
from dataclasses import dataclass

import numpy as np
from scipy import linalg as sla

from .errors import (
    ComplexRootDetected,
    DivisionByZeroMultiplicator,
    EigensolveFailure,
    NonPositiveLambda,
    SigmaZero,
    SimplicityWarning,
)

# Relative imaginary part above which an eigenvalue no longer counts as real.
_IMAG_TOL = 1e-8
# Roots closer than this fraction of the root span trigger SimplicityWarning.
_SIMPLE_RTOL = 1e-10

SIGN_PLUS = "plus"
SIGN_MINUS = "minus"


# ---------------------------------------------------------------------------
# dense coefficient arithmetic (number-type generic)
# ---------------------------------------------------------------------------

def trim(coeffs):
    """Drop trailing exact zeros; the zero polynomial becomes []."""
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return c


def degree(p):
    """Degree of ``p``; -1 for the zero polynomial."""
    return len(trim(p)) - 1


def poly_add(p, q):
    """Coefficient-wise sum."""
    if len(p) < len(q):
        p, q = q, p
    out = list(p)
    for k, c in enumerate(q):
        out[k] = out[k] + c
    return out


def poly_scale(p, s):
    """Multiply every coefficient by the scalar ``s``."""
    return [c * s for c in p]


def poly_mul_linear(p, a0, a1):
    """Product ``(a0 + a1*x) * p`` without general convolution."""
    if not p:
        return []
    out = [a0 * p[0]]
    for k in range(1, len(p)):
        out.append(a0 * p[k] + a1 * p[k - 1])
    out.append(a1 * p[-1])
    return out


def poly_mul(p, q):
    """Full convolution product."""
    if not p or not q:
        return []
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return out


def poly_deriv(p):
    """Formal derivative."""
    return [k * c for k, c in enumerate(p)][1:]


def poly_eval(p, x):
    """Horner evaluation; returns 0 for the zero polynomial."""
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def poly_eval_mag(p, x):
    """Horner evaluation together with the running magnitude sum.

    The magnitude accumulates |c_k| * |x|**k the same way Horner does, so
    ``abs(value) / mag`` is a backward-error indicator: values below a few
    ulps of ``mag`` are "zero to working precision".
    """
    acc = 0.0
    mag = 0.0
    ax = abs(x)
    for c in reversed(p):
        acc = acc * x + c
        mag = mag * ax + abs(c)
    return acc, mag


def exact_gcd(p, q):
    """Monic greatest common divisor of two exactly-represented polynomials.

    Coefficients are coerced to :class:`fractions.Fraction`, so the inputs
    must already be exact (ints or Fractions) — float coefficients carry
    rounding noise that makes almost every pair coprime, which is why the
    "do these two chain members share a zero?" question is answered on the
    exact rational replay of the recurrence, never on the float chain.

    Returns ascending monic coefficients; gcd(0, 0) is the empty list.
    """
    a = [Fraction(c) for c in trim(p)]
    b = [Fraction(c) for c in trim(q)]
    while b:
        # a mod b via exact long division; the remainder replaces a.
        db = len(b) - 1
        lead = b[-1]
        r = list(a)
        while len(r) - 1 >= db:
            factor = r[-1] / lead
            shift = len(r) - 1 - db
            for i in range(db):
                r[shift + i] -= factor * b[i]
            r.pop()
            while r and r[-1] == 0:
                r.pop()
        a, b = b, r
    if a:
        lead = a[-1]
        a = [c / lead for c in a]
    return a


# ---------------------------------------------------------------------------
# canonical three-term chain
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CanonicalTtrr:
    """Monic canonical form of a terminating three-term recurrence.

    Attributes:
        variant: ``"plus"`` when the original off-diagonal products are all
            positive (symmetric-solvable), ``"minus"`` when all negative.
        d: diagonal terms ``d_1 .. d_{n+1}`` of the canonical chain.
        lam: products ``lam_1 .. lam_{n+1}``; all strictly positive in both
            variants (the minus variant stores the absolute values).
            ``lam[0]`` is 1.0 by convention and multiplies nothing.
        scale, shift: affine map back to the physical scan variable,
            ``scan = scale * y + shift``.
    """

    variant: str
    d: tuple
    lam: tuple
    scale: float
    shift: float

    @property
    def size(self):
        return len(self.d)


@dataclass(frozen=True)
class RootSet:
    """Real simple roots of a constraint polynomial, ascending.

    ``residuals[i]`` is the absolute value of the (canonical) polynomial at
    the polished root; ``min_gap`` is the smallest distance between
    neighbouring roots, useful for spotting near-degenerate pairs.
    """

    roots: tuple
    residuals: tuple
    min_gap: float


def to_canonical_ttrr(system):
    """Reduce a baseline recurrence to canonical monic form.

    ``system`` is a :class:`~qespectra.recurrence.BaselineSystem` (any object
    with ``n`` and ``mult`` attributes works).  Writing the grade-0
    multiplicator as ``F0(k; x) = q(k) + sigma * x``, the raw members are
    rescaled to be monic in ``y = sigma * x``, which turns the recurrence
    into the canonical chain with

        d_k   = -q(n + 1 - k)
        lam_k = Fm1(n + 2 - k) * F1(n + 1 - k)

    for ``k = 1 .. n+1``.  The terminal member (one step past the last
    regular slice) is proportional to the constraint polynomial, so its
    roots are exactly the admissible scan values.

    Raises:
        SigmaZero: the scan variable is absent from the recurrence.
        DivisionByZeroMultiplicator: ``F1`` vanishes before the last step.
        NonPositiveLambda: the products are not all of one strict sign.
    """
    mult = system.mult
    n = system.n
    sigma = mult.sigma0
    if sigma == 0:
        raise SigmaZero("grade-0 multiplicator has no scan-variable term")
    for j in range(n):
        if mult.f1(j) == 0:
            raise DivisionByZeroMultiplicator(
                f"leading multiplicator vanishes at slice {j} < n={n}"
            )

    d = [-float(mult.f0_const(n + 1 - k)) for k in range(1, n + 2)]
    lam = [1.0]
    for k in range(2, n + 2):
        lam.append(float(mult.fm1(n + 2 - k)) * float(mult.f1(n + 1 - k)))

    tail = lam[1:]
    if all(v > 0 for v in tail):
        variant = SIGN_PLUS
    elif all(v < 0 for v in tail):
        variant = SIGN_MINUS
        d = [-v for v in d]
        lam = [1.0] + [-v for v in tail]
    elif not tail:
        variant = SIGN_PLUS  # n = 0: a single linear member, trivially symmetric
    else:
        raise NonPositiveLambda(
            f"mixed-sign chain products (min {min(tail):.3g}, max {max(tail):.3g}); "
            "no tridiagonal eigenproblem represents this chain"
        )
    return CanonicalTtrr(
        variant=variant,
        d=tuple(d),
        lam=tuple(lam),
        scale=1.0 / float(sigma),
        shift=0.0,
    )


def ttrr_terminal(ttrr, y):
    """Terminal chain member at ``y``: value, derivative and magnitude.

    The magnitude is the same recurrence run on absolute values, giving the
    natural backward-error scale for deciding whether a value is
    numerically zero.
    """
    plus = ttrr.variant == SIGN_PLUS
    p_prev, p = 0.0, 1.0
    dp_prev, dp = 0.0, 0.0
    m_prev, m = 0.0, 1.0
    for k in range(1, ttrr.size + 1):
        dk = ttrr.d[k - 1]
        lk = ttrr.lam[k - 1]
        if plus:
            lin, dlin, sgn = y - dk, 1.0, -1.0
        else:
            lin, dlin, sgn = -y - dk, -1.0, 1.0
        p_new = lin * p + sgn * lk * p_prev
        dp_new = dlin * p + lin * dp + sgn * lk * dp_prev
        m_new = abs(lin) * m + lk * m_prev
        p_prev, p = p, p_new
        dp_prev, dp = dp, dp_new
        m_prev, m = m, m_new
    return p, dp, m


def _comrade_matrix(ttrr):
    """Real tridiagonal companion ("comrade") matrix of a minus-variant chain.

    Column k encodes y*m_{k-1} = lam_k m_{k-2} - d_k m_{k-1} - m_k; dropping
    the final m_{n+1} is exactly working modulo the terminal member, so the
    eigenvalues are its roots.
    """
    m = ttrr.size
    T = np.zeros((m, m))
    for i in range(m):
        T[i, i] = -ttrr.d[i]
        if i + 1 < m:
            T[i + 1, i] = -1.0
        if i > 0:
            T[i - 1, i] = ttrr.lam[i]
    return T


def _polish_on(eval_fn, ys):
    """Damped Newton polish of a sorted root estimate vector.

    Each root may move at most a fraction of the gap to its nearest
    neighbour, so polishing can never reorder or merge the estimates.
    ``eval_fn(y) -> (value, derivative, magnitude)``.
    """
    ys = np.sort(np.asarray(ys, dtype=float))
    out = np.empty_like(ys)
    resid = np.empty_like(ys)
    n = len(ys)
    for i in range(n):
        gap = math.inf
        if i > 0:
            gap = min(gap, ys[i] - ys[i - 1])
        if i + 1 < n:
            gap = min(gap, ys[i + 1] - ys[i])
        cap = 0.4 * gap
        y = ys[i]
        v, dv, mag = eval_fn(y)
        best_y, best_v = y, abs(v)
        for _ in range(12):
            if dv == 0.0 or not math.isfinite(v):
                break
            step = -v / dv
            if abs(step) > cap:
                step = math.copysign(cap, step)
            y += step
            v, dv, mag = eval_fn(y)
            if abs(v) < best_v:
                best_y, best_v = y, abs(v)
            if abs(step) <= 1e-16 * (1.0 + abs(y)):
                break
        out[i] = best_y
        resid[i] = best_v
    return out, resid


def _finish_rootset(xs, resid):
    """Sort by physical value, compute min gap, warn on near-degeneracy."""
    order = np.argsort(xs)
    xs = xs[order]
    resid = resid[order]
    if len(xs) > 1:
        gaps = np.diff(xs)
        min_gap = float(gaps.min())
        span = float(xs[-1] - xs[0])
        if span > 0 and min_gap < _SIMPLE_RTOL * span:
            warnings.warn(
                f"two roots are only {min_gap:.3g} apart (span {span:.3g}); "
                "reporting both rather than merging",
                SimplicityWarning,
                stacklevel=3,
            )
    else:
        min_gap = math.inf
    return RootSet(
        roots=tuple(float(x) for x in xs),
        residuals=tuple(float(r) for r in resid),
        min_gap=min_gap,
    )


def real_roots(ttrr):
    """All roots of the terminal canonical member, by tridiagonal eigensolve.

    The plus variant goes through the symmetric Jacobi matrix (real simple
    roots guaranteed); the minus variant through the real comrade matrix,
    whose eigenvalues are checked for spurious imaginary parts and then
    polished through the chain recurrence.  Roots are returned in the
    physical scan variable, ascending.
    """
    if any(l <= 0 for l in ttrr.lam):
        raise NonPositiveLambda("canonical chain products must be positive")
    m = ttrr.size
    if ttrr.variant == SIGN_PLUS:
        if m == 1:
            ys = np.array([ttrr.d[0]])
        else:
            diag = np.asarray(ttrr.d, dtype=float)
            off = np.sqrt(np.asarray(ttrr.lam[1:], dtype=float))
            try:
                ys = sla.eigvalsh_tridiagonal(diag, off)
            except Exception as exc:  # pragma: no cover - LAPACK failure path
                raise EigensolveFailure(f"tridiagonal eigensolve failed: {exc}") from exc
    else:
        w = sla.eigvals(_comrade_matrix(ttrr))
        radius = float(np.abs(w).max()) or 1.0
        worst = float(np.abs(w.imag).max())
        if worst > _IMAG_TOL * radius:
            raise EigensolveFailure(
                f"comrade eigenvalues have imaginary parts up to {worst:.3g} "
                f"(radius {radius:.3g}); chain roots are not all real"
            )
        ys = np.sort(w.real)
    if not np.all(np.isfinite(ys)):
        raise EigensolveFailure("eigensolve produced non-finite values")

    ys, resid = _polish_on(lambda y: ttrr_terminal(ttrr, y), ys)
    xs = ttrr.scale * ys + ttrr.shift
    return _finish_rootset(xs, resid)


def real_roots_companion(coeffs):
    """Roots of a monomial-coefficient polynomial via the companion matrix.

    Independent cross-check for :func:`real_roots`.  Raises
    :class:`ComplexRootDetected` if any root has a relative imaginary part
    above the tolerance, since the constraint polynomials this package
    builds must have real roots.
    """
    # Seeds come from eigenvalues of the float companion matrix, but the
    # Newton polish keeps the caller's coefficients exact (ints, Fractions,
    # and floats are all finite rationals).  Anything less loses the
    # near-degenerate pairs twice over: rounding the coefficients displaces
    # a doublet root by (rounding / tiny slope), and float64 Horner noise in
    # the slope turns the Newton steps themselves into junk.
    exact_c = [Fraction(v) for v in trim(list(coeffs))]
    c = trim([float(v) for v in exact_c])
    if len(c) < 2:
        raise ValueError("need a polynomial of degree >= 1")
    r = np.roots(c[::-1])
    radius = float(np.abs(r).max()) or 1.0
    worst = float(np.abs(r.imag).max())
    if worst > _IMAG_TOL * radius:
        raise ComplexRootDetected(
            f"companion root imaginary part {worst:.3g} exceeds "
            f"{_IMAG_TOL:.0e} * radius {radius:.3g}"
        )
    exact_dc = poly_deriv(exact_c)

    def chain_eval(y):
        y = Fraction(y)
        return (
            float(poly_eval(exact_c, y)),
            float(poly_eval(exact_dc, y)),
            0.0,
        )

    ys, resid = _polish_on(chain_eval, np.sort(r.real))
    return _finish_rootset(ys, resid)
