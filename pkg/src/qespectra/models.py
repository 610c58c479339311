"""Catalog of quasi-exactly-solvable potential families.

Each model maps a one-dimensional Schrodinger problem, through a change of
variable ``z = z(x)`` and a prefactor ansatz ``psi = Q(x) * S(z(x))``, onto
the canonical ODE handled by :mod:`qespectra.recurrence`.  A model instance
carries the potential parameters that stay fixed plus the slice count ``n``;
the one remaining free parameter (the *scan variable*) is what the
constraint polynomial pins down.

Two families of scan variable occur:

* potential-scan models (both sech-power wells, the rational-in-cosh well,
  and the radial oscillator with a Coulomb term): the baseline condition
  eliminates the energy, and the constraint roots are admissible values of
  a potential coefficient (V3, V2 or beta), each with its energy fixed by
  the baseline;
* energy-scan models (the hyperbolic double wells): the potential is fully
  fixed and the constraint roots are the algebraic energies themselves.

Every model provides two independent descriptions of the same recurrence —
the ODE coefficient table and the closed-form multiplicator table — which
the test suite cross-checks slice by slice.  All tables are written with
plain arithmetic so that exact (Fraction) inputs produce exact recurrences.

The hyperbolic double wells additionally come in a second algebraization
through the squared-sinh variable instead of squared-cosh.  The two chains
look different (their off-diagonal products even have opposite signs) but
must produce identical spectra; the duplication is kept because it turns an
otherwise nonsymmetric root-finding problem into a symmetric one and makes
a sharp consistency test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import ClassVar

import numpy as np

from .errors import BaselineUnsolvable, DomainError, InvalidParams, WrongModel
from .recurrence import OdeCoefficients, SliceMultiplicators


def _num(value):
    """Normalize a parameter: exact inputs stay exact, floats stay floats."""
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    return float(value)


# Working precision (decimal digits) for rational square roots.
_SQRT_DIGITS = 10**40


def _sqrt(value):
    """Square root that keeps Fraction inputs rational.

    Perfect squares come back exact.  Anything else gets a 40-digit rational
    approximation via exact integer sqrt, so model tables built from exact
    parameters stay in Fraction arithmetic throughout.  That matters: the
    map from table entries to the low-order solution coefficients amplifies
    input rounding by up to ~1e20 for deep wells, so float(sqrt(...)) in a
    table poisons every sampled wavefunction downstream, while a 1e-40
    rational detune of one table entry only redefines the solved Hamiltonian
    by the same negligible amount.
    """
    if isinstance(value, Fraction):
        num, den = value.numerator, value.denominator
        if num >= 0:
            rn, rd = math.isqrt(num), math.isqrt(den)
            if rn * rn == num and rd * rd == den:
                return Fraction(rn, rd)
            scaled = math.isqrt(num * den * _SQRT_DIGITS**2)
            return Fraction(scaled, den * _SQRT_DIGITS)
    return math.sqrt(value)


def _half(ref):
    """1/2 in the same number system as ``ref``."""
    return Fraction(1, 2) if isinstance(ref, Fraction) else 0.5


def _log_cosh(x):
    """log(cosh(x)) without overflow for large |x|."""
    ax = np.abs(x)
    return ax + np.log1p(np.exp(-2.0 * ax)) - math.log(2.0)


def _check_n(n):
    if not isinstance(n, (int, np.integer)) or n < 0:
        raise InvalidParams(f"slice count n must be a non-negative integer, got {n!r}")
    return int(n)


# ---------------------------------------------------------------------------
# sech-power triple well (scan variable V3)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SechPowerWell:
    """V(x) = -V1 sech^6 x - V2 sech^4 x - V3 sech^2 x on the full line.

    The squared-tanh variable algebraizes each parity sector separately;
    ``parity`` selects the sector.  The baseline eliminates the energy
    through s = sqrt(-E), and the constraint roots are admissible V3 values.
    """

    v1: object
    v2: object
    n: int
    parity: str = "even"

    name: ClassVar[str] = "sech-power-well"
    scan_name: ClassVar[str] = "V3"
    is_energy_scan: ClassVar[bool] = False
    half_line: ClassVar[bool] = False

    def __post_init__(self):
        object.__setattr__(self, "v1", _num(self.v1))
        object.__setattr__(self, "v2", _num(self.v2))
        object.__setattr__(self, "n", _check_n(self.n))
        if self.parity not in ("even", "odd"):
            raise InvalidParams(f"parity must be 'even' or 'odd', got {self.parity!r}")
        if not self.v1 > 0:
            raise InvalidParams("V1 must be positive (it sets the depth scale)")

    # -- derived baseline quantities ------------------------------------
    @property
    def _r(self):
        return _sqrt(self.v1)

    @property
    def s(self):
        """sqrt(-E), fixed by the termination condition."""
        h = _half(self.v1)
        offset = 3 * h if self.parity == "even" else 5 * h
        return -2 * self.n - (self.v1 + self.v2) / (2 * self._r) - offset

    def baseline(self):
        return ("sqrt_minus_E", self.s)

    def energy(self, root):
        s = float(self.s)
        return -s * s

    def ode_coefficients(self, scan):
        r, s = self._r, self.s
        if self.parity == "even":
            return OdeCoefficients(
                a3=0, a2=4, a1=-4,
                b2=4 * r, b1=6 + 4 * (s - r), b0=-2,
                c1=self.v1 + self.v2 + 3 * r + 2 * r * s,
                c0=s * (s + 1) - r - self.v1 - self.v2 - scan,
            )
        return OdeCoefficients(
            a3=0, a2=4, a1=-4,
            b2=4 * r, b1=10 + 4 * (s - r), b0=-6,
            c1=self.v1 + self.v2 + 5 * r + 2 * r * s,
            c0=(s + 1) * (s + 2) - 3 * r - self.v1 - self.v2 - scan,
        )

    def multiplicators(self):
        r, s = self._r, self.s
        h = _half(self.v1)
        w = (self.v1 + self.v2) / (2 * r)
        shared = (2 * self.n + w + 3 * h) * (2 * self.n + w + h) - self.v1 - self.v2
        lead_q1 = 4 * r
        if self.parity == "even":
            mid = (4, 2 + 4 * (s - r), shared - r)
            trail = (-4, 2, 0)
        else:
            mid = (4, 6 + 4 * (s - r), shared - 3 * r)
            trail = (-4, -2, 0)
        return SliceMultiplicators(
            lead=(0, lead_q1, -(lead_q1 * self.n)),
            mid=mid,
            trail=trail,
            sigma0=-1 if isinstance(self.v1, Fraction) else -1.0,
        )

    def normalizable(self, root=None):
        bound = -((4 * self.n + (3 if self.parity == "even" else 5)) * self._r + self.v1)
        return self.v2 < bound

    def coordinate(self, x):
        return np.tanh(x) ** 2

    def prefactor(self, x):
        x = np.asarray(x, dtype=float)
        r, s = float(self._r), float(self.s)
        q = np.exp(0.5 * r * np.tanh(x) ** 2 - s * _log_cosh(x))
        if self.parity == "odd":
            q = q * np.tanh(x)
        return q

    def potential(self, x, scan):
        x = np.asarray(x, dtype=float)
        sech2 = 1.0 / np.cosh(x) ** 2
        return -(float(self.v1) * sech2 ** 3 + float(self.v2) * sech2 ** 2
                 + float(scan) * sech2)

    def double_well(self, scan):
        """True when the admissible potential has two symmetric minima."""
        v1, v2, v3 = float(self.v1), float(self.v2), float(scan)
        return v1 > 0 and v2 < 0 and v3 > 0 and (-v3 / (2 * v2)) < 1

    def params(self):
        return {"V1": float(self.v1), "V2": float(self.v2)}


# ---------------------------------------------------------------------------
# rational-in-cosh^2 well (scan variable V2)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RationalCoshWell:
    """V(x) = V1/cosh^2 x + V2/(1 + g cosh^2 x) + V3/(1 + g cosh^2 x)^2.

    Algebraized through z = -sinh^2 x; the baseline fixes the energy from
    two exponents lam1, lam2 and the constraint roots are admissible V2
    values.  Only the lower branch of the lam2 quadratic gives decaying
    states, so that branch is hard-coded.
    """

    v1: object
    v3: object
    g: object
    n: int
    parity: str = "even"

    name: ClassVar[str] = "rational-cosh-well"
    scan_name: ClassVar[str] = "V2"
    is_energy_scan: ClassVar[bool] = False
    half_line: ClassVar[bool] = False

    def __post_init__(self):
        object.__setattr__(self, "v1", _num(self.v1))
        object.__setattr__(self, "v3", _num(self.v3))
        object.__setattr__(self, "g", _num(self.g))
        object.__setattr__(self, "n", _check_n(self.n))
        if self.parity not in ("even", "odd"):
            raise InvalidParams(f"parity must be 'even' or 'odd', got {self.parity!r}")
        if not self.g > 0:
            raise InvalidParams("g must be positive")
        if 4 * self.v1 > 1:
            raise InvalidParams("V1 must satisfy 4*V1 <= 1 (real exponent lam1)")
        if self.v3 < -(1 + self.g):
            raise InvalidParams("V3 must satisfy V3 >= -(1+g) (real exponent lam2)")

    @property
    def lam1(self):
        return (1 + _sqrt(1 - 4 * self.v1)) / 4

    @property
    def lam2(self):
        return (1 - _sqrt(1 + self.v3 / (1 + self.g))) / 2

    @property
    def _en(self):
        L = self.lam1 + self.lam2
        if self.parity == "even":
            return -4 * (self.n + L) ** 2
        return -1 - 4 * (self.n + L) * (self.n + L + 1)

    def baseline(self):
        return ("E", self._en)

    def energy(self, root):
        return float(self._en)

    def ode_coefficients(self, scan):
        l1, l2, g = self.lam1, self.lam2, self.g
        L = l1 + l2
        h = _half(self.g)
        en = self._en
        if self.parity == "even":
            return OdeCoefficients(
                a3=1, a2=-2 - 1 / g, a1=1 + 1 / g,
                b2=2 * L + 1,
                b1=-(2 * L + 3 * h + (2 * l1 + 1) / g),
                b0=(1 + g) / (2 * g),
                c1=L * L + en / 4,
                c0=-(1 + g) / (4 * g) * (
                    2 * l1 + (2 * l2 * g - scan) / (1 + g)
                    - self.v1 - self.v3 / (1 + g) ** 2 + en
                ),
            )
        return OdeCoefficients(
            a3=1, a2=-2 - 1 / g, a1=1 + 1 / g,
            b2=2 * (L + 1),
            b1=-(2 * L + 7 * h + 2 * (l1 + 1) / g),
            b0=3 * (1 + g) / (2 * g),
            c1=L * (L + 1) + (en + 1) / 4,
            c0=-(1 + g) / (4 * g) * (
                6 * l1 + 4 * l2 + 1 + (2 * l2 * g - scan) / (1 + g)
                - self.v1 - self.v3 / (1 + g) ** 2 + en
            ) + l2 / g,
        )

    def multiplicators(self):
        l1, l2, g, n = self.lam1, self.lam2, self.g, self.n
        L = l1 + l2
        h = _half(self.g)
        if self.parity == "even":
            lead_q2, lead_q1 = 1, 2 * L
            mid_q1 = (2 + 1 / g) - (2 * L + 3 * h + (2 * l1 + 1) / g)
            c0n = -(1 + g) / (4 * g) * (
                2 * l1 + 2 * l2 * g / (1 + g)
                - self.v1 - self.v3 / (1 + g) ** 2 - 4 * (n + L) ** 2
            )
            trail = ((1 + g) / g, -(1 + g) / (2 * g), 0)
        else:
            lead_q2, lead_q1 = 1, 2 * L + 1
            mid_q1 = (2 + 1 / g) - (2 * L + 7 * h + 2 * (l1 + 1) / g)
            en = -1 - 4 * (n + L) * (n + L + 1)
            c0n = -(1 + g) / (4 * g) * (
                6 * l1 + 4 * l2 + 1 + 2 * l2 * g / (1 + g)
                - self.v1 - self.v3 / (1 + g) ** 2 + en
            ) + l2 / g
            trail = ((1 + g) / g, (1 + g) / (2 * g), 0)
        return SliceMultiplicators(
            lead=(lead_q2, lead_q1, -(lead_q2 * n * n + lead_q1 * n)),
            mid=(-(2 + 1 / g), mid_q1, c0n),
            trail=trail,
            sigma0=1 / (4 * g),
        )

    def normalizable(self, root=None):
        L = self.lam1 + self.lam2
        if self.parity == "even":
            return L + self.n < 0
        return 2 * (L + self.n) < -1

    def coordinate(self, x):
        return -np.sinh(x) ** 2

    def prefactor(self, x):
        x = np.asarray(x, dtype=float)
        l1, l2, g = float(self.lam1), float(self.lam2), float(self.g)
        log_shell = np.logaddexp(0.0, math.log(g) + 2.0 * _log_cosh(x))
        q = np.exp(2.0 * l1 * _log_cosh(x) + l2 * log_shell)
        if self.parity == "odd":
            q = q * np.sinh(x)
        return q

    def potential(self, x, scan):
        x = np.asarray(x, dtype=float)
        c2 = np.cosh(x) ** 2
        shell = 1.0 + float(self.g) * c2
        return float(self.v1) / c2 + float(scan) / shell + float(self.v3) / shell ** 2

    def double_well(self, scan):
        raise WrongModel("double-well classification applies to the sech-power well")

    def params(self):
        return {"V1": float(self.v1), "V3": float(self.v3), "g": float(self.g)}


# ---------------------------------------------------------------------------
# radial oscillator with a Coulomb term (scan variable beta)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoulombOscillator:
    """u'' + (eps + lam + 1/2 - x^2/4 - lam(lam-1)/x^2 + beta/x) u = 0 on x > 0.

    In these rescaled units the eigenvalue alpha/omega equals
    n + lam + 1/2 on the baseline, the polynomial variable is x itself, and
    the constraint roots are the admissible Coulomb strengths beta.  The
    physical coupling is beta * sqrt(omega/2); the default omega = 2 makes
    the rescaling the identity.
    """

    lam: object
    omega: object = 2
    n: int = 0

    name: ClassVar[str] = "coulomb-oscillator"
    scan_name: ClassVar[str] = "beta"
    is_energy_scan: ClassVar[bool] = False
    half_line: ClassVar[bool] = True
    parity: ClassVar[str] = "none"

    def __post_init__(self):
        object.__setattr__(self, "lam", _num(self.lam))
        object.__setattr__(self, "omega", _num(self.omega))
        object.__setattr__(self, "n", _check_n(self.n))
        if not self.omega > 0:
            raise InvalidParams("omega must be positive")
        if not 2 * self.lam > -1:
            raise InvalidParams("lam must exceed -1/2 for a normalizable origin")

    def baseline(self):
        return ("epsilon", self.n)

    def energy(self, root):
        """Eigenvalue alpha/omega; independent of which beta root is taken."""
        return float(self.n + self.lam + _half(self.lam))

    def beta_physical(self, root):
        return float(root) * math.sqrt(float(self.omega) / 2.0)

    def ode_coefficients(self, scan):
        return OdeCoefficients(
            a3=0, a2=0, a1=1,
            b2=-1, b1=0, b0=2 * self.lam,
            c1=self.n, c0=scan,
        )

    def multiplicators(self):
        one = Fraction(1) if isinstance(self.lam, Fraction) else 1.0
        return SliceMultiplicators(
            lead=(0, -one, self.n * one),
            mid=(0, 0, 0),
            trail=(one, 2 * self.lam - 1, 0),
            sigma0=one,
        )

    def normalizable(self, root=None):
        return True

    def coordinate(self, x):
        return np.asarray(x, dtype=float)

    def prefactor(self, x):
        x = np.asarray(x, dtype=float)
        if np.any(x <= 0):
            raise DomainError("the radial coordinate must be positive")
        return np.exp(float(self.lam) * np.log(x) - 0.25 * x * x)

    def potential(self, x, scan):
        x = np.asarray(x, dtype=float)
        if np.any(x <= 0):
            raise DomainError("the radial coordinate must be positive")
        lam = float(self.lam)
        return lam * (lam - 1) / x ** 2 + 0.25 * x * x - float(scan) / x

    def double_well(self, scan):
        raise WrongModel("double-well classification applies to the sech-power well")

    def params(self):
        return {"lambda": float(self.lam), "omega": float(self.omega)}


# ---------------------------------------------------------------------------
# hyperbolic double wells (energy scan)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HyperbolicDoubleWell:
    """V(x) = (xi^2/4) sinh^2 2x - (M+1) xi cosh 2x with M = 2n + alpha + beta.

    The exponents alpha, beta in {0, 1} select the parity sector.  Both the
    squared-cosh and the squared-sinh algebraizations are provided; they
    share potential, prefactor and spectrum but produce chains of opposite
    off-diagonal sign.
    """

    xi: object
    alpha: int
    beta: int
    n: int
    variant: str = "cosh2"

    name: ClassVar[str] = "hyperbolic-double-well"
    scan_name: ClassVar[str] = "E"
    is_energy_scan: ClassVar[bool] = True
    half_line: ClassVar[bool] = False

    def __post_init__(self):
        object.__setattr__(self, "xi", _num(self.xi))
        object.__setattr__(self, "n", _check_n(self.n))
        if not self.xi > 0:
            raise InvalidParams("xi must be positive")
        if self.alpha not in (0, 1) or self.beta not in (0, 1):
            raise InvalidParams("alpha and beta must each be 0 or 1")
        if self.variant not in ("cosh2", "sinh2"):
            raise InvalidParams(f"unknown variant {self.variant!r}")

    @property
    def m_quantum(self):
        return 2 * self.n + self.alpha + self.beta

    @property
    def parity(self):
        return "odd" if self.beta == 1 else "even"

    def baseline(self):
        return ("M", self.m_quantum)

    def energy(self, root):
        return float(root)

    def ode_coefficients(self, scan):
        xi, a, b, m = self.xi, self.alpha, self.beta, self.m_quantum
        if self.variant == "cosh2":
            return OdeCoefficients(
                a3=0, a2=4, a1=-4,
                b2=-4 * xi, b1=4 * (a + b + xi + 1), b0=-2 * (2 * a + 1),
                c1=2 * xi * (m - a - b),
                c0=scan + (a + b) ** 2 + xi * (2 * a - m),
                c0_base=(a + b) ** 2 + xi * (2 * a - m),
                sigma_e=1,
            )
        return OdeCoefficients(
            a3=0, a2=4, a1=4,
            b2=-4 * xi, b1=4 * (a + b - xi + 1), b0=2 * (2 * b + 1),
            c1=2 * xi * (m - a - b),
            c0=scan + (a + b) ** 2 + xi * (m - 2 * b),
            c0_base=(a + b) ** 2 + xi * (m - 2 * b),
            sigma_e=1,
        )

    def multiplicators(self):
        xi, a, b, n = self.xi, self.alpha, self.beta, self.n
        one = Fraction(1) if isinstance(self.xi, Fraction) else 1.0
        lead_q1 = -4 * xi
        if self.variant == "cosh2":
            mid = (4, 4 * (a + b + xi), (a + b) ** 2 - xi * (2 * n + b - a))
            trail = (-4, 2 - 4 * a, 0)
        else:
            mid = (4, 4 * (a + b - xi), (a + b) ** 2 + xi * (2 * n + a - b))
            trail = (4, 4 * b - 2, 0)
        return SliceMultiplicators(
            lead=(0, lead_q1, -(lead_q1 * n)),
            mid=mid,
            trail=trail,
            sigma0=one,
        )

    def normalizable(self, root=None):
        return True

    def coordinate(self, x):
        x = np.asarray(x, dtype=float)
        if self.variant == "cosh2":
            return np.cosh(x) ** 2
        return np.sinh(x) ** 2

    def prefactor(self, x):
        x = np.asarray(x, dtype=float)
        q = np.exp(-0.25 * float(self.xi) * np.cosh(2 * x))
        if self.alpha:
            q = q * np.cosh(x)
        if self.beta:
            q = q * np.sinh(x)
        return q

    def potential(self, x, scan=None):
        x = np.asarray(x, dtype=float)
        xi, m = float(self.xi), float(self.m_quantum)
        return 0.25 * xi * xi * np.sinh(2 * x) ** 2 - (m + 1) * xi * np.cosh(2 * x)

    def double_well(self, scan):
        raise WrongModel("double-well classification applies to the sech-power well")

    def params(self):
        return {"xi": float(self.xi), "alpha": self.alpha, "beta": self.beta}


@dataclass(frozen=True)
class ShiftedGaussWell:
    """V(x) = (xi cosh 2x - M)^2 with M = n + 1, in the exponential variable.

    The natural polynomial variable is z = exp(2x), which covers the whole
    line in one chart; parity is not built into the ansatz and emerges only
    numerically.  Scan variable is the energy.
    """

    xi: object
    n: int

    name: ClassVar[str] = "shifted-gauss-well"
    scan_name: ClassVar[str] = "E"
    is_energy_scan: ClassVar[bool] = True
    half_line: ClassVar[bool] = False
    parity: ClassVar[str] = "none"
    variant: ClassVar[str] = "native"

    def __post_init__(self):
        object.__setattr__(self, "xi", _num(self.xi))
        object.__setattr__(self, "n", _check_n(self.n))
        if not self.xi > 0:
            raise InvalidParams("xi must be positive")

    @property
    def m_quantum(self):
        return self.n + 1

    def baseline(self):
        return ("M", self.m_quantum)

    def energy(self, root):
        return float(root)

    def ode_coefficients(self, scan):
        xi, m = self.xi, self.m_quantum
        return OdeCoefficients(
            a3=0, a2=4, a1=0,
            b2=-2 * xi, b1=8 - 4 * m, b0=2 * xi,
            c1=2 * xi * (m - 1),
            c0=scan + 1 - 2 * m - xi * xi,
            c0_base=1 - 2 * m - xi * xi,
            sigma_e=1,
        )

    def multiplicators(self):
        xi, n = self.xi, self.n
        one = Fraction(1) if isinstance(self.xi, Fraction) else 1.0
        return SliceMultiplicators(
            lead=(0, -2 * xi, 2 * xi * n),
            mid=(4, -4 * n, -(xi * xi) - 2 * n - 1),
            trail=(0, 2 * xi, 0),
            sigma0=one,
        )

    def normalizable(self, root=None):
        return True

    def coordinate(self, x):
        return np.exp(2.0 * np.asarray(x, dtype=float))

    def prefactor(self, x):
        x = np.asarray(x, dtype=float)
        xi, m = float(self.xi), float(self.m_quantum)
        return np.exp((1.0 - m) * x - 0.5 * xi * np.cosh(2 * x))

    def potential(self, x, scan=None):
        x = np.asarray(x, dtype=float)
        xi, m = float(self.xi), float(self.m_quantum)
        return (xi * np.cosh(2 * x) - m) ** 2

    def double_well(self, scan):
        raise WrongModel("double-well classification applies to the sech-power well")

    def params(self):
        return {"xi": float(self.xi)}


@dataclass(frozen=True)
class PerturbedGaussWell:
    """The squared shifted-cosh well plus inverse-square barrier terms:

        V(x) = (xi cosh 2x - M)^2 - alpha(alpha-1)/cosh^2 x + beta(beta-1)/sinh^2 x

    with M = 2n + alpha + beta + 1.  Integer beta in {0, 1} gives the usual
    full-line parity sectors; fractional beta in (0, 1) keeps the chain
    perfectly sensible but the wavefunction only lives on the half line
    (the sinh^beta factor has a branch point at the origin).
    """

    xi: object
    alpha: object
    beta: object
    n: int
    variant: str = "cosh2"

    name: ClassVar[str] = "perturbed-gauss-well"
    scan_name: ClassVar[str] = "E"
    is_energy_scan: ClassVar[bool] = True

    def __post_init__(self):
        object.__setattr__(self, "xi", _num(self.xi))
        object.__setattr__(self, "alpha", _num(self.alpha))
        object.__setattr__(self, "beta", _num(self.beta))
        object.__setattr__(self, "n", _check_n(self.n))
        if not self.xi > 0:
            raise InvalidParams("xi must be positive")
        if self.beta < 0 or self.beta > 1 or 2 * self.beta == 1:
            raise InvalidParams(
                "beta must lie in [0, 1] excluding 1/2 "
                "(inverse-square coupling in (-1/4, 0])"
            )
        if self.variant not in ("cosh2", "sinh2"):
            raise InvalidParams(f"unknown variant {self.variant!r}")

    @property
    def m_quantum(self):
        return 2 * self.n + self.alpha + self.beta + 1

    @property
    def half_line(self):
        return self.beta not in (0, 1)

    @property
    def parity(self):
        if self.beta == 0:
            return "even"
        if self.beta == 1:
            return "odd"
        return "none"

    def baseline(self):
        return ("M", self.m_quantum)

    def energy(self, root):
        return float(root)

    def ode_coefficients(self, scan):
        xi, a, b, m = self.xi, self.alpha, self.beta, self.m_quantum
        if self.variant == "cosh2":
            return OdeCoefficients(
                a3=0, a2=4, a1=-4,
                b2=-8 * xi, b1=4 * (a + b + 2 * xi + 1), b0=-2 * (2 * a + 1),
                c1=4 * xi * (m - a - b - 1),
                c0=scan - m * m - xi * xi + (a + b) ** 2 + 2 * xi * (2 * a - m + 1),
                c0_base=-m * m - xi * xi + (a + b) ** 2 + 2 * xi * (2 * a - m + 1),
                sigma_e=1,
            )
        return OdeCoefficients(
            a3=0, a2=4, a1=4,
            b2=-8 * xi, b1=4 * (a + b - 2 * xi + 1), b0=2 * (2 * b + 1),
            c1=4 * xi * (m - a - b - 1),
            c0=scan - m * m - xi * xi + (a + b) ** 2 + 2 * xi * (m - 2 * b - 1),
            c0_base=-m * m - xi * xi + (a + b) ** 2 + 2 * xi * (m - 2 * b - 1),
            sigma_e=1,
        )

    def multiplicators(self):
        xi, a, b, n = self.xi, self.alpha, self.beta, self.n
        one = Fraction(1) if isinstance(self.xi, Fraction) else 1.0
        lead_q1 = -8 * xi
        base = -(2 * n + 1) * (2 * n + 1 + 2 * a + 2 * b) - xi * xi
        if self.variant == "cosh2":
            mid = (4, 4 * (a + b + 2 * xi), base + 2 * xi * (a - b - 2 * n))
            trail = (-4, 2 - 4 * a, 0)
        else:
            mid = (4, 4 * (a + b - 2 * xi), base + 2 * xi * (a - b + 2 * n))
            trail = (4, 4 * b - 2, 0)
        return SliceMultiplicators(
            lead=(0, lead_q1, -(lead_q1 * n)),
            mid=mid,
            trail=trail,
            sigma0=one,
        )

    def normalizable(self, root=None):
        return True

    def coordinate(self, x):
        x = np.asarray(x, dtype=float)
        if self.variant == "cosh2":
            return np.cosh(x) ** 2
        return np.sinh(x) ** 2

    def prefactor(self, x):
        x = np.asarray(x, dtype=float)
        a, b = float(self.alpha), float(self.beta)
        if self.half_line and np.any(x <= 0):
            raise DomainError(
                "fractional beta confines the wavefunction to the half line x > 0"
            )
        q = np.exp(-0.5 * float(self.xi) * np.cosh(2 * x))
        if a:
            q = q * np.cosh(x) ** a
        if b == 1:
            q = q * np.sinh(x)
        elif b:
            q = q * np.sinh(x) ** b
        return q

    def potential(self, x, scan=None):
        x = np.asarray(x, dtype=float)
        xi, m = float(self.xi), float(self.m_quantum)
        a, b = float(self.alpha), float(self.beta)
        v = (xi * np.cosh(2 * x) - m) ** 2
        v = v - a * (a - 1) / np.cosh(x) ** 2
        if b * (b - 1) != 0:
            v = v + b * (b - 1) / np.sinh(x) ** 2
        return v

    def double_well(self, scan):
        raise WrongModel("double-well classification applies to the sech-power well")

    def params(self):
        return {"xi": float(self.xi), "alpha": float(self.alpha), "beta": float(self.beta)}


# ---------------------------------------------------------------------------
# registry and construction
# ---------------------------------------------------------------------------

def _m_to_n_even_step(m, offset):
    """Recover n from M = 2n + offset; BaselineUnsolvable unless integral."""
    twice_n = m - offset
    n = twice_n / 2
    rounded = round(float(n))
    if abs(float(n) - rounded) > 1e-9 or rounded < 0:
        raise BaselineUnsolvable(
            f"M = {m} is not reachable: M - {offset} must be an even "
            "non-negative integer"
        )
    return int(rounded)


CATALOG = {
    "xie-even": {
        "factory": lambda n, p: SechPowerWell(p["V1"], p["V2"], n, "even"),
        "params": ("V1", "V2"),
        "defaults": {},
        "scan": "V3",
        "summary": "sech-power triple well, even sector; roots are V3 values",
    },
    "xie-odd": {
        "factory": lambda n, p: SechPowerWell(p["V1"], p["V2"], n, "odd"),
        "params": ("V1", "V2"),
        "defaults": {},
        "scan": "V3",
        "summary": "sech-power triple well, odd sector; roots are V3 values",
    },
    "chen-even": {
        "factory": lambda n, p: RationalCoshWell(p["V1"], p["V3"], p["g"], n, "even"),
        "params": ("V1", "V3", "g"),
        "defaults": {},
        "scan": "V2",
        "summary": "rational-in-cosh^2 well, even sector; roots are V2 values",
    },
    "chen-odd": {
        "factory": lambda n, p: RationalCoshWell(p["V1"], p["V3"], p["g"], n, "odd"),
        "params": ("V1", "V3", "g"),
        "defaults": {},
        "scan": "V2",
        "summary": "rational-in-cosh^2 well, odd sector; roots are V2 values",
    },
    "coulomb": {
        "factory": lambda n, p: CoulombOscillator(p["lambda"], p.get("omega", 2), n),
        "params": ("lambda", "omega"),
        "defaults": {"omega": 2},
        "scan": "beta",
        "summary": "radial oscillator with Coulomb term; roots are beta values",
    },
    "razavy": {
        "factory": lambda n, p: HyperbolicDoubleWell(
            p["xi"], int(p["alpha"]), int(p["beta"]), n, "cosh2"),
        "params": ("xi", "alpha", "beta"),
        "defaults": {},
        "scan": "E",
        "summary": "hyperbolic double well; roots are energies (cosh^2 chain)",
        "m_offset": lambda p: p["alpha"] + p["beta"],
    },
    "razavy-sinh2": {
        "factory": lambda n, p: HyperbolicDoubleWell(
            p["xi"], int(p["alpha"]), int(p["beta"]), n, "sinh2"),
        "params": ("xi", "alpha", "beta"),
        "defaults": {},
        "scan": "E",
        "summary": "hyperbolic double well; sinh^2 chain (same spectrum)",
        "m_offset": lambda p: p["alpha"] + p["beta"],
    },
    "dshg": {
        "factory": lambda n, p: ShiftedGaussWell(p["xi"], n),
        "params": ("xi",),
        "defaults": {},
        "scan": "E",
        "summary": "squared shifted-cosh well in the exponential variable",
        "m_offset": None,  # M = n + 1, handled separately
    },
    "perturbed-dshg": {
        "factory": lambda n, p: PerturbedGaussWell(
            p["xi"], p["alpha"], p["beta"], n, "cosh2"),
        "params": ("xi", "alpha", "beta"),
        "defaults": {},
        "scan": "E",
        "summary": "squared shifted-cosh well with inverse-square terms "
                   "(cosh^2 chain)",
        "m_offset": lambda p: p["alpha"] + p["beta"] + 1,
    },
    "perturbed-dshg-sinh2": {
        "factory": lambda n, p: PerturbedGaussWell(
            p["xi"], p["alpha"], p["beta"], n, "sinh2"),
        "params": ("xi", "alpha", "beta"),
        "defaults": {},
        "scan": "E",
        "summary": "perturbed well through the sinh^2 chain (same spectrum)",
        "m_offset": lambda p: p["alpha"] + p["beta"] + 1,
    },
}

_ALIASES = {
    "v1": "V1", "v2": "V2", "v3": "V3", "g": "g",
    "lambda": "lambda", "lam": "lambda", "omega": "omega",
    "xi": "xi", "alpha": "alpha", "beta": "beta", "m": "M",
}


def catalog():
    """Machine-readable list of available models for the CLI."""
    return [
        {
            "model": key,
            "scan_variable": entry["scan"],
            "parameters": list(entry["params"]),
            "defaults": dict(entry["defaults"]),
            "summary": entry["summary"],
        }
        for key, entry in CATALOG.items()
    ]


def make(model_id, n=None, params=None):
    """Build a model instance from user-facing names and a parameter dict.

    ``params`` keys are case-insensitive (``v1`` or ``V1``); energy-scan
    models accept ``M`` instead of (or alongside, consistently) ``n``.
    """
    if model_id not in CATALOG:
        known = ", ".join(sorted(CATALOG))
        raise InvalidParams(f"unknown model {model_id!r}; known models: {known}")
    entry = CATALOG[model_id]
    raw = dict(params or {})
    clean = dict(entry["defaults"])
    for key, value in raw.items():
        canon = _ALIASES.get(str(key).lower())
        if canon is None:
            raise InvalidParams(f"unknown parameter {key!r} for model {model_id!r}")
        clean[canon] = value

    m_given = clean.pop("M", None)
    missing = [p for p in entry["params"] if p not in clean]
    if missing:
        raise InvalidParams(f"model {model_id!r} is missing parameters: {missing}")
    extra = [p for p in clean if p not in entry["params"]]
    if extra:
        raise InvalidParams(f"model {model_id!r} does not take parameters: {extra}")

    if m_given is not None:
        if "m_offset" not in entry:
            raise InvalidParams(f"model {model_id!r} has no M parameter")
        if entry["m_offset"] is None:
            n_from_m = float(m_given) - 1
            if n_from_m != int(n_from_m) or n_from_m < 0:
                raise BaselineUnsolvable(f"M = {m_given} needs M - 1 = n >= 0")
            n_from_m = int(n_from_m)
        else:
            n_from_m = _m_to_n_even_step(float(m_given), float(entry["m_offset"](clean)))
        if n is None:
            n = n_from_m
        elif int(n) != n_from_m:
            raise InvalidParams(
                f"inconsistent n={n} and M={m_given} (M implies n={n_from_m})"
            )
    if n is None:
        raise InvalidParams("the slice count n (or, for energy scans, M) is required")
    return entry["factory"](int(n), clean)
