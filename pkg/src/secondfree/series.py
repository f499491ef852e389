"""Truncated exact-rational formal power series, one and two variables.

Univariate series carry coefficients for degrees 0..cutoff; bivariate
series are truncated by total degree, which every operation used here
(ring operations, partial derivatives, logarithm, substitution of
zero-constant univariate series) respects exactly.

The generating-function identities relating cumulants of a square to
its determining sequence are verified coefficientwise through
:func:`check_first_order_relation` and
:func:`check_second_order_relation` after the substitution u = 1/z,
which turns the paper-facing Laurent-style series into honest power
series: a coefficient list [1, x1, x2, ...] becomes u + x1 u^2 + ...,
and a determining list [b1, b2, ...] is used as the function
w -> b1 + b2 w + ... .
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

Q = Fraction
ZERO = Fraction(0)
ONE = Fraction(1)


class SeriesError(ValueError):
    pass


@dataclass(frozen=True)
class Series1:
    """Power series sum coeffs[n] u^n, exact to degree cutoff."""

    coeffs: tuple[Fraction, ...]

    @property
    def cutoff(self) -> int:
        return len(self.coeffs) - 1

    @staticmethod
    def from_dict(data: dict[int, Fraction], cutoff: int) -> Series1:
        return Series1(tuple(Q(data.get(n, 0)) for n in range(cutoff + 1)))

    @staticmethod
    def zero(cutoff: int) -> Series1:
        return Series1((ZERO,) * (cutoff + 1))

    @staticmethod
    def monomial(degree: int, cutoff: int, value: Fraction = ONE) -> Series1:
        c = [ZERO] * (cutoff + 1)
        if degree <= cutoff:
            c[degree] = Q(value)
        return Series1(tuple(c))

    def __add__(self, other: Series1) -> Series1:
        self._match(other)
        return Series1(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: Series1) -> Series1:
        self._match(other)
        return Series1(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, other: Series1 | Fraction | int) -> Series1:
        if isinstance(other, (Fraction, int)):
            return Series1(tuple(a * other for a in self.coeffs))
        self._match(other)
        n = self.cutoff
        out = [ZERO] * (n + 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j in range(n + 1 - i):
                b = other.coeffs[j]
                if b:
                    out[i + j] += a * b
        return Series1(tuple(out))

    def _match(self, other: Series1) -> None:
        if self.cutoff != other.cutoff:
            raise SeriesError("series cutoffs differ")

    def reciprocal(self) -> Series1:
        """1/self; the constant term must be invertible (nonzero)."""
        c0 = self.coeffs[0]
        if not c0:
            raise SeriesError("reciprocal needs a nonzero constant term")
        n = self.cutoff
        out = [ZERO] * (n + 1)
        out[0] = 1 / c0
        for k in range(1, n + 1):
            acc = ZERO
            for i in range(1, k + 1):
                if self.coeffs[i]:
                    acc += self.coeffs[i] * out[k - i]
            out[k] = -acc / c0
        return Series1(tuple(out))

    def compose(self, inner: Series1) -> Series1:
        """self(inner); the inner series must have zero constant term."""
        if inner.coeffs[0]:
            raise SeriesError("composition needs zero inner constant term")
        n = self.cutoff
        result = Series1.zero(n)
        power = Series1.monomial(0, n)
        for k, a in enumerate(self.coeffs):
            if a:
                result = result + power * a
            if k < n:
                power = power * inner
        return result

    def derivative(self) -> Series1:
        n = self.cutoff
        out = [ZERO] * (n + 1)
        for k in range(1, n + 1):
            out[k - 1] = k * self.coeffs[k]
        return Series1(tuple(out))

    def log1p(self) -> Series1:
        """log(1 + self); the constant term must vanish."""
        if self.coeffs[0]:
            raise SeriesError("log1p needs zero constant term")
        n = self.cutoff
        result = Series1.zero(n)
        power = Series1.monomial(0, n)
        for k in range(1, n + 1):
            power = power * self
            result = result + power * Fraction((-1) ** (k + 1), k)
        return result

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __str__(self) -> str:
        terms = [
            f"{c}*u^{n}" for n, c in enumerate(self.coeffs) if c
        ]
        return " + ".join(terms) if terms else "0"

    def to_dict(self) -> dict[int, str]:
        return {n: str(c) for n, c in enumerate(self.coeffs) if c}


@dataclass(frozen=True)
class Series2:
    """Bivariate series truncated by total degree: sum c[(i,j)] u^i v^j."""

    coeffs: dict[tuple[int, int], Fraction]
    cutoff: int

    def __post_init__(self):
        object.__setattr__(
            self,
            "coeffs",
            {k: Q(v) for k, v in self.coeffs.items() if v and k[0] + k[1] <= self.cutoff},
        )

    @staticmethod
    def zero(cutoff: int) -> Series2:
        return Series2({}, cutoff)

    @staticmethod
    def constant(value: Fraction, cutoff: int) -> Series2:
        return Series2({(0, 0): Q(value)}, cutoff)

    def _match(self, other: Series2) -> None:
        if self.cutoff != other.cutoff:
            raise SeriesError("series cutoffs differ")

    def __add__(self, other: Series2) -> Series2:
        self._match(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, ZERO) + v
        return Series2(out, self.cutoff)

    def __sub__(self, other: Series2) -> Series2:
        self._match(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, ZERO) - v
        return Series2(out, self.cutoff)

    def __mul__(self, other: Series2 | Fraction | int) -> Series2:
        if isinstance(other, (Fraction, int)):
            return Series2({k: v * other for k, v in self.coeffs.items()}, self.cutoff)
        self._match(other)
        out: dict[tuple[int, int], Fraction] = {}
        for (i1, j1), a in self.coeffs.items():
            for (i2, j2), b in other.coeffs.items():
                key = (i1 + i2, j1 + j2)
                if key[0] + key[1] <= self.cutoff:
                    out[key] = out.get(key, ZERO) + a * b
        return Series2(out, self.cutoff)

    def d_du(self) -> Series2:
        return Series2(
            {(i - 1, j): i * v for (i, j), v in self.coeffs.items() if i},
            self.cutoff,
        )

    def d_dv(self) -> Series2:
        return Series2(
            {(i, j - 1): j * v for (i, j), v in self.coeffs.items() if j},
            self.cutoff,
        )

    def log1p(self) -> Series2:
        if self.coeffs.get((0, 0)):
            raise SeriesError("log1p needs zero constant term")
        result = Series2.zero(self.cutoff)
        power = Series2.constant(ONE, self.cutoff)
        for k in range(1, self.cutoff + 1):
            power = power * self
            if not power.coeffs:
                break
            result = result + power * Fraction((-1) ** (k + 1), k)
        return result

    def is_zero(self) -> bool:
        return not self.coeffs

    def __str__(self) -> str:
        terms = [
            f"{v}*u^{i}*v^{j}"
            for (i, j), v in sorted(self.coeffs.items())
        ]
        return " + ".join(terms) if terms else "0"

    def to_dict(self) -> dict[str, str]:
        return {f"{i},{j}": str(v) for (i, j), v in sorted(self.coeffs.items())}


def outer(f: Series1, g: Series1, cutoff: int) -> Series2:
    """f(u) * g(v) as a bivariate series."""
    out: dict[tuple[int, int], Fraction] = {}
    for i, a in enumerate(f.coeffs):
        if not a:
            continue
        for j, b in enumerate(g.coeffs):
            if b and i + j <= cutoff:
                out[(i, j)] = a * b
    return Series2(out, cutoff)


# ---------------------------------------------------------------------------
# the square-transform identities as series checks


def _hat_series(c_coeffs: Sequence[Fraction], cutoff: int) -> Series1:
    """[1, x1, x2, ...] -> u + x1 u^2 + ... (the substituted series)."""
    data = {n + 1: Q(v) for n, v in enumerate(c_coeffs) if n + 1 <= cutoff}
    return Series1.from_dict(data, cutoff)


def check_first_order_relation(
    kappa: dict[int, Fraction],
    beta: dict[int, Fraction],
    cutoff: int,
) -> Series1:
    """Residual of the compositional identity 1/C + B(C) = z.

    ``kappa[n]`` are the cumulants of the square (or moments, on the
    moment side); ``beta[n]`` the determining sequence (or cumulants).
    In u = 1/z the identity reads u/C + u B(C) = 1 with C the honest
    power series u (1 + sum kappa_n u^n).
    """
    c_coeffs = [ONE] + [Q(kappa.get(n, 0)) for n in range(1, cutoff + 1)]
    c_hat = _hat_series(c_coeffs, cutoff)
    c_over_u = Series1.from_dict(
        {n: Q(v) for n, v in enumerate(c_coeffs)}, cutoff
    )
    u_over_c = c_over_u.reciprocal()
    u = Series1.monomial(1, cutoff)
    b_of_c = Series1.zero(cutoff)
    power = Series1.monomial(0, cutoff)
    for n in range(1, cutoff + 2):
        b_n = Q(beta.get(n, 0))
        if b_n:
            b_of_c = b_of_c + power * b_n
        power = power * c_hat
    one = Series1.monomial(0, cutoff)
    return u_over_c + u * b_of_c - one


def check_second_order_relation(
    kappa2: dict[tuple[int, int], Fraction],
    beta2: dict[tuple[int, int], Fraction],
    kappa: dict[int, Fraction],
    beta: dict[int, Fraction],
    cutoff: int,
) -> Series2:
    """Residual of the bivariate identity
    C(z,w) = C'(z) C'(w) B(C(z), C(w)) + d^2/dzdw log((C(z)-C(w))/(z-w)).

    All series are truncated by total degree ``cutoff``; the second
    order tables must cover every cell with p + q <= cutoff - 2.  In
    u = 1/z, v = 1/w one has d/dz = -u^2 d/du, the prefactor
    -uv (C(z)-C(w))/(z-w) becomes the exact divided difference
    (C(u)-C(v))/(u-v) with unit constant term, and the discarded
    log(-uv) factor dies under the mixed derivative.
    """
    c_coeffs = [ONE] + [Q(kappa.get(n, 0)) for n in range(1, cutoff + 1)]
    c_hat = _hat_series(c_coeffs, cutoff)

    lhs = Series2(
        {
            (p + 1, q + 1): Q(v)
            for (p, q), v in kappa2.items()
            if p + q + 2 <= cutoff
        },
        cutoff,
    )

    # term 1: u^2 v^2 C'(u) C'(v) B2(C(u), C(v))
    c_prime = c_hat.derivative()
    u2cpu = Series1.monomial(2, cutoff) * c_prime
    v2cpv = u2cpu
    powers = [Series1.monomial(0, cutoff)]
    for _ in range(cutoff):
        powers.append(powers[-1] * c_hat)
    b2 = Series2.zero(cutoff)
    for (p, q), v in beta2.items():
        v = Q(v)
        if v and p - 1 < len(powers) and q - 1 < len(powers):
            b2 = b2 + outer(powers[p - 1], powers[q - 1], cutoff) * v
    term1 = outer(u2cpu, v2cpv, cutoff) * b2

    # term 2: u^2 v^2 d/du d/dv log Q with Q the divided difference,
    # built exactly from (u^n - v^n)/(u - v) = sum u^i v^j, i+j = n-1
    q_diff: dict[tuple[int, int], Fraction] = {}
    for n, c_n in enumerate(c_coeffs):
        # c_hat has c_n at degree n+1
        if not c_n:
            continue
        for i in range(n + 1):
            j = n - i
            if i + j <= cutoff:
                q_diff[(i, j)] = q_diff.get((i, j), ZERO) + c_n
    q_series = Series2(q_diff, cutoff)
    assert q_series.coeffs.get((0, 0)) == ONE
    log_q = (q_series - Series2.constant(ONE, cutoff)).log1p()
    mixed = log_q.d_du().d_dv()
    u2v2 = Series2({(2, 2): ONE}, cutoff)
    term2 = u2v2 * mixed

    return lhs - term1 - term2
