"""Determining sequences, the square/product transforms, the product-of-
free-factors formulas, and the multiplication/conjugation checkers.

Everything here works on :class:`~secondfree.cumulants.CumulantModel`
instances and exact rationals.  The transforms come in inverse pairs and
the checkers recompute each identity along two independent routes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .annular import (
    AnnularConfig,
    DEFAULT_CONFIG,
    enumerate_snc_k_alternating,
    enumerate_snc_k_alternating_equal,
    enumerate_snc_preserving_all_through,
    kreweras,
)
from .cumulants import (
    CumulantModel,
    FamilyContext,
    ModelError,
    ONE,
    Q,
    Word,
    ZERO,
    adjoint_alternation_hooks,
    kappa2_grouped,
    kappa2_table_from_moments,
    kappa_grouped,
    kappa_table_from_moments,
    moments_from_kappa_table,
    phi2_cell_from_tables,
    products_as_arguments_second,
    word_phi,
    word_phi2,
)
from .dist import (
    CircularModel,
    HaarUnitaryModel,
    RDiagonalTableModel,
    SelfAdjointTableModel,
)
from .perm import AnnulusShape, Permutation


@dataclass(frozen=True)
class DeterminingSequence:
    """The data that determines the distribution of a square.

    ``first[n]`` and ``second[(p, q)]`` are exact rationals; ``order``
    bounds n and p+q.
    """

    first: dict[int, Fraction]
    second: dict[tuple[int, int], Fraction]
    order: int

    def symmetric(self) -> bool:
        return all(
            self.second.get((p, q)) == self.second.get((q, p))
            for (p, q) in self.second
        )


@dataclass
class Violation:
    where: str
    expected: Fraction
    actual: Fraction

    def __str__(self) -> str:
        return f"{self.where}: expected {self.expected}, got {self.actual}"


def _single_letter(model: CumulantModel, self_adjoint: bool) -> Word:
    candidates = [x for x in model.letters.values()]
    if self_adjoint:
        letters = [x for x in candidates if x.self_adjoint]
        if len(letters) != 1 or len(candidates) != 1:
            raise ModelError("expected a model with a single self-adjoint letter")
        return (letters[0],)
    if len(candidates) == 1 and candidates[0].self_adjoint:
        return (candidates[0],)  # its own adjoint partner
    if len(candidates) != 2:
        raise ModelError("expected a model with a star pair of letters")
    base = [x for x in candidates if not x.self_adjoint]
    if len(base) != 2:
        raise ModelError("expected a star pair of distinct letters")
    return (min(base, key=lambda x: x.name),)


def _alternating_word(model: CumulantModel, length: int, start_starred: bool = False) -> Word:
    (a,) = _single_letter(model, self_adjoint=False)
    astar = model.letter(a.star)
    pair = (astar, a) if start_starred else (a, astar)
    return tuple(pair[i % 2] for i in range(length))


# ---------------------------------------------------------------------------
# verification of the defining vanishing patterns


def verify_even(model: CumulantModel, order: int) -> tuple[bool, Violation | None]:
    """All odd moments vanish, and fluctuations vanish on mixed parity.

    Given vanishing odd moments, fluctuation and cumulant cells with an
    odd total can never receive a contribution, so mixed parity is the
    strongest vanishing pattern shared by every even element (already
    the unit-variance ones have a nonzero odd-odd fluctuation through
    the pair cycle joining the circles).  Mixed-parity vanishing is
    exactly what the square transforms consume.
    """
    (x,) = _single_letter(model, self_adjoint=True)
    for n in range(1, order + 1, 2):
        value = word_phi((x,) * n, model)
        if value:
            return False, Violation(f"phi(x^{n})", ZERO, value)
    for p in range(1, order):
        for q in range(1, order + 1 - p):
            if (p + q) % 2 == 0:
                continue
            value = word_phi2((x,) * p, (x,) * q, model)
            if value:
                return False, Violation(f"phi2(x^{p}, x^{q})", ZERO, value)
            value = model.kappa2((x,) * p, (x,) * q)
            if value:
                return False, Violation(f"kappa_{{{p},{q}}}(x..x)", ZERO, value)
    return True, None


def _alternates(eps: Sequence[int]) -> bool:
    return all(eps[i] == -eps[i + 1] for i in range(len(eps) - 1))


def verify_r_diagonal(model: CumulantModel, order: int) -> tuple[bool, Violation | None]:
    """Only alternating *-cumulants may survive, at both orders."""
    (a,) = _single_letter(model, self_adjoint=False)
    astar = model.letter(a.star)

    def word_for(eps: Sequence[int]) -> Word:
        return tuple(a if e == 1 else astar for e in eps)

    for n in range(1, order + 1):
        for eps in itertools.product((1, -1), repeat=n):
            allowed = n % 2 == 0 and _alternates(eps)
            if allowed:
                continue
            value = model.kappa1(word_for(eps))
            if value:
                return False, Violation(f"kappa_{n}{eps}", ZERO, value)
    for p in range(1, order):
        for q in range(1, order + 1 - p):
            for eps in itertools.product((1, -1), repeat=p):
                for theta in itertools.product((1, -1), repeat=q):
                    allowed = (
                        p % 2 == 0
                        and q % 2 == 0
                        and _alternates(eps)
                        and _alternates(theta)
                    )
                    if allowed:
                        continue
                    value = model.kappa2(word_for(eps), word_for(theta))
                    if value:
                        return False, Violation(
                            f"kappa_{{{p},{q}}}{eps}|{theta}", ZERO, value
                        )
    return True, None


# ---------------------------------------------------------------------------
# determining sequences


def determining_of_r_diagonal(
    model: CumulantModel, order: int, verify_order: int | None = None
) -> DeterminingSequence:
    """Read the alternating cumulants of a verified star-pair model."""
    ok, violation = verify_r_diagonal(model, verify_order or min(order, 4))
    if not ok:
        raise ModelError(f"model is not second-order adjoint-alternating: {violation}")
    first = {n: model.kappa1(_alternating_word(model, 2 * n)) for n in range(1, order + 1)}
    second = {
        (p, q): model.kappa2(
            _alternating_word(model, 2 * p), _alternating_word(model, 2 * q)
        )
        for p in range(1, order)
        for q in range(1, order + 1 - p)
    }
    return DeterminingSequence(first, second, order)


def determining_of_even(
    model: CumulantModel,
    order: int,
    verify_order: int | None = None,
    config: AnnularConfig = DEFAULT_CONFIG,
) -> DeterminingSequence:
    """Even cumulants plus the all-through parity-preserving correction."""
    ok, violation = verify_even(model, verify_order or min(2 * order, 8))
    if not ok:
        raise ModelError(f"model is not second-order even: {violation}")
    (x,) = _single_letter(model, self_adjoint=True)
    first = {n: model.kappa1((x,) * (2 * n)) for n in range(1, order + 1)}
    second: dict[tuple[int, int], Fraction] = {}
    for p in range(1, order):
        for q in range(1, order + 1 - p):
            total = model.kappa2((x,) * (2 * p), (x,) * (2 * q))
            # the correction family is sharply constrained, so the size
            # cap meant for unconstrained service enumerations is lifted
            for perm in enumerate_snc_preserving_all_through(
                AnnulusShape(2 * p, 2 * q), _raised(config, 2 * p + 2 * q)
            ):
                value = ONE
                for cyc in perm.cycles():
                    value *= model.kappa1((x,) * len(cyc))
                    if not value:
                        break
                total += value
            second[(p, q)] = total
    return DeterminingSequence(first, second, order)


# ---------------------------------------------------------------------------
# the square transform and its inverse


def square_cumulants(
    beta: DeterminingSequence, order: int, config: AnnularConfig = DEFAULT_CONFIG
) -> tuple[dict[int, Fraction], dict[tuple[int, int], Fraction]]:
    """Cumulants of the square from a determining sequence.

    First order is the lattice sum over non-crossing partitions; second
    order sums the determining data multiplicatively over annular
    permutations and joined disc pairs.
    """
    if order > beta.order:
        raise ModelError(f"determining sequence only reaches order {beta.order}")
    first = moments_from_kappa_table(beta.first, order)
    second = {
        (p, q): phi2_cell_from_tables(beta.first, beta.second, (p, q), config)
        for p in range(1, order)
        for q in range(1, order + 1 - p)
    }
    return first, second


def determining_from_square(
    first: dict[int, Fraction],
    second: dict[tuple[int, int], Fraction],
    order: int,
    config: AnnularConfig = DEFAULT_CONFIG,
) -> DeterminingSequence:
    """Invert :func:`square_cumulants` by leading-term recursion."""
    beta_first = kappa_table_from_moments(first, order)
    beta_second = kappa2_table_from_moments(beta_first, second, order, config)
    return DeterminingSequence(beta_first, beta_second, order)


# ---------------------------------------------------------------------------
# multiplication by a free element preserves the alternating pattern


@dataclass
class ProductCheckReport:
    """Outcome of the alternating-pattern check for a product rb."""

    order: int
    cells_checked: int = 0
    patterns_checked: int = 0
    expansion_cells: int = 0
    geodesic_assertions: int = 0
    violations: list[Violation] = field(default_factory=list)
    alternating_values: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations


def check_product_r_diagonal(
    r_model: CumulantModel,
    b_model: CumulantModel,
    order: int,
    *,
    expansion_total_cap: int = 8,
    config: AnnularConfig = DEFAULT_CONFIG,
) -> ProductCheckReport:
    """Verify that rb keeps the alternating cumulant pattern.

    Both cumulant orders of the word rb are computed through the grouped
    inversion; cells small enough are recomputed by the literal
    products-as-arguments expansion, asserting on every surviving term
    that a starred slot forces the boundary step (the geodesic
    condition), and that both routes agree.
    """
    ok, violation = verify_r_diagonal(r_model, min(order, 4))
    if not ok:
        raise ModelError(f"left factor is not adjoint-alternating: {violation}")
    ctx = FamilyContext([r_model, b_model])
    (a,) = _single_letter(r_model, self_adjoint=False)
    astar = ctx.letter(a.star)
    b_letters = list(b_model.letters.values())
    b = min(b_letters, key=lambda x: x.name)
    bstar = ctx.letter(b.star)
    plus = (a, b)
    minus = (bstar, astar)

    report = ProductCheckReport(order=order)

    def groups_for(eps: Sequence[int]) -> list[Word]:
        return [plus if e == 1 else minus for e in eps]

    # first order
    for n in range(1, order + 1):
        for eps in itertools.product((1, -1), repeat=n):
            report.patterns_checked += 1
            value = kappa_grouped(groups_for(eps), ctx)
            allowed = n % 2 == 0 and _alternates(eps)
            if allowed:
                if _alternates((eps[-1], eps[0])):
                    report.alternating_values[(n, eps)] = value
            elif value:
                report.violations.append(Violation(f"kappa_{n}{eps}", ZERO, value))

    # second order
    for p in range(1, order):
        for q in range(1, order + 1 - p):
            report.cells_checked += 1
            for eps in itertools.product((1, -1), repeat=p):
                for theta in itertools.product((1, -1), repeat=q):
                    report.patterns_checked += 1
                    value = kappa2_grouped(
                        groups_for(eps), groups_for(theta), ctx, config
                    )
                    allowed = (
                        p % 2 == 0
                        and q % 2 == 0
                        and _alternates(eps)
                        and _alternates(theta)
                    )
                    if allowed:
                        report.alternating_values[(p, q, eps, theta)] = value
                    elif value:
                        report.violations.append(
                            Violation(f"kappa_{{{p},{q}}}{eps}|{theta}", ZERO, value)
                        )
                    if 2 * (p + q) <= expansion_total_cap:
                        report.expansion_cells += 1
                        expanded = _expanded_with_geodesic_assertion(
                            groups_for(eps), groups_for(theta), eps + theta, ctx, report
                        )
                        if expanded != value:
                            report.violations.append(
                                Violation(
                                    f"expansion kappa_{{{p},{q}}}{eps}|{theta}",
                                    value,
                                    expanded,
                                )
                            )
    return report


def _expanded_with_geodesic_assertion(
    groups_left: Sequence[Word],
    groups_right: Sequence[Word],
    eps: Sequence[int],
    ctx: CumulantModel,
    report: ProductCheckReport,
) -> Fraction:
    """Literal expansion; every surviving term must route starred slots
    along the boundary rotation."""
    p, q = len(groups_left), len(groups_right)
    shape = AnnulusShape(2 * p, 2 * q)
    g = shape.rotation()

    def callback(cycles, marked, value):
        perm = Permutation.from_cycles(shape.size, cycles)
        for i, e in enumerate(eps, start=1):
            if e == -1 and perm(2 * i) != g(2 * i):
                report.violations.append(
                    Violation(
                        f"geodesic step at slot {i} of {eps}",
                        Q(g(2 * i)),
                        Q(perm(2 * i)),
                    )
                )
                return
        report.geodesic_assertions += 1

    return products_as_arguments_second(
        groups_left, groups_right, ctx, term_callback=callback
    )


# ---------------------------------------------------------------------------
# hermitization: star-pair model to even model


def hermitization(
    r_model: CumulantModel,
    order: int,
    name: str = "X",
    config: AnnularConfig = DEFAULT_CONFIG,
) -> SelfAdjointTableModel:
    """The even element whose even moments are the moments of a a*.

    Odd moments and mixed-parity fluctuations vanish; the even ones are
    taken from the alternating words of the star-pair model.
    """
    ok, violation = verify_r_diagonal(r_model, min(order, 4))
    if not ok:
        raise ModelError(f"model is not adjoint-alternating: {violation}")
    truncation = 2 * order
    moments: dict[int, Fraction] = {}
    for n in range(1, truncation + 1):
        moments[n] = (
            word_phi(_alternating_word(r_model, n), r_model) if n % 2 == 0 else ZERO
        )
    fluct: dict[tuple[int, int], Fraction] = {}
    for p in range(1, truncation):
        for q in range(1, truncation + 1 - p):
            if p % 2 == 0 and q % 2 == 0:
                fluct[(p, q)] = word_phi2(
                    _alternating_word(r_model, p),
                    _alternating_word(r_model, q),
                    r_model,
                )
            else:
                fluct[(p, q)] = ZERO
    first = kappa_table_from_moments(moments, truncation)
    second = kappa2_table_from_moments(first, fluct, truncation, config)
    return SelfAdjointTableModel(
        name, first, second, truncation, moments=moments, fluctuations=fluct
    )


# ---------------------------------------------------------------------------
# products of several free factors with vanishing fluctuations


def _product_context(factors: Sequence[CumulantModel]) -> tuple[FamilyContext, Word]:
    for i, f in enumerate(factors):
        if not f.second_order_vanishes():
            raise ModelError(
                f"factor {i} has nonvanishing second-order cumulants"
            )
    ctx = FamilyContext(list(factors))
    unit = tuple(
        min(f.letters.values(), key=lambda x: x.name) for f in factors
    )
    return ctx, unit


def _raised(config: AnnularConfig, size: int) -> AnnularConfig:
    if size <= config.annulus_cap:
        return config
    return AnnularConfig(config.disc_cap, size, config.psnc_cap)


def product_free_moments(
    k: int,
    factors: Sequence[CumulantModel],
    p: int,
    q: int,
    config: AnnularConfig = DEFAULT_CONFIG,
) -> Fraction:
    """Fluctuation moments of a product of k free factors: the sum of
    complement cumulants over the k-step-alternating annular family."""
    if len(factors) != k:
        raise ModelError(f"expected {k} factor models")
    ctx, unit = _product_context(factors)
    word = unit * p + unit * q
    shape = AnnulusShape(k * p, k * q)
    total = ZERO
    for perm in enumerate_snc_k_alternating(p, q, k, _raised(config, shape.size)):
        comp = kreweras(perm, shape)
        value = ONE
        for cyc in comp.cycles():
            value *= ctx.kappa1(tuple(word[i - 1] for i in cyc))
            if not value:
                break
        total += value
    return total


def product_free_cumulants(
    k: int,
    factors: Sequence[CumulantModel],
    p: int,
    q: int,
    config: AnnularConfig = DEFAULT_CONFIG,
) -> Fraction:
    """Second-order cumulants of a product of k free factors: as above,
    restricted to cycles of exactly k elements."""
    if len(factors) != k:
        raise ModelError(f"expected {k} factor models")
    ctx, unit = _product_context(factors)
    word = unit * p + unit * q
    shape = AnnulusShape(k * p, k * q)
    total = ZERO
    for perm in enumerate_snc_k_alternating_equal(p, q, k, _raised(config, shape.size)):
        comp = kreweras(perm, shape)
        value = ONE
        for cyc in comp.cycles():
            value *= ctx.kappa1(tuple(word[i - 1] for i in cyc))
            if not value:
                break
        total += value
    return total


# ---------------------------------------------------------------------------
# conjugation by a circular element


@dataclass
class ConjugationReport:
    first: dict[int, Fraction]
    second: dict[tuple[int, int], Fraction]
    violations: list[Violation] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def conjugation_by_circular(
    a_model: CumulantModel,
    order: int,
    config: AnnularConfig = DEFAULT_CONFIG,
) -> ConjugationReport:
    """Cumulants of c a c* computed by the word engine; first order must
    reproduce the moments of a and second order its fluctuations."""
    circ = CircularModel("cj")
    ctx = FamilyContext([circ, a_model])
    (x,) = _single_letter(a_model, self_adjoint=True)
    c = ctx.letter("cj")
    cstar = ctx.letter("cj*")
    group: Word = (c, x, cstar)
    report = ConjugationReport(first={}, second={})
    for n in range(1, order + 1):
        value = kappa_grouped([group] * n, ctx)
        expected = word_phi((x,) * n, a_model)
        report.first[n] = value
        if value != expected:
            report.violations.append(Violation(f"kappa_{n}(cac*)", expected, value))
    for p in range(1, order):
        for q in range(1, order + 1 - p):
            value = products_as_arguments_second([group] * p, [group] * q, ctx)
            expected = word_phi2((x,) * p, (x,) * q, a_model)
            report.second[(p, q)] = value
            if value != expected:
                report.violations.append(
                    Violation(f"kappa_{{{p},{q}}}(cac*)", expected, value)
                )
    return report


# ---------------------------------------------------------------------------
# powers of the moment-defined unitary


def haar_power_cumulants(
    p: int,
    m: int,
    n: int,
    signs: tuple[Sequence[int], Sequence[int]] | None = None,
) -> Fraction:
    """kappa_{m,n} of p-th powers of the standard unitary.

    The p-th power is itself a moment-defined unitary whose fluctuation
    scale is p, so the cumulant is read from the scaled model.  Default
    signs: all +1 on the first circle, all -1 on the second.
    """
    if signs is None:
        signs = (tuple([1] * m), tuple([-1] * n))
    eps, theta = signs
    if len(eps) != m or len(theta) != n:
        raise ModelError("sign patterns must match the cell sizes")
    scaled = HaarUnitaryModel("u", fluctuation_scale=p)
    u = scaled.letter("u")
    ustar = scaled.letter("u*")

    def word_for(pattern: Sequence[int]) -> Word:
        return tuple(u if e == 1 else ustar for e in pattern)

    return scaled.kappa2(word_for(eps), word_for(theta))


def haar_power_by_expansion(
    p: int,
    m: int,
    n: int,
    signs: tuple[Sequence[int], Sequence[int]] | None = None,
    config: AnnularConfig = DEFAULT_CONFIG,
) -> Fraction:
    """The same cumulant by products-as-arguments on the expanded word;
    small sizes only, used as the cross-check oracle."""
    if signs is None:
        signs = (tuple([1] * m), tuple([-1] * n))
    eps, theta = signs
    base = HaarUnitaryModel("u")
    u = base.letter("u")
    ustar = base.letter("u*")

    def group_for(e: int) -> Word:
        return ((u,) * p) if e == 1 else ((ustar,) * p)

    return products_as_arguments_second(
        [group_for(e) for e in eps], [group_for(e) for e in theta], base
    )
