"""The desk-scale verification suite.

Eleven independent checks, each recomputing a family of published or
derived values through the library and comparing exactly (rational
equality, tolerance zero).  ``run_all`` returns structured results; the
command line and the test suite both drive it.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .annular import (
    AnnularConfig,
    brute_force_snc,
    enumerate_annular_pairings,
    enumerate_nc,
    enumerate_ps_nc_prime,
    enumerate_snc,
    enumerate_snc_preserving,
    enumerate_snc_preserving_all_through,
    enumerate_snc_reversing,
    iter_nc,
    snc_grouped,
    double_nc,
    double_partitioned,
    double_reversing,
    undouble_nc,
    undouble_partitioned,
    undouble_reversing,
)
from .cumulants import (
    FamilyContext,
    kappa2_grouped,
    kappa2_table_from_moments,
    kappa_grouped,
    kappa_table_from_moments,
    moments_from_kappa_table,
    phi2_cell_from_tables,
    products_as_arguments_first,
    products_as_arguments_second,
    word_phi,
    word_phi2,
)
from .dist import (
    CircularModel,
    FreePoissonModel,
    HaarUnitaryModel,
    SemicircularModel,
    r_diagonal_model_from_word,
    self_adjoint_model_from_word,
)
from .perm import AnnulusShape, Permutation
from .series import check_first_order_relation, check_second_order_relation
from .special import (
    check_product_r_diagonal,
    conjugation_by_circular,
    determining_from_square,
    determining_of_even,
    determining_of_r_diagonal,
    haar_power_cumulants,
    hermitization,
    product_free_cumulants,
    product_free_moments,
    square_cumulants,
)

Q = Fraction


@dataclass
class CheckResult:
    cid: int
    name: str
    passed: bool = True
    details: list[str] = field(default_factory=list)

    def expect(self, label: str, actual, expected) -> None:
        ok = actual == expected
        if not ok:
            self.passed = False
        mark = "ok" if ok else "FAIL"
        self.details.append(f"[{mark}] {label}: expected {expected}, got {actual}")


def catalan(n: int) -> int:
    return math.comb(2 * n, n) // (n + 1)


def _shapes_with_total(lo: int, hi: int):
    for total in range(lo, hi + 1):
        for m in range(1, total):
            yield AnnulusShape(m, total - m)


def criterion_counting() -> CheckResult:
    r = CheckResult(1, "counting: discs, annuli, pairings")
    for n in range(1, 13):
        count = sum(1 for _ in iter_nc(n))
        r.expect(f"|NC({n})|", count, catalan(n))
    r.expect("|NC(4)|", len(enumerate_nc(4)), 14)
    for (m, n), expected in [((1, 1), 1), ((1, 2), 4), ((2, 2), 18), ((1, 3), 15)]:
        r.expect(f"|S_NC({m},{n})|", len(enumerate_snc(AnnulusShape(m, n))), expected)
    for shape in _shapes_with_total(2, 5):
        p, q = shape.outer, shape.inner
        half = len(enumerate_annular_pairings(AnnulusShape(2 * p, 2 * q)))
        r.expect(
            f"2|S_NC({p},{q})| = |NC2({2*p},{2*q})|",
            2 * len(enumerate_snc(shape)),
            half,
        )
    return r


def criterion_oracles() -> CheckResult:
    r = CheckResult(2, "oracle equivalence: enumeration, round trips, products")
    for shape in _shapes_with_total(2, 8):
        cut = enumerate_snc(shape)
        brute = brute_force_snc(shape)
        r.expect(f"cut == brute on {shape}", cut == brute, True)

    rng = random.Random(20240517)
    first = {n: Q(rng.randint(-4, 4), rng.randint(1, 3)) for n in range(1, 9)}
    second = {}
    for p in range(1, 8):
        for q in range(p, 9 - p):
            second[(p, q)] = Q(rng.randint(-4, 4), rng.randint(1, 3))
            second[(q, p)] = second[(p, q)]
    moments = moments_from_kappa_table(first, 8)
    fluct = {
        (p, q): phi2_cell_from_tables(first, second, (p, q))
        for p in range(1, 8)
        for q in range(1, 9 - p)
    }
    back1 = kappa_table_from_moments(moments, 8)
    back2 = kappa2_table_from_moments(back1, fluct, 8)
    r.expect("first-order round trip to order 8", back1, first)
    r.expect("second-order round trip to total order 8", back2, second)

    ctx = FamilyContext([CircularModel(), FreePoissonModel(Q(1))])
    letters = [ctx.letter("c"), ctx.letter("c*"), ctx.letter("p")]
    agree = True
    for trial in range(24):
        n = rng.randint(2, 7)
        word = [rng.choice(letters) for _ in range(n)]
        cuts = sorted(rng.sample(range(1, n), rng.randint(0, min(3, n - 1))))
        groups = [
            tuple(word[a:b])
            for a, b in zip([0] + cuts, cuts + [n])
        ]
        lit = products_as_arguments_first(groups, ctx)
        inv = kappa_grouped(groups, ctx)
        sep = products_as_arguments_first(groups, ctx, use_separation_form=True)
        agree = agree and lit == inv == sep
        if len(groups) >= 2:
            split = rng.randint(1, len(groups) - 1)
            lit2 = products_as_arguments_second(groups[:split], groups[split:], ctx)
            inv2 = kappa2_grouped(groups[:split], groups[split:], ctx)
            agree = agree and lit2 == inv2
    r.expect("products-as-arguments == inversion route (24 random words <= 7)", agree, True)
    return r


def criterion_bijections() -> CheckResult:
    r = CheckResult(3, "doubling bijections and the disjoint decomposition")
    for n in range(1, 7):
        base = enumerate_nc(n)
        images = {double_nc(p) for p in base}
        r.expect(f"disc double injective on NC({n})", len(images), len(base))
        r.expect(
            f"disc double round trip on NC({n})",
            all(undouble_nc(double_nc(p)) == p for p in base),
            True,
        )

    fig8 = Permutation.parse("(1,14,15,12)(2,3)(4,5,18,13)(6,7)(8,9,10,11,16,17)")
    checked = undouble_reversing(fig8, AnnulusShape(12, 6))
    r.expect(
        "published reversing example halves correctly",
        str(checked),
        "(1)(2,9)(3)(4,5,8)(6,7)",
    )
    r.expect(
        "and doubles back",
        double_reversing(checked, AnnulusShape(6, 3)) == fig8,
        True,
    )

    for shape in _shapes_with_total(2, 6):
        doubled = AnnulusShape(2 * shape.outer, 2 * shape.inner)
        g = doubled.rotation()
        odds = range(1, doubled.size, 2)
        revs = [
            x
            for x in enumerate_snc_reversing(doubled)
            if (g * x.inverse()).separates(odds)
        ]
        base = enumerate_snc(shape)
        halved = sorted(
            (undouble_reversing(x, doubled).image for x in revs)
        )
        r.expect(
            f"reversing-with-separation <-> S_NC{shape}",
            halved,
            sorted(p.image for p in base),
        )

    for shape in _shapes_with_total(2, 5):
        doubled = AnnulusShape(2 * shape.outer, 2 * shape.inner)
        g = doubled.rotation()
        odds = range(1, doubled.size, 2)
        prime = enumerate_ps_nc_prime(shape)
        images = [double_partitioned(x, shape) for x in prime]
        targets = [
            x
            for x in enumerate_ps_nc_prime(doubled)
            if all(len(c) % 2 == 0 for c in x.permutation.cycles())
            and (g * x.permutation.inverse()).separates(odds)
        ]
        r.expect(
            f"joined-pair double is a bijection on {shape}",
            sorted(map(str, images)),
            sorted(map(str, targets)),
        )
        r.expect(
            f"joined-pair double round trips on {shape}",
            all(undouble_partitioned(y, doubled) == x for x, y in zip(prime, images)),
            True,
        )

    # Disjoint decomposition of the separated preserving class: every
    # member determines its joined disc pair by halving, so the pieces
    # partition the class; on the smallest shapes the pieces are also
    # recomputed independently through the membership filter.
    for shape in _shapes_with_total(2, 6):
        doubled = AnnulusShape(2 * shape.outer, 2 * shape.inner)
        g = doubled.rotation()
        odds = range(1, doubled.size, 2)
        lhs = [
            p
            for p in enumerate_snc_preserving(doubled)
            if (g * p.inverse()).separates(odds)
        ]
        prime = {str(x): x for x in enumerate_ps_nc_prime(shape)}
        by_signature: dict[str, set] = {}
        all_assigned = True
        for p in lhs:
            sig = _halved_signature(p, shape, doubled)
            if sig is None or sig not in prime:
                all_assigned = False
                continue
            by_signature.setdefault(sig, set()).add(p.image)
        r.expect(
            f"every separated preserving element halves into a joined pair on {shape}",
            all_assigned,
            True,
        )
        r.expect(
            f"signature pieces cover the class on {shape}",
            sum(len(v) for v in by_signature.values()),
            len(lhs),
        )
        if shape.size <= 4:
            for key, x in prime.items():
                piece = {p.image for p in snc_grouped(x, shape)}
                r.expect(
                    f"grouped piece of {key} on {shape}",
                    piece,
                    by_signature.get(key, set()),
                )
    return r


def _halved_signature(p, shape, doubled) -> str | None:
    """The joined disc pair a separated preserving element halves to.

    Non-through cycles halve to the cycles they double; the through
    cycles' even points halve to the joined block, split per circle.
    Cycles of a non-crossing disc factor run in increasing order, so
    point sets determine the pair completely.
    """
    from .annular import through_cycles
    from .perm import PartitionedPermutation, SetPartition

    through = set(through_cycles(p, doubled))
    union = sorted(pt for c in through for pt in c)
    joined = sorted(pt // 2 for pt in union if pt % 2 == 0)
    if 2 * len(joined) != len(union):
        return None
    cycles = [
        tuple(sorted(pt // 2 for pt in cyc if pt % 2 == 0))
        for cyc in p.cycles()
        if cyc not in through
    ]
    joined_out = tuple(k for k in joined if k <= shape.outer)
    joined_in = tuple(k for k in joined if k > shape.outer)
    if not joined_out or not joined_in:
        return None
    covered = {pt for c in cycles for pt in c} | set(joined)
    if covered != set(range(1, shape.size + 1)) or len(joined) + sum(
        map(len, cycles)
    ) != shape.size:
        return None
    try:
        perm = Permutation.from_cycles(
            shape.size, cycles + [joined_out, joined_in]
        )
        x = PartitionedPermutation(
            SetPartition.from_blocks(
                shape.size, cycles + [joined_out + joined_in]
            ),
            perm,
        )
    except ValueError:
        return None
    return str(x)


def criterion_squares() -> CheckResult:
    r = CheckResult(4, "squares: circular and semicircular against expansion")
    circ = CircularModel()
    semi = SemicircularModel()
    beta_c = determining_of_r_diagonal(circ, 8)
    k1c, k2c = square_cumulants(beta_c, 8)
    for p in range(1, 5):
        for q in range(1, 5):
            r.expect(f"kappa_{{{p},{q}}}(cc*)", k2c[(p, q)], 0)
    beta_s = determining_of_even(semi, 8)
    k1s, k2s = square_cumulants(beta_s, 8)
    for p in range(1, 5):
        for q in range(1, 5):
            r.expect(
                f"kappa_{{{p},{q}}}(s^2)",
                k2s[(p, q)],
                p * math.comb(p + q - 1, p),
            )
    c, cs = circ.letter("c"), circ.letter("c*")
    s = semi.letter("s")
    for p in range(1, 5):
        for q in range(1, 5):
            ex_c = products_as_arguments_second([(c, cs)] * p, [(c, cs)] * q, circ)
            r.expect(f"expansion kappa_{{{p},{q}}}(cc*)", ex_c, k2c[(p, q)])
            ex_s = products_as_arguments_second([(s, s)] * p, [(s, s)] * q, semi)
            r.expect(f"expansion kappa_{{{p},{q}}}(s^2)", ex_s, k2s[(p, q)])
    return r


def _product_of_two_circulars():
    ctx = FamilyContext([CircularModel("c1"), CircularModel("c2")])
    h = ctx.word("c1 c2")
    return ctx, h + ctx.star_word(h)


def criterion_hh_star() -> CheckResult:
    r = CheckResult(5, "product of two circulars: fluctuations and cumulants")
    ctx, unit = _product_of_two_circulars()
    values = {
        (1, 1): 3,
        (1, 2): 20,
        (2, 2): 150,
    }
    for (p, q), expected in values.items():
        r.expect(
            f"phi2((hh*)^{p}, (hh*)^{q})",
            word_phi2(unit * p, unit * q, ctx),
            expected,
        )
    for n in range(1, 5):
        r.expect(
            f"kappa_{n}(hh*)",
            kappa_grouped([unit] * n, ctx),
            catalan(n),
        )
    return r


def criterion_products_stay_alternating() -> CheckResult:
    r = CheckResult(6, "multiplying by a free element keeps the pattern")
    pairs = [
        ("circular x free Poisson", CircularModel(), FreePoissonModel(Q(1))),
        ("unitary x semicircular", HaarUnitaryModel(), SemicircularModel()),
    ]
    for label, left, right in pairs:
        rep = check_product_r_diagonal(left, right, 6)
        r.expect(f"{label} at order 6", rep.passed, True)
        r.expect(f"{label} geodesic assertions ran", rep.geodesic_assertions > 0, True)
    ctx, unit = _product_of_two_circulars()
    h_table = r_diagonal_model_from_word("h", unit[:2], ctx, order=6)
    rep = check_product_r_diagonal(h_table, FreePoissonModel(Q(1), name="q"), 6)
    r.expect("(c1 c2) table x free Poisson at order 6", rep.passed, True)
    return r


def criterion_haar_powers() -> CheckResult:
    r = CheckResult(7, "powers of the unitary: the (p-1) n law and linearity")
    for p in range(1, 4):
        for m in range(1, 4):
            for n in range(1, 4):
                expected = (p - 1) * n if m == n else 0
                r.expect(
                    f"kappa_{{{m},{n}}}(u^{p}...)",
                    haar_power_cumulants(p, m, n),
                    expected,
                )
    rng = random.Random(31415)
    for trial in range(3):
        m, n = rng.choice([(1, 1), (1, 2), (2, 2), (1, 3), (3, 1), (2, 1)])
        eps = tuple(rng.choice([1, -1]) for _ in range(m))
        theta = tuple(rng.choice([1, -1]) for _ in range(n))
        k1 = haar_power_cumulants(1, m, n, (eps, theta))
        k2 = haar_power_cumulants(2, m, n, (eps, theta))
        law = all(
            haar_power_cumulants(p, m, n, (eps, theta))
            == p * (k2 - k1) + (2 * k1 - k2)
            for p in range(3, 6)
        )
        r.expect(f"linearity in p at {(m, n, eps, theta)}", law, True)
    return r


def criterion_conjugation() -> CheckResult:
    r = CheckResult(8, "conjugation by a circular element")
    rep = conjugation_by_circular(SemicircularModel(), 5)
    r.expect("cac* matches fluctuations of semicircular (p+q <= 5)", rep.passed, True)
    ctx, unit = _product_of_two_circulars()
    a_table = self_adjoint_model_from_word("x", unit, ctx, 5)
    rep2 = conjugation_by_circular(a_table, 5)
    r.expect("cac* matches fluctuations of hh* table (p+q <= 5)", rep2.passed, True)
    r.expect("kappa_{1,2}(c hh* c*)", rep2.second[(1, 2)], 20)

    mixed = FamilyContext([HaarUnitaryModel(), SemicircularModel()])
    u, us, s = mixed.letter("u"), mixed.letter("u*"), mixed.letter("s")
    value = products_as_arguments_second([(u, s, us)], [(s,)], mixed)
    r.expect("kappa_{1,1}(usu*, s) detects the broken independence", value, 1)
    return r


def criterion_three_circulars() -> CheckResult:
    r = CheckResult(9, "product of three circulars")
    models = [CircularModel("e1"), CircularModel("e2"), CircularModel("e3")]
    ctx = FamilyContext(models)
    h3 = ctx.word("e1 e2 e3")
    h3s = ctx.star_word(h3)
    for n in range(1, 5):
        disc_pairings = sum(1 for _ in iter_nc(2 * n, block_ok=lambda b: len(b) == 2))
        r.expect(f"|NC2({2*n})| = Catalan({n})", disc_pairings, catalan(n))
        groups = [h3 if i % 2 == 0 else h3s for i in range(2 * n)]
        r.expect(f"kappa_{2*n}(h3, h3*, ...)", kappa_grouped(groups, ctx), catalan(n))
    # The alternating cumulants of h3 come from the products-as-arguments
    # expansion (the uniform product formula covers unstarred powers,
    # which vanish for circular factors).
    for p in range(1, 4):
        for q in range(p, 5 - p):
            expected = Q(len(enumerate_annular_pairings(AnnulusShape(2 * p, 2 * q))), 2)
            groups_l = [h3 if i % 2 == 0 else h3s for i in range(2 * p)]
            groups_r = [h3 if i % 2 == 0 else h3s for i in range(2 * q)]
            got = products_as_arguments_second(groups_l, groups_r, ctx)
            r.expect(f"kappa_{{{2*p},{2*q}}}(h3 alternating)", got, expected)
    return r


def criterion_series() -> CheckResult:
    r = CheckResult(10, "generating-function identities")
    semi = SemicircularModel()
    beta_s = determining_of_even(semi, 8)
    k1s, k2s = square_cumulants(beta_s, 8)
    r.expect(
        "semicircular square vs closed form to total 8",
        all(v == p * math.comb(p + q - 1, p) for (p, q), v in k2s.items()),
        True,
    )
    r.expect(
        "first-order identity (semicircular)",
        check_first_order_relation(k1s, beta_s.first, 8).is_zero(),
        True,
    )
    r.expect(
        "second-order identity (semicircular)",
        check_second_order_relation(k2s, beta_s.second, k1s, beta_s.first, 10).is_zero(),
        True,
    )

    beta_c = determining_of_r_diagonal(CircularModel(), 8)
    k1c, k2c = square_cumulants(beta_c, 8)
    r.expect(
        "first-order identity (circular)",
        check_first_order_relation(k1c, beta_c.first, 8).is_zero(),
        True,
    )
    r.expect(
        "second-order identity (circular)",
        check_second_order_relation(k2c, beta_c.second, k1c, beta_c.first, 10).is_zero(),
        True,
    )

    triv1 = {n: Q(1 if n == 1 else 0) for n in range(1, 9)}
    triv2 = {(p, q): Q(0) for p in range(1, 8) for q in range(1, 9 - p)}
    beta_u = determining_from_square(triv1, triv2, 8)
    r.expect(
        "first-order identity (unitary)",
        check_first_order_relation(triv1, beta_u.first, 8).is_zero(),
        True,
    )
    r.expect(
        "second-order identity (unitary)",
        check_second_order_relation(triv2, beta_u.second, triv1, beta_u.first, 10).is_zero(),
        True,
    )

    ctx, unit = _product_of_two_circulars()
    table = self_adjoint_model_from_word("x", unit, ctx, 5)
    r.expect(
        "moment-side first-order identity (hh*)",
        check_first_order_relation(table.moments, table.first, 5).is_zero(),
        True,
    )
    r.expect(
        "moment-side second-order identity (hh*)",
        check_second_order_relation(
            table.fluctuations, table.second, table.moments, table.first, 7
        ).is_zero(),
        True,
    )
    return r


def criterion_hermitization() -> CheckResult:
    r = CheckResult(11, "hermitization preserves the determining data")
    for label, model in [("circular", CircularModel()), ("unitary", HaarUnitaryModel())]:
        A = hermitization(model, 6)
        d_a = determining_of_r_diagonal(model, 6)
        d_A = determining_of_even(A, 6)
        r.expect(f"first-order determining match ({label})", d_A.first, d_a.first)
        r.expect(
            f"second-order determining match ({label})",
            {c: d_A.second[c] for c in sorted(d_A.second)},
            {c: d_a.second[c] for c in sorted(d_a.second)},
        )
        x = A.letter(A.name)
        for p in range(1, 4):
            for q in range(1, 4):
                correction = Q(0)
                for perm in enumerate_snc_preserving_all_through(
                    AnnulusShape(2 * p, 2 * q)
                ):
                    value = Q(1)
                    for cyc in perm.cycles():
                        value *= A.kappa1((x,) * len(cyc))
                        if not value:
                            break
                    correction += value
                r.expect(
                    f"correction identity at ({p},{q}) ({label})",
                    A.kappa2((x,) * (2 * p), (x,) * (2 * q)) + correction,
                    d_a.second[(p, q)],
                )
    return r


CRITERIA = [
    criterion_counting,
    criterion_oracles,
    criterion_bijections,
    criterion_squares,
    criterion_hh_star,
    criterion_products_stay_alternating,
    criterion_haar_powers,
    criterion_conjugation,
    criterion_three_circulars,
    criterion_series,
    criterion_hermitization,
]


def run_all() -> list[CheckResult]:
    return [fn() for fn in CRITERIA]
