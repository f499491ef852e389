"""Built-in second-order distributions and the JSON model format.

The four stock models: the standard semicircular element, a circular
element, a free Poisson element with rational rate, and the
moment-defined unitary whose fluctuations are k on matched powers.
Arbitrary models load from JSON documents, either naming a rule or
carrying explicit tables.
"""

from __future__ import annotations

import itertools
import json
from fractions import Fraction
from typing import Any, Iterable

from .cumulants import (
    CumulantModel,
    Letter,
    ModelError,
    ONE,
    Q,
    TruncationError,
    Word,
    ZERO,
    _annular_kappa_sum,
    _joined_kappa_sum,
    _letter_view,
)


def parse_rational(text: Any) -> Fraction:
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, str):
        return Fraction(text)
    raise ModelError(f"expected an exact rational (int or 'p/q' string), got {text!r}")


def format_rational(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}" if value.denominator != 1 else str(
        value.numerator
    )


class SemicircularModel(CumulantModel):
    """Variance-one semicircular: the only cumulant is the pair one."""

    kind = "semicircular"

    def __init__(self, name: str = "s"):
        self.name = name
        self.letters = {name: Letter(name, family=name, star=name)}

    def kappa1(self, letters: Word) -> Fraction:
        return ONE if len(letters) == 2 else ZERO

    def kappa2(self, left: Word, right: Word) -> Fraction:
        return ZERO

    def second_order_vanishes(self) -> bool:
        return True

    def can_extend(self, block: Word, nxt: Letter, marked: bool) -> bool:
        return not marked and len(block) < 2

    def can_close(self, block: Word, marked: bool) -> bool:
        return not marked and len(block) == 2

    def describe(self) -> dict:
        return {"rule": self.kind, "letters": _letters_doc(self.letters)}


class CircularModel(CumulantModel):
    """Circular element: pair cumulants between the letter and its star."""

    kind = "circular"

    def __init__(self, name: str = "c"):
        star = name + "*"
        self.name = name
        self.letters = {
            name: Letter(name, family=name, star=star),
            star: Letter(star, family=name, star=name),
        }

    def kappa1(self, letters: Word) -> Fraction:
        if len(letters) == 2 and letters[0].star == letters[1].name:
            return ONE
        return ZERO

    def kappa2(self, left: Word, right: Word) -> Fraction:
        return ZERO

    def second_order_vanishes(self) -> bool:
        return True

    def can_extend(self, block: Word, nxt: Letter, marked: bool) -> bool:
        return not marked and len(block) == 1 and block[0].star == nxt.name

    def can_close(self, block: Word, marked: bool) -> bool:
        return not marked and len(block) == 2

    def describe(self) -> dict:
        return {"rule": self.kind, "letters": _letters_doc(self.letters)}


class FreePoissonModel(CumulantModel):
    """All free cumulants equal to the rate; fluctuations vanish."""

    kind = "free_poisson"

    def __init__(self, rate: Fraction = ONE, name: str = "p"):
        rate = Q(rate)
        if rate <= 0:
            raise ModelError("free Poisson rate must be a positive rational")
        self.rate = rate
        self.name = name
        self.letters = {name: Letter(name, family=name, star=name)}

    def kappa1(self, letters: Word) -> Fraction:
        return self.rate

    def kappa2(self, left: Word, right: Word) -> Fraction:
        return ZERO

    def second_order_vanishes(self) -> bool:
        return True

    def can_extend(self, block: Word, nxt: Letter, marked: bool) -> bool:
        return not marked

    def can_close(self, block: Word, marked: bool) -> bool:
        return not marked

    def describe(self) -> dict:
        return {
            "rule": self.kind,
            "rate": format_rational(self.rate),
            "letters": _letters_doc(self.letters),
        }


class HaarUnitaryModel(CumulantModel):
    """Moment-defined unitary: powers have mean zero and fluctuation
    k between matched powers k and -k.

    Cumulants are derived by inversion and memoized per exponent
    pattern.  First-order cumulants vanish off alternating patterns
    (verified in the tests by running the inversion unpruned), which the
    support hooks exploit.
    """

    kind = "haar_unitary"

    def __init__(self, name: str = "u", fluctuation_scale: int = 1):
        star = name + "*"
        self.name = name
        self.fluctuation_scale = fluctuation_scale
        self.letters = {
            name: Letter(name, family=name, star=star),
            star: Letter(star, family=name, star=name),
        }

    def _exp(self, letter: Letter) -> int:
        return 1 if letter.name == self.name else -1

    def _exps(self, letters: Word) -> tuple[int, ...]:
        return tuple(self._exp(x) for x in letters)

    def phi_rule(self, word: Word) -> Fraction:
        return ONE if sum(self._exps(word)) == 0 else ZERO

    def phi2_rule(self, left: Word, right: Word) -> Fraction:
        k = sum(self._exps(left))
        if k + sum(self._exps(right)) != 0:
            return ZERO
        return Q(abs(k) * self.fluctuation_scale)

    def kappa1(self, letters: Word) -> Fraction:
        exps = self._exps(letters)
        cache = self._cache("kappa1")
        hit = cache.get(exps)
        if hit is not None:
            return hit
        n = len(exps)
        if n == 1:
            value = ZERO  # phi of a single power
        else:
            value = ONE if sum(exps) == 0 else ZERO
            for size in range(1, n):
                for rest in itertools.combinations(range(1, n), size - 1):
                    block = (0,) + rest
                    sub = self.kappa1(tuple(letters[i] for i in block))
                    if not sub:
                        continue
                    for a, b in zip(block, block[1:] + (n,)):
                        if sum(exps[a + 1 : b]) != 0:
                            sub = ZERO
                            break
                    value -= sub
        cache[exps] = value
        return value

    def kappa2(self, left: Word, right: Word) -> Fraction:
        key = (self._exps(left), self._exps(right))
        cache = self._cache("kappa2")
        hit = cache.get(key)
        if hit is not None:
            return hit
        view = _letter_view(left + right, self)
        m, n = len(left), len(right)
        value = (
            self.phi2_rule(left, right)
            - _annular_kappa_sum(view, m, n)
            - _joined_kappa_sum(view, m, n, skip_top=True)
        )
        cache[key] = value
        return value

    def can_extend(self, block: Word, nxt: Letter, marked: bool) -> bool:
        if marked:
            return True
        return self._exp(block[-1]) == -self._exp(nxt)

    def can_close(self, block: Word, marked: bool) -> bool:
        if marked:
            return True
        return (
            len(block) % 2 == 0
            and self._exp(block[-1]) == -self._exp(block[0])
        )

    def describe(self) -> dict:
        doc = {"rule": self.kind, "letters": _letters_doc(self.letters)}
        if self.fluctuation_scale != 1:
            doc["fluctuation_scale"] = self.fluctuation_scale
        return doc


class SelfAdjointTableModel(CumulantModel):
    """One self-adjoint letter with explicit cumulant tables.

    ``first[n]`` is the order-n cumulant, ``second[(p, q)]`` the
    second-order one.  Lookups beyond the truncation raise instead of
    extrapolating.
    """

    kind = "table"

    def __init__(
        self,
        name: str,
        first: dict[int, Fraction],
        second: dict[tuple[int, int], Fraction],
        truncation: int,
        moments: dict[int, Fraction] | None = None,
        fluctuations: dict[tuple[int, int], Fraction] | None = None,
    ):
        self.name = name
        self.letters = {name: Letter(name, family=name, star=name)}
        self.first = {n: Q(v) for n, v in first.items()}
        self.second = {cell: Q(v) for cell, v in second.items()}
        self.truncation = truncation
        self.moments = dict(moments) if moments else None
        self.fluctuations = dict(fluctuations) if fluctuations else None

    def kappa1(self, letters: Word) -> Fraction:
        n = len(letters)
        if n > self.truncation:
            raise TruncationError(
                f"first-order cumulant of order {n} beyond truncation {self.truncation}"
            )
        return self.first.get(n, ZERO)

    def kappa2(self, left: Word, right: Word) -> Fraction:
        cell = (len(left), len(right))
        if sum(cell) > self.truncation:
            raise TruncationError(
                f"second-order cell {cell} beyond truncation {self.truncation}"
            )
        return self.second.get(cell, ZERO)

    def second_order_vanishes(self) -> bool:
        return not any(self.second.values())

    def can_close(self, block: Word, marked: bool) -> bool:
        if marked:
            return not self.second_order_vanishes()
        n = len(block)
        return n <= self.truncation and bool(self.first.get(n))

    def describe(self) -> dict:
        return {
            "letters": _letters_doc(self.letters),
            "truncation": self.truncation,
            "first_order": {
                ".".join([self.name] * n): format_rational(v)
                for n, v in sorted(self.first.items())
            },
            "second_order": {
                "|".join(
                    [".".join([self.name] * p), ".".join([self.name] * q)]
                ): format_rational(v)
                for (p, q), v in sorted(self.second.items())
            },
        }


class RDiagonalTableModel(CumulantModel):
    """A star-pair letter whose cumulants live on alternating words.

    The data are the determining sequences: ``first[n]`` is the cumulant
    of the alternating word of length 2n, ``second[(p, q)]`` of the
    alternating pair of lengths (2p, 2q).  Everything off the
    alternating pattern is zero by fiat of the model.
    """

    kind = "r_diagonal_table"

    def __init__(
        self,
        name: str,
        first: dict[int, Fraction],
        second: dict[tuple[int, int], Fraction],
        truncation: int,
    ):
        star = name + "*"
        self.name = name
        self.letters = {
            name: Letter(name, family=name, star=star),
            star: Letter(star, family=name, star=name),
        }
        self.first = {n: Q(v) for n, v in first.items()}
        self.second = {cell: Q(v) for cell, v in second.items()}
        self.truncation = truncation

    def _alternating(self, letters: Word) -> bool:
        n = len(letters)
        if n % 2:
            return False
        return all(
            letters[i].star == letters[(i + 1) % n].name for i in range(n)
        )

    def kappa1(self, letters: Word) -> Fraction:
        if not self._alternating(letters):
            return ZERO
        n = len(letters) // 2
        if 2 * n > self.truncation:
            raise TruncationError(
                f"alternating cumulant of length {2*n} beyond truncation {self.truncation}"
            )
        return self.first.get(n, ZERO)

    def kappa2(self, left: Word, right: Word) -> Fraction:
        if not (self._alternating(left) and self._alternating(right)):
            return ZERO
        cell = (len(left) // 2, len(right) // 2)
        if len(left) + len(right) > self.truncation:
            raise TruncationError(
                f"second-order cell {cell} beyond truncation {self.truncation}"
            )
        return self.second.get(cell, ZERO)

    def second_order_vanishes(self) -> bool:
        return not any(self.second.values())

    def can_extend(self, block: Word, nxt: Letter, marked: bool) -> bool:
        return block[-1].star == nxt.name

    def can_close(self, block: Word, marked: bool) -> bool:
        if len(block) % 2 or block[-1].star != block[0].name:
            return False
        if marked:
            return not self.second_order_vanishes()
        return True

    def describe(self) -> dict:
        def alt_word(n: int, start: str) -> str:
            names = [self.name, self.name + "*"]
            if start != self.name:
                names.reverse()
            return ".".join(names[i % 2] for i in range(2 * n))

        return {
            "letters": _letters_doc(self.letters),
            "truncation": self.truncation,
            "r_diagonal": True,
            "first_order": {
                alt_word(n, self.name): format_rational(v)
                for n, v in sorted(self.first.items())
            },
            "second_order": {
                f"{alt_word(p, self.name)}|{alt_word(q, self.name)}": format_rational(v)
                for (p, q), v in sorted(self.second.items())
            },
        }


def _letters_doc(letters: dict[str, Letter]) -> list[dict]:
    return [
        {"name": x.name, "family": x.family, "star": x.star}
        for x in letters.values()
    ]


# ---------------------------------------------------------------------------
# construction and JSON ingestion


BUILTIN_KINDS = ("semicircular", "circular", "free_poisson", "haar_unitary")


def build(kind: str, *, rate: Fraction | str | None = None, name: str | None = None) -> CumulantModel:
    """Build a stock model by name."""
    if kind == "semicircular":
        return SemicircularModel(name or "s")
    if kind == "circular":
        return CircularModel(name or "c")
    if kind == "free_poisson":
        return FreePoissonModel(parse_rational(rate) if rate is not None else ONE, name or "p")
    if kind == "haar_unitary":
        return HaarUnitaryModel(name or "u")
    raise ModelError(f"unknown builtin model {kind!r} (have {BUILTIN_KINDS})")


def emit_model(model: CumulantModel) -> dict:
    """A JSON-ready document reproducing the model via :func:`load_model`."""
    if not hasattr(model, "describe"):
        raise ModelError(f"cannot serialize {type(model).__name__}")
    return model.describe()


def _fail(pointer: str, message: str) -> ModelError:
    return ModelError(f"{message} (at {pointer})")


def _load_letters(doc: dict) -> dict[str, Letter]:
    raw = doc.get("letters")
    if not isinstance(raw, list) or not raw:
        raise _fail("/letters", "a nonempty letter list is required")
    letters: dict[str, Letter] = {}
    for i, entry in enumerate(raw):
        for field in ("name", "family", "star"):
            if field not in entry:
                raise _fail(f"/letters/{i}/{field}", "missing field")
        letters[entry["name"]] = Letter(entry["name"], entry["family"], entry["star"])
    for i, x in enumerate(letters.values()):
        partner = letters.get(x.star)
        if partner is None or partner.star != x.name:
            raise _fail(f"/letters/{i}/star", f"star pairing of {x.name!r} is not involutive")
    return letters


def _split_word_key(key: str, letters: dict[str, Letter], pointer: str) -> tuple[str, ...]:
    names = tuple(key.split("."))
    for name in names:
        if name not in letters:
            raise _fail(pointer, f"unknown letter {name!r} in word key")
    return names


def load_model(doc: dict | str) -> CumulantModel:
    """Validate and build a model from a JSON document (or JSON text)."""
    if isinstance(doc, str):
        doc = json.loads(doc)
    if not isinstance(doc, dict):
        raise _fail("", "model document must be a JSON object")
    if "rule" in doc:
        kind = doc["rule"]
        if kind not in BUILTIN_KINDS:
            raise _fail("/rule", f"unknown rule {kind!r}")
        letters = _load_letters(doc) if "letters" in doc else None
        name = None
        if letters:
            name = sorted(letters, key=len)[0]
        model = build(kind, rate=doc.get("rate"), name=name)
        if kind == "haar_unitary" and "fluctuation_scale" in doc:
            model.fluctuation_scale = int(doc["fluctuation_scale"])
        return model

    letters = _load_letters(doc)
    truncation = doc.get("truncation")
    if not isinstance(truncation, int) or truncation < 1:
        raise _fail("/truncation", "a positive integer truncation is required")
    first_raw = doc.get("first_order", {})
    second_raw = doc.get("second_order", {})

    if doc.get("r_diagonal"):
        return _load_r_diagonal(letters, first_raw, second_raw, truncation)
    return _load_self_adjoint(letters, first_raw, second_raw, truncation)


def _load_self_adjoint(letters, first_raw, second_raw, truncation) -> SelfAdjointTableModel:
    if len(letters) != 1:
        raise _fail("/letters", "a plain table model needs one self-adjoint letter")
    (name,) = letters
    if letters[name].star != name:
        raise _fail("/letters/0/star", "the table letter must be self-adjoint")
    first: dict[int, Fraction] = {}
    for key, value in first_raw.items():
        names = _split_word_key(key, letters, f"/first_order/{key}")
        first[len(names)] = parse_rational(value)
    for n in range(1, truncation + 1):
        if n not in first:
            raise _fail(
                f"/first_order/{'.'.join([name]*n)}",
                f"first-order table incomplete: order {n} missing",
            )
    second: dict[tuple[int, int], Fraction] = {}
    for key, value in second_raw.items():
        halves = key.split("|")
        if len(halves) != 2:
            raise _fail(f"/second_order/{key}", "key must be 'word|word'")
        p = len(_split_word_key(halves[0], letters, f"/second_order/{key}"))
        q = len(_split_word_key(halves[1], letters, f"/second_order/{key}"))
        second[(p, q)] = parse_rational(value)
    for p in range(1, truncation):
        for q in range(1, truncation + 1 - p):
            if (p, q) not in second:
                raise _fail(
                    f"/second_order/({p},{q})",
                    f"second-order table incomplete: cell ({p},{q}) missing",
                )
    return SelfAdjointTableModel(name, first, second, truncation)


def _load_r_diagonal(letters, first_raw, second_raw, truncation) -> RDiagonalTableModel:
    if len(letters) != 2:
        raise _fail("/letters", "an r-diagonal table model needs a star pair")
    name = min(letters, key=len)
    first: dict[int, Fraction] = {}
    for key, value in first_raw.items():
        names = _split_word_key(key, letters, f"/first_order/{key}")
        if len(names) % 2:
            raise _fail(f"/first_order/{key}", "alternating words have even length")
        first[len(names) // 2] = parse_rational(value)
    second: dict[tuple[int, int], Fraction] = {}
    for key, value in second_raw.items():
        halves = key.split("|")
        if len(halves) != 2:
            raise _fail(f"/second_order/{key}", "key must be 'word|word'")
        p = len(_split_word_key(halves[0], letters, f"/second_order/{key}"))
        q = len(_split_word_key(halves[1], letters, f"/second_order/{key}"))
        if p % 2 or q % 2:
            raise _fail(f"/second_order/{key}", "alternating words have even length")
        second[(p // 2, q // 2)] = parse_rational(value)
    for n in range(1, truncation // 2 + 1):
        if n not in first:
            raise _fail(
                "/first_order",
                f"alternating table incomplete: length {2*n} missing",
            )
    return RDiagonalTableModel(name, first, second, truncation)


def models_equal(a: CumulantModel, b: CumulantModel) -> bool:
    return emit_model(a) == emit_model(b)


# ---------------------------------------------------------------------------
# table models extracted from word elements


def self_adjoint_model_from_word(
    name: str,
    word: Word,
    ctx: CumulantModel,
    order: int,
) -> SelfAdjointTableModel:
    """Tables of the element given by a self-adjoint word over ``ctx``.

    Moments and fluctuations come from the word engines, cumulants by
    the leading-term inversions.  The word must be its own adjoint.
    """
    from .cumulants import (
        kappa2_table_from_moments,
        kappa_table_from_moments,
        word_phi,
        word_phi2,
    )

    if ctx.star_word(word) != word:
        raise ModelError("the word must be self-adjoint (equal to its star)")
    moments = {n: word_phi(word * n, ctx) for n in range(1, order + 1)}
    fluct = {
        (p, q): word_phi2(word * p, word * q, ctx)
        for p in range(1, order)
        for q in range(1, order + 1 - p)
    }
    first = kappa_table_from_moments(moments, order)
    second = kappa2_table_from_moments(first, fluct, order)
    return SelfAdjointTableModel(
        name, first, second, order, moments=moments, fluctuations=fluct
    )


def r_diagonal_model_from_word(
    name: str,
    word: Word,
    ctx: CumulantModel,
    order: int,
    verify_order: int = 4,
) -> RDiagonalTableModel:
    """Alternating cumulant tables of a word element.

    The vanishing of everything off the alternating pattern is checked
    up to ``verify_order`` (both cumulant orders, no support pruning on
    the pattern structure), then the alternating values are extracted up
    to ``order``.
    """
    from .cumulants import (
        adjoint_alternation_hooks,
        kappa2_grouped,
        kappa_grouped,
    )
    import itertools as _it

    star = ctx.star_word(word)

    def groups(eps):
        return [word if e == 1 else star for e in eps]

    for n in range(1, verify_order + 1):
        for eps in _it.product((1, -1), repeat=n):
            allowed = n % 2 == 0 and all(
                eps[i] == -eps[i + 1] for i in range(n - 1)
            )
            if allowed:
                continue
            value = kappa_grouped(groups(eps), ctx)
            if value:
                raise ModelError(
                    f"word element is not adjoint-alternating: kappa_{n}{eps} = {value}"
                )
    for p in range(1, verify_order):
        for q in range(1, verify_order + 1 - p):
            for eps in _it.product((1, -1), repeat=p):
                for theta in _it.product((1, -1), repeat=q):
                    allowed = (
                        p % 2 == 0
                        and q % 2 == 0
                        and all(eps[i] == -eps[i + 1] for i in range(p - 1))
                        and all(theta[i] == -theta[i + 1] for i in range(q - 1))
                    )
                    if allowed:
                        continue
                    value = kappa2_grouped(groups(eps), groups(theta), ctx)
                    if value:
                        raise ModelError(
                            "word element is not second-order adjoint-alternating: "
                            f"kappa_{{{p},{q}}}{eps}|{theta} = {value}"
                        )

    hooks = adjoint_alternation_hooks(ctx)
    alternating = lambda k: groups([1 if i % 2 == 0 else -1 for i in range(k)])
    first = {n: kappa_grouped(alternating(2 * n), ctx) for n in range(1, order + 1)}
    second = {
        (p, q): kappa2_grouped(
            alternating(2 * p), alternating(2 * q), ctx, group_hooks=hooks
        )
        for p in range(1, order)
        for q in range(1, order + 1 - p)
    }
    return RDiagonalTableModel(name, first, second, truncation=2 * order)
