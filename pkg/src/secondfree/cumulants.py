"""The moment-cumulant calculus over one or several free families.

Values are exact ``fractions.Fraction`` throughout; there is no floating
point anywhere in this module.

Two evaluation routes exist for every transform and they are tested
against each other:

* literal sums over the enumerated non-crossing / annular / partitioned
  families (``phi_by_nc_sum``, ``phi2_by_sum``, ``products_as_arguments_*``),
* recursive inversions that peel off the leading term
  (``word_phi``, ``word_phi2``, ``kappa_grouped``, ``kappa2_grouped``).

Both routes skip only terms whose cumulant factor is identically zero;
models advertise those zeros through support hooks so that long words
stay tractable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Sequence

from .annular import (
    AnnularConfig,
    DEFAULT_CONFIG,
    enumerate_nc,
    enumerate_ps_nc_prime,
    enumerate_snc,
    iter_nc_blocks,
    iter_snc_hooked,
)
from .perm import AnnulusShape, PartitionedPermutation, Permutation, SetPartition

Q = Fraction
ZERO = Fraction(0)
ONE = Fraction(1)


class TruncationError(ValueError):
    """A word is longer than the model's truncation order."""


class ModelError(ValueError):
    """A word or block grouping the model cannot evaluate."""


@dataclass(frozen=True, slots=True)
class Letter:
    """A symbol of a *-alphabet.

    ``star`` names the adjoint partner; a self-adjoint letter is its own
    partner.  ``family`` is the freeness class the letter belongs to.
    """

    name: str
    family: str
    star: str

    @property
    def self_adjoint(self) -> bool:
        return self.star == self.name


Word = tuple[Letter, ...]


class CumulantModel:
    """Rules for first- and second-order cumulants of words.

    Subclasses provide :meth:`kappa1` and :meth:`kappa2` and override the
    support hooks where they know cumulants vanish.  Hooks are sound
    over-approximations: returning ``False`` promises the corresponding
    cumulant factor is zero.  ``marked=True`` asks about a cycle destined
    to become one side of a second-order (joined) block.
    """

    letters: dict[str, Letter]
    truncation: int | None = None

    def letter(self, name: str) -> Letter:
        try:
            return self.letters[name]
        except KeyError:
            raise ModelError(f"unknown letter {name!r}") from None

    def word(self, text: str | Iterable[str]) -> Word:
        names = text.split() if isinstance(text, str) else list(text)
        return tuple(self.letter(n) for n in names)

    def star_word(self, w: Word) -> Word:
        return tuple(self.letter(x.star) for x in reversed(w))

    def kappa1(self, letters: Word) -> Fraction:
        raise NotImplementedError

    def kappa2(self, left: Word, right: Word) -> Fraction:
        raise NotImplementedError

    def phi_rule(self, word: Word) -> Fraction | None:
        """Closed-form moment, for models defined on the moment side."""
        return None

    def phi2_rule(self, left: Word, right: Word) -> Fraction | None:
        return None

    def second_order_vanishes(self) -> bool:
        return False

    def can_extend(self, block: Word, nxt: Letter, marked: bool) -> bool:
        if marked:
            return not self.second_order_vanishes()
        return True

    def can_close(self, block: Word, marked: bool) -> bool:
        if marked:
            return not self.second_order_vanishes()
        return True

    def _cache(self, kind: str) -> dict:
        caches = self.__dict__.setdefault("_caches", {})
        return caches.setdefault(kind, {})

    def check_truncation(self, total: int) -> None:
        if self.truncation is not None and total > self.truncation:
            raise TruncationError(
                f"word of length {total} exceeds truncation {self.truncation}"
            )


class FamilyContext(CumulantModel):
    """Several mutually free families: mixed cumulants vanish."""

    def __init__(self, models: Sequence[CumulantModel]):
        self.models: dict[str, CumulantModel] = {}
        self.letters = {}
        for model in models:
            for name, letter in model.letters.items():
                if name in self.letters:
                    raise ModelError(f"duplicate letter {name!r} across families")
                self.letters[name] = letter
                self.models[letter.family] = model
        self.truncation = None

    def _family_model(self, letters: Word) -> CumulantModel | None:
        families = {x.family for x in letters}
        if len(families) != 1:
            return None
        return self.models[letters[0].family]

    def kappa1(self, letters: Word) -> Fraction:
        model = self._family_model(letters)
        return ZERO if model is None else model.kappa1(letters)

    def kappa2(self, left: Word, right: Word) -> Fraction:
        model = self._family_model(left + right)
        return ZERO if model is None else model.kappa2(left, right)

    def phi_rule(self, word: Word) -> Fraction | None:
        if not word:
            return ONE
        model = self._family_model(word)
        return None if model is None else model.phi_rule(word)

    def phi2_rule(self, left: Word, right: Word) -> Fraction | None:
        if not left or not right:
            return None
        model = self._family_model(left + right)
        return None if model is None else model.phi2_rule(left, right)

    def second_order_vanishes(self) -> bool:
        return all(m.second_order_vanishes() for m in self.models.values())

    def can_extend(self, block: Word, nxt: Letter, marked: bool) -> bool:
        if nxt.family != block[0].family:
            return False
        return self.models[nxt.family].can_extend(block, nxt, marked)

    def can_close(self, block: Word, marked: bool) -> bool:
        return self.models[block[0].family].can_close(block, marked)


# ---------------------------------------------------------------------------
# multiplicative extension over partitioned permutations


def _block_cycles(perm: Permutation, block: tuple[int, ...]) -> list[tuple[int, ...]]:
    seen: set[int] = set()
    cycles = []
    for point in block:
        if point in seen:
            continue
        cyc = perm.cycle_of(point)
        seen.update(cyc)
        cycles.append(cyc)
    return cycles


def _cycle_words(x: PartitionedPermutation, word: Word) -> list[tuple[Word, ...]]:
    """Letters per block, one or two cycles each.

    A cycle is read in cycle order starting from its minimum; in a
    joined pair the cycle with the smaller minimum comes first.
    """
    perm = x.permutation
    groups: list[tuple[Word, ...]] = []
    for block in x.partition.blocks:
        cycles = sorted(_block_cycles(perm, block))
        if len(cycles) > 2:
            raise ModelError(
                f"block {block} joins {len(cycles)} cycles; at most two are allowed"
            )
        groups.append(tuple(tuple(word[i - 1] for i in cyc) for cyc in cycles))
    return groups


def kappa_multiplicative(
    x: PartitionedPermutation, word: Word, model: CumulantModel
) -> Fraction:
    """kappa_(U, pi)(word): product over blocks of kappa factors."""
    if x.size != len(word):
        raise ModelError("word length must match the partitioned permutation")
    total = ONE
    for group in _cycle_words(x, word):
        if len(group) == 1:
            total *= model.kappa1(group[0])
        else:
            total *= model.kappa2(group[0], group[1])
        if not total:
            return ZERO
    return total


def free_families_kappa(
    x: PartitionedPermutation, word: Word, models: Sequence[CumulantModel]
) -> Fraction:
    """Multiplicative cumulant over several free families (mixed blocks die)."""
    return kappa_multiplicative(x, word, FamilyContext(list(models)))


# ---------------------------------------------------------------------------
# the index-level sum machinery
#
# Sums over annular permutations and joined disc pairs are shared by the
# letter-level engines and the grouped (products-as-arguments) engines.
# An ``ArgView`` presents a sequence of arguments: single letters for
# word moments, whole groups for compound arguments.


class ArgView:
    """Arguments 1..n with cumulant evaluation and support hooks."""

    def __init__(
        self,
        count: int,
        kappa1_of: Callable[[tuple[int, ...]], Fraction],
        kappa2_of: Callable[[tuple[int, ...], tuple[int, ...]], Fraction],
        can_extend: Callable[[tuple[int, ...], int, bool], bool],
        can_close: Callable[[tuple[int, ...], bool], bool],
        joins_vanish: bool,
    ):
        self.count = count
        self.kappa1_of = kappa1_of
        self.kappa2_of = kappa2_of
        self.can_extend = can_extend
        self.can_close = can_close
        self.joins_vanish = joins_vanish

    def hooks(self, relaxed: bool):
        def extend(block: tuple[int, ...], nxt: int) -> bool:
            if self.can_extend(block, nxt, False):
                return True
            return relaxed and self.can_extend(block, nxt, True)

        def close(block: tuple[int, ...]) -> bool:
            if self.can_close(block, False):
                return True
            return relaxed and self.can_close(block, True)

        return extend, close


def _letter_view(word: Word, model: CumulantModel) -> ArgView:
    def lets(block: tuple[int, ...]) -> Word:
        return tuple(word[i - 1] for i in block)

    return ArgView(
        count=len(word),
        kappa1_of=lambda b: model.kappa1(lets(b)),
        kappa2_of=lambda bl, br: model.kappa2(lets(bl), lets(br)),
        can_extend=lambda b, nxt, m: model.can_extend(lets(b), word[nxt - 1], m),
        can_close=lambda b, m: model.can_close(lets(b), m),
        joins_vanish=model.second_order_vanishes(),
    )


def _annular_kappa_sum(
    view: ArgView,
    n1: int,
    n2: int,
    term_filter: Callable[[Permutation], bool] | None = None,
    term_callback: Callable | None = None,
) -> Fraction:
    """Sum of first-order kappa products over the annular family."""
    shape = AnnulusShape(n1, n2)
    extend, close = view.hooks(relaxed=False)
    total = ZERO
    for p in iter_snc_hooked(shape, extend, close):
        if term_filter is not None and not term_filter(p):
            continue
        value = ONE
        for cyc in p.cycles():
            value *= view.kappa1_of(cyc)
            if not value:
                break
        if value:
            if term_callback is not None:
                term_callback(p.cycles(), None, value)
            total += value
    return total


def _marked_candidates(
    view: ArgView, labels: tuple[int, ...]
) -> list[tuple[tuple[tuple[int, ...], ...], tuple[int, ...], Fraction]]:
    """Disc partitions of ``labels`` with one block marked for a join.

    Yields (cycles, marked cycle, product of kappa1 over the others).
    At most one block may have a vanishing kappa1, and then the mark is
    forced onto it.
    """
    extend, close = view.hooks(relaxed=True)
    out = []
    for blocks in iter_nc_blocks(labels, extend, close):
        values = [
            view.kappa1_of(b) if view.can_close(b, False) else ZERO for b in blocks
        ]
        dead = [i for i, v in enumerate(values) if not v]
        if len(dead) > 1:
            continue
        if len(dead) == 1:
            i = dead[0]
            if not view.can_close(blocks[i], True):
                continue
            weight = ONE
            for j, v in enumerate(values):
                if j != i:
                    weight *= v
            out.append((blocks, blocks[i], weight))
        else:
            product = ONE
            for v in values:
                product *= v
            for i, b in enumerate(blocks):
                if view.can_close(b, True):
                    out.append((blocks, b, product / values[i]))
    return out


def _joined_kappa_sum(
    view: ArgView,
    n1: int,
    n2: int,
    *,
    skip_top: bool = False,
    left_filter: Callable | None = None,
    right_filter: Callable | None = None,
    term_callback: Callable | None = None,
) -> Fraction:
    """Sum of kappa_(U, pi) over joined non-crossing disc pairs.

    ``skip_top`` omits the term whose joined block covers everything,
    which is what the leading-term inversions solve for.
    """
    if view.joins_vanish:
        return ZERO
    left = _marked_candidates(view, tuple(range(1, n1 + 1)))
    if left_filter is not None:
        left = [c for c in left if left_filter(c)]
    if not left:
        return ZERO
    right = _marked_candidates(view, tuple(range(n1 + 1, n1 + n2 + 1)))
    if right_filter is not None:
        right = [c for c in right if right_filter(c)]
    total = ZERO
    for blocks_l, marked_l, weight_l in left:
        top_l = len(blocks_l) == 1 and len(marked_l) == n1
        for blocks_r, marked_r, weight_r in right:
            if skip_top and top_l and len(blocks_r) == 1 and len(marked_r) == n2:
                continue
            weight = weight_l * weight_r
            if not weight:
                continue
            k2 = view.kappa2_of(marked_l, marked_r)
            if not k2:
                continue
            value = weight * k2
            if term_callback is not None:
                term_callback(blocks_l + blocks_r, (marked_l, marked_r), value)
            total += value
    return total


# ---------------------------------------------------------------------------
# moments from cumulants


def word_phi(word: Word, model: CumulantModel) -> Fraction:
    """phi(word): the non-crossing cumulant sum.

    Evaluated by the first-block recursion (the block of the leftmost
    letter splits the rest into independent intervals), which is the
    same sum reorganised.
    """
    if not word:
        return ONE
    cache = model._cache("phi")
    key = tuple(x.name for x in word)
    hit = cache.get(key)
    if hit is not None:
        return hit
    value = model.phi_rule(word)
    if value is None:
        value = ZERO
        for block_idx, gaps in _index_blocks(word, model):
            k = model.kappa1(tuple(word[i] for i in block_idx))
            if not k:
                continue
            for gap in gaps:
                k *= word_phi(tuple(word[i] for i in gap), model)
                if not k:
                    break
            value += k
    cache[key] = value
    return value


def _index_blocks(
    word: Word, model: CumulantModel
) -> Iterator[tuple[tuple[int, ...], tuple[tuple[int, ...], ...]]]:
    """Choices for the block of position 0, with the gap intervals."""

    def rec(block: tuple[int, ...], rest: tuple[int, ...]):
        letters = tuple(word[i] for i in block)
        if model.can_close(letters, False):
            yield block, (rest,) if rest else ()
        for t, nxt in enumerate(rest):
            if not model.can_extend(letters, word[nxt], marked=False):
                continue
            gap = rest[:t]
            for blk, gaps in rec(block + (nxt,), rest[t + 1 :]):
                yield blk, ((gap,) if gap else ()) + gaps

    idx = tuple(range(len(word)))
    yield from rec(idx[:1], idx[1:])


def phi_by_nc_sum(word: Word, model: CumulantModel) -> Fraction:
    """Literal moment-cumulant sum over the full disc family; test oracle."""
    if not word:
        return ONE
    total = ZERO
    for p in enumerate_nc(len(word)):
        total += kappa_multiplicative(
            PartitionedPermutation.from_permutation(p), word, model
        )
    return total


def _min_rotation(names: tuple[str, ...]) -> tuple[str, ...]:
    return min(names[i:] + names[:i] for i in range(len(names)))


def word_phi2(w1: Word, w2: Word, model: CumulantModel) -> Fraction:
    """phi_2 of two words: annular cumulant sum plus joined disc pairs.

    Memoized up to rotation of either word (both states are tracial).
    """
    if not w1 or not w2:
        return ZERO
    cache = model._cache("phi2")
    key = (
        _min_rotation(tuple(x.name for x in w1)),
        _min_rotation(tuple(x.name for x in w2)),
    )
    hit = cache.get(key)
    if hit is not None:
        return hit
    value = model.phi2_rule(w1, w2)
    if value is None:
        view = _letter_view(w1 + w2, model)
        m, n = len(w1), len(w2)
        value = _annular_kappa_sum(view, m, n) + _joined_kappa_sum(view, m, n)
    cache[key] = value
    return value


def phi2_by_sum(w1: Word, w2: Word, model: CumulantModel) -> Fraction:
    """Literal second-order moment-cumulant sum; test oracle."""
    if not w1 or not w2:
        return ZERO
    word = w1 + w2
    shape = AnnulusShape(len(w1), len(w2))
    total = ZERO
    for p in enumerate_snc(shape):
        total += kappa_multiplicative(
            PartitionedPermutation.from_permutation(p), word, model
        )
    for x in enumerate_ps_nc_prime(shape):
        total += kappa_multiplicative(x, word, model)
    return total


def kappa2_word(w1: Word, w2: Word, model: CumulantModel) -> Fraction:
    """Second-order cumulant with single letters as arguments.

    Leading-term inversion of the second-order moment-cumulant formula:
    the joined top term is the cumulant being solved for.  The model
    must know its fluctuation moments independently (a rule or a table),
    otherwise its kappa2 is already authoritative.
    """
    cache = model._cache("kappa2_word")
    key = (tuple(x.name for x in w1), tuple(x.name for x in w2))
    hit = cache.get(key)
    if hit is not None:
        return hit
    view = _letter_view(w1 + w2, model)
    m, n = len(w1), len(w2)
    value = (
        word_phi2(w1, w2, model)
        - _annular_kappa_sum(view, m, n)
        - _joined_kappa_sum(view, m, n, skip_top=True)
    )
    cache[key] = value
    return value


# ---------------------------------------------------------------------------
# cumulants with products as arguments


def _group_ends(groups: Sequence[Word]) -> list[int]:
    ends = []
    pos = 0
    for g in groups:
        if not g:
            raise ModelError("groups must be nonempty")
        pos += len(g)
        ends.append(pos)
    return ends


def products_as_arguments_first(
    groups: Sequence[Word],
    model: CumulantModel,
    *,
    use_separation_form: bool = False,
) -> Fraction:
    """First-order cumulant of products: the constrained disc sum.

    The constraint is that the lattice join with the interval partition
    of the groups is full; equivalently (``use_separation_form``) the
    complement separates the last letter of each group.
    """
    word: Word = tuple(x for g in groups for x in g)
    n = len(word)
    ends = _group_ends(groups)
    starts = [e - len(g) + 1 for g, e in zip(groups, ends)]
    tau = SetPartition.from_blocks(
        n, [tuple(range(s, e + 1)) for s, e in zip(starts, ends)]
    )
    full = SetPartition.one_block(n)
    g_n = Permutation.full_cycle(n)
    view = _letter_view(word, model)
    extend, close = view.hooks(relaxed=False)
    total = ZERO
    for blocks in iter_nc_blocks(tuple(range(1, n + 1)), extend, close):
        value = ONE
        for cyc in blocks:
            value *= view.kappa1_of(cyc)
            if not value:
                break
        if not value:
            continue
        p = Permutation.from_cycles(n, blocks)
        if use_separation_form:
            if not (p.inverse() * g_n).separates(ends):
                continue
        elif p.as_partition().join(tau) != full:
            continue
        total += value
    return total


def products_as_arguments_second(
    groups_left: Sequence[Word],
    groups_right: Sequence[Word],
    model: CumulantModel,
    term_callback: Callable | None = None,
) -> Fraction:
    """Second-order cumulant of products: the partitioned sum restricted
    to terms whose complement separates the group endpoints.

    ``term_callback(cycles, marked_pair_or_None, value)`` sees every
    nonvanishing term; the product checker uses it to instrument the
    expansion.
    """
    w1: Word = tuple(x for g in groups_left for x in g)
    w2: Word = tuple(x for g in groups_right for x in g)
    n1, n2 = len(w1), len(w2)
    ends_left = _group_ends(groups_left)
    ends_right = [n1 + e for e in _group_ends(groups_right)]
    marks = ends_left + ends_right
    shape = AnnulusShape(n1, n2)
    g = shape.rotation()
    view = _letter_view(w1 + w2, model)

    annular = _annular_kappa_sum(
        view,
        n1,
        n2,
        term_filter=lambda p: (p.inverse() * g).separates(marks),
        term_callback=term_callback,
    )
    # For a disc pair the complement acts circle by circle, so the
    # separation requirement factorizes over the two sides.
    joined = _joined_kappa_sum(
        view,
        n1,
        n2,
        left_filter=_side_separation(n1, 0, ends_left),
        right_filter=_side_separation(n2, n1, ends_right),
        term_callback=term_callback,
    )
    return annular + joined


def _side_separation(n: int, offset: int, ends: list[int]):
    rotation = Permutation.full_cycle(n)
    local_ends = [e - offset for e in ends]

    def keep(candidate) -> bool:
        blocks, _, _ = candidate
        local = [tuple(i - offset for i in b) for b in blocks]
        p = Permutation.from_cycles(n, local)
        return (p.inverse() * rotation).separates(local_ends)

    return keep


# ---------------------------------------------------------------------------
# grouped cumulants by leading-term inversion


def kappa_grouped(groups: Sequence[Word], model: CumulantModel) -> Fraction:
    """First-order cumulant with the groups as single arguments.

    Computed from moments by peeling the full block off the first-block
    recursion; agrees with :func:`products_as_arguments_first`.
    """
    groups = tuple(tuple(g) for g in groups)
    cache = model._cache("kappa_grouped")
    key = tuple(tuple(x.name for x in g) for g in groups)
    hit = cache.get(key)
    if hit is not None:
        return hit
    r = len(groups)
    total = word_phi(tuple(x for g in groups for x in g), model)
    for size in range(1, r):
        for chosen in itertools.combinations(range(1, r), size - 1):
            sub = (0,) + chosen
            value = kappa_grouped([groups[i] for i in sub], model)
            if not value:
                continue
            for run in _gap_runs(sub, r):
                value *= word_phi(tuple(x for i in run for x in groups[i]), model)
                if not value:
                    break
            total -= value
    cache[key] = total
    return total


def _gap_runs(chosen: tuple[int, ...], r: int) -> list[tuple[int, ...]]:
    runs = []
    for a, b in zip(chosen, chosen[1:] + (r,)):
        if b - a > 1:
            runs.append(tuple(range(a + 1, b)))
    return runs


# Group support hooks receive the group contents (words in cycle order),
# never indices, so they stay meaningful inside recursive sub-calls.
GroupHooks = tuple[
    Callable[[tuple[Word, ...], Word], bool], Callable[[tuple[Word, ...]], bool]
]


def adjoint_alternation_hooks(model: CumulantModel) -> GroupHooks:
    """Cycles must alternate between a group and its adjoint.

    The right pruning for arguments known to be first-order adjoint
    alternating (for example any product of circular letters).
    """

    def star(g: Word) -> Word:
        return model.star_word(g)

    def extend(gs: tuple[Word, ...], nxt: Word) -> bool:
        return nxt == star(gs[-1])

    def close(gs: tuple[Word, ...]) -> bool:
        return len(gs) % 2 == 0 and gs[0] == star(gs[-1])

    return extend, close


def _group_view(
    groups: tuple[Word, ...],
    model: CumulantModel,
    group_hooks: GroupHooks | None,
    config: AnnularConfig,
) -> ArgView:
    def words(cyc: tuple[int, ...]) -> tuple[Word, ...]:
        return tuple(groups[i - 1] for i in cyc)

    def k1(cyc: tuple[int, ...]) -> Fraction:
        return kappa_grouped(words(cyc), model)

    def k2(cl: tuple[int, ...], cr: tuple[int, ...]) -> Fraction:
        return kappa2_grouped(
            words(cl), words(cr), model, config, group_hooks=group_hooks
        )

    if group_hooks is None:
        extend = lambda b, nxt, m: True
        close = lambda b, m: True
    else:
        g_extend, g_close = group_hooks

        def extend(b, nxt, m):
            return True if m else g_extend(words(b), groups[nxt - 1])

        def close(b, m):
            return True if m else g_close(words(b))

    # Second-order cumulants of compound arguments do not vanish just
    # because the letter-level ones do, so group joins always count.
    return ArgView(
        count=len(groups),
        kappa1_of=k1,
        kappa2_of=k2,
        can_extend=extend,
        can_close=close,
        joins_vanish=False,
    )


def kappa2_grouped(
    groups_left: Sequence[Word],
    groups_right: Sequence[Word],
    model: CumulantModel,
    config: AnnularConfig = DEFAULT_CONFIG,
    *,
    group_hooks: GroupHooks | None = None,
) -> Fraction:
    """Second-order cumulant with products as arguments, by inversion.

    The joined top term has coefficient one in the second-order
    moment-cumulant formula, so it peels off recursively.  Only the
    group counts enter the enumerations, so this scales to long words.
    ``group_hooks`` may prune group cycles whose first-order grouped
    cumulant is known to vanish (for example alternation in an adjoint
    pattern).
    """
    groups_left = tuple(tuple(g) for g in groups_left)
    groups_right = tuple(tuple(g) for g in groups_right)
    cache = model._cache("kappa2_grouped")
    key = (
        tuple(tuple(x.name for x in g) for g in groups_left),
        tuple(tuple(x.name for x in g) for g in groups_right),
    )
    hit = cache.get(key)
    if hit is not None:
        return hit
    r, s = len(groups_left), len(groups_right)
    w1 = tuple(x for g in groups_left for x in g)
    w2 = tuple(x for g in groups_right for x in g)
    view = _group_view(groups_left + groups_right, model, group_hooks, config)
    total = (
        word_phi2(w1, w2, model)
        - _annular_kappa_sum(view, r, s)
        - _joined_kappa_sum(view, r, s, skip_top=True)
    )
    cache[key] = total
    return total


# ---------------------------------------------------------------------------
# single-element tables: sums and inversions over block sizes


def kappa_table_from_moments(
    moments: dict[int, Fraction], order: int
) -> dict[int, Fraction]:
    """First-order cumulants of one element from its moments 1..order."""
    missing = [n for n in range(1, order + 1) if n not in moments]
    if missing:
        raise ModelError(f"moments missing for orders {missing}")
    phi = {0: ONE, **{n: Q(v) for n, v in moments.items()}}
    kappa: dict[int, Fraction] = {}
    for n in range(1, order + 1):
        total = phi[n]
        for size in range(1, n):
            k = kappa[size]
            if not k:
                continue
            for rest in itertools.combinations(range(2, n + 1), size - 1):
                block = (1,) + rest
                value = k
                for a, b in zip(block, block[1:] + (n + 1,)):
                    value *= phi[b - a - 1]
                    if not value:
                        break
                total -= value
        kappa[n] = total
    return kappa


def moments_from_kappa_table(
    kappa: dict[int, Fraction], order: int
) -> dict[int, Fraction]:
    """Moments from first-order cumulants (the zeta side of the pair)."""
    phi: dict[int, Fraction] = {0: ONE}
    for n in range(1, order + 1):
        total = ZERO
        for size in range(1, n + 1):
            k = kappa.get(size, ZERO)
            if not k:
                continue
            for rest in itertools.combinations(range(2, n + 1), size - 1):
                block = (1,) + rest
                value = k
                for a, b in zip(block, block[1:] + (n + 1,)):
                    value *= phi[b - a - 1]
                    if not value:
                        break
                total += value
        phi[n] = total
    del phi[0]
    return phi


def _sizes_key(first: dict[int, Fraction]) -> tuple:
    return tuple(sorted(n for n, v in first.items() if v))


def sized_annular_sum(
    first: dict[int, Fraction],
    cell: tuple[int, int],
    config: AnnularConfig = DEFAULT_CONFIG,
) -> Fraction:
    """Sum over the annular family of products of first[cycle length]."""
    sizes = set(_sizes_key(first))
    shape = AnnulusShape(*cell)
    total = ZERO
    for p in enumerate_snc(
        shape,
        config,
        block_ok=lambda b: len(b) in sizes,
        cache_key=f"sizes:{_sizes_key(first)}",
    ):
        value = ONE
        for cyc in p.cycles():
            value *= first[len(cyc)]
            if not value:
                break
        total += value
    return total


_MARKED_WEIGHT_CACHE: dict[tuple, dict[int, Fraction]] = {}


def marked_size_weights(n: int, first: dict[int, Fraction]) -> dict[int, Fraction]:
    """Aggregate disc partitions with one marked block, by marked size.

    W(r) sums the product of first[len] over unmarked blocks, across all
    non-crossing partitions of an n-disc having a marked block of size r
    and no other block with vanishing weight.
    """
    key = (n, tuple(sorted((k, v) for k, v in first.items() if v)))
    hit = _MARKED_WEIGHT_CACHE.get(key)
    if hit is not None:
        return hit
    weights: dict[int, Fraction] = {}
    for blocks in iter_nc_blocks(tuple(range(1, n + 1))):
        values = [first.get(len(b), ZERO) for b in blocks]
        dead = [i for i, v in enumerate(values) if not v]
        if len(dead) > 1:
            continue
        if len(dead) == 1:
            i = dead[0]
            weight = ONE
            for j, v in enumerate(values):
                if j != i:
                    weight *= v
            r = len(blocks[i])
            weights[r] = weights.get(r, ZERO) + weight
        else:
            product = ONE
            for v in values:
                product *= v
            for i, b in enumerate(blocks):
                r = len(b)
                weights[r] = weights.get(r, ZERO) + product / values[i]
    _MARKED_WEIGHT_CACHE[key] = weights
    return weights


def sized_joined_sum(
    first: dict[int, Fraction],
    second: Callable[[int, int], Fraction],
    cell: tuple[int, int],
    *,
    skip_top: bool = False,
) -> Fraction:
    """Sum over joined disc pairs of second(r, s) times unmarked weights."""
    p, q = cell
    lefts = marked_size_weights(p, first)
    rights = marked_size_weights(q, first)
    total = ZERO
    for r, wl in lefts.items():
        for s, wr in rights.items():
            if skip_top and r == p and s == q:
                continue
            w = wl * wr
            if w:
                total += w * second(r, s)
    return total


def phi2_cell_from_tables(
    first: dict[int, Fraction],
    second: dict[tuple[int, int], Fraction],
    cell: tuple[int, int],
    config: AnnularConfig = DEFAULT_CONFIG,
) -> Fraction:
    """Fluctuation moment of one element from its cumulant tables."""
    return sized_annular_sum(first, cell, config) + sized_joined_sum(
        first, lambda r, s: second.get((r, s), ZERO), cell
    )


def kappa2_table_from_moments(
    kappa1: dict[int, Fraction],
    phi2: dict[tuple[int, int], Fraction],
    max_total: int,
    config: AnnularConfig = DEFAULT_CONFIG,
) -> dict[tuple[int, int], Fraction]:
    """Second-order cumulants of one element from fluctuation moments.

    Solves every cell with p + q <= max_total, smallest first; each cell
    peels the top joined term off the second-order moment-cumulant
    formula, whose coefficient is one.
    """
    needed = [n for n in range(1, max_total + 1) if n not in kappa1]
    if needed:
        raise ModelError(f"first-order cumulants missing for sizes {needed}")
    out: dict[tuple[int, int], Fraction] = {}
    for total_size in range(2, max_total + 1):
        for p in range(1, total_size):
            q = total_size - p
            if (p, q) not in phi2:
                raise ModelError(f"fluctuation moment missing for cell ({p},{q})")
            value = Q(phi2[(p, q)])
            value -= sized_annular_sum(kappa1, (p, q), config)
            value -= sized_joined_sum(
                kappa1, lambda r, s: out[(r, s)], (p, q), skip_top=True
            )
            out[(p, q)] = value
    return out
