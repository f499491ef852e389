"""Enumeration and classification of non-crossing discs and annuli.

The annular enumeration follows the cut strategy: for every pair of
points (k, j) on opposite circles the transposition (k, j) merges the
two boundary cycles into a single cycle g~; the permutations that are
geodesic with respect to g~ are relabelled disc non-crossing partitions,
and each annular non-crossing permutation shows up for at least one cut.
Candidates are filtered by the annular metric condition and deduplicated.

All enumerations accept optional support constraints (a predicate on
consecutive cycle elements and one on whole cycles).  Constraints prune
the search tree; they never change which of the surviving permutations
are returned.  The cumulant engine leans on this to skip blocks whose
cumulant factor is identically zero.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

from .perm import (
    AnnulusShape,
    PartitionedPermutation,
    Permutation,
    SetPartition,
)

PairOk = Callable[[int, int], bool]
BlockOk = Callable[[tuple[int, ...]], bool]
ExtendOk = Callable[[tuple[int, ...], int], bool]


class CapExceededError(ValueError):
    """An enumeration was requested beyond the configured size cap."""


@dataclass(frozen=True)
class AnnularConfig:
    """Size caps for the exhaustive enumerations."""

    disc_cap: int = 14
    annulus_cap: int = 14
    psnc_cap: int = 12


DEFAULT_CONFIG = AnnularConfig()

_SNC_CACHE: dict[tuple, tuple[Permutation, ...]] = {}
_NC_CACHE: dict[int, tuple[Permutation, ...]] = {}


# ---------------------------------------------------------------------------
# constrained non-crossing block generator


def _first_block(
    block: tuple[int, ...],
    rest: tuple[int, ...],
    can_extend: ExtendOk | None,
    can_close: BlockOk | None,
) -> Iterator[tuple[tuple[int, ...], tuple[tuple[int, ...], ...]]]:
    """Grow the block of the first point; yield (block, gap intervals)."""
    if can_close is None or can_close(block):
        yield block, (rest,) if rest else ()
    for i, nxt in enumerate(rest):
        if can_extend is not None and not can_extend(block, nxt):
            continue
        gap = rest[:i]
        for blk, gaps in _first_block(block + (nxt,), rest[i + 1 :], can_extend, can_close):
            yield blk, ((gap,) if gap else ()) + gaps


def iter_nc_blocks(
    points: tuple[int, ...],
    can_extend: ExtendOk | None = None,
    can_close: BlockOk | None = None,
) -> Iterator[tuple[tuple[int, ...], ...]]:
    """All non-crossing partitions of a linearly ordered point tuple.

    Blocks come out with their elements in the given order, which is the
    cycle order of the corresponding permutation.  ``can_extend(block, b)``
    gates every growth step of a block; ``can_close(block)`` gates every
    finished block and owns any wrap-around pair logic.
    """
    if not points:
        yield ()
        return
    for block, gaps in _first_block((points[0],), points[1:], can_extend, can_close):
        stack = [((block,), gaps)]
        while stack:
            blocks, pending = stack.pop()
            if not pending:
                yield blocks
                continue
            head, tail = pending[0], pending[1:]
            for sub in iter_nc_blocks(head, can_extend, can_close):
                stack.append((blocks + sub, tail))


def _pairwise_hooks(
    pair_ok: PairOk | None, block_ok: BlockOk | None
) -> tuple[ExtendOk | None, BlockOk | None]:
    """Lift a consecutive-pair predicate (cyclic, wrap included) and a
    whole-block predicate into generator hooks."""
    extend = None
    if pair_ok is not None:
        def extend(block: tuple[int, ...], nxt: int) -> bool:
            return pair_ok(block[-1], nxt)

    if pair_ok is None and block_ok is None:
        return None, None

    def close(block: tuple[int, ...]) -> bool:
        if pair_ok is not None and len(block) > 1 and not pair_ok(block[-1], block[0]):
            return False
        return block_ok is None or block_ok(block)

    return extend, close


# ---------------------------------------------------------------------------
# discs


def is_noncrossing_disc(p: Permutation) -> bool:
    """Geodesic criterion: |g_n| == |p| + |p^-1 g_n|."""
    g = Permutation.full_cycle(p.size)
    return g.length == p.length + (p.inverse() * g).length


def iter_nc(
    n: int,
    pair_ok: PairOk | None = None,
    block_ok: BlockOk | None = None,
) -> Iterator[Permutation]:
    """Non-crossing permutations of the n-disc, lazily."""
    points = tuple(range(1, n + 1))
    extend, close = _pairwise_hooks(pair_ok, block_ok)
    for blocks in iter_nc_blocks(points, extend, close):
        yield Permutation.from_cycles(n, blocks)


def enumerate_nc(n: int, config: AnnularConfig = DEFAULT_CONFIG) -> tuple[Permutation, ...]:
    """All of NC(n), canonically ordered; |NC(n)| = Catalan(n)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > config.disc_cap:
        raise CapExceededError(f"disc size {n} exceeds cap {config.disc_cap}")
    cached = _NC_CACHE.get(n)
    if cached is None:
        cached = tuple(sorted(iter_nc(n), key=lambda p: p.image))
        _NC_CACHE[n] = cached
    return cached


def kreweras(p: Permutation, shape: int | AnnulusShape) -> Permutation:
    """The complement p^-1 g for the disc or annulus rotation g."""
    g = Permutation.full_cycle(shape) if isinstance(shape, int) else shape.rotation()
    return p.inverse() * g


# ---------------------------------------------------------------------------
# annuli


def has_through_cycle(p: Permutation, shape: AnnulusShape) -> bool:
    m = shape.outer
    return any(
        any(x <= m for x in cyc) and any(x > m for x in cyc) for cyc in p.cycles()
    )


def through_cycles(p: Permutation, shape: AnnulusShape) -> tuple[tuple[int, ...], ...]:
    m = shape.outer
    return tuple(
        cyc
        for cyc in p.cycles()
        if any(x <= m for x in cyc) and any(x > m for x in cyc)
    )


def is_annular_nc(p: Permutation, shape: AnnulusShape) -> bool:
    """Through cycle present and |p| + |p^-1 g| == |g| + 2."""
    if p.size != shape.size:
        raise ValueError("permutation does not live on this annulus")
    g = shape.rotation()
    return (
        has_through_cycle(p, shape)
        and p.length + (p.inverse() * g).length == g.length + 2
    )


def is_disc_pair(p: Permutation, shape: AnnulusShape) -> bool:
    """No through cycle and geodesic: p is NC(m) x NC(n) on the annulus."""
    g = shape.rotation()
    return (
        not has_through_cycle(p, shape)
        and p.length + (p.inverse() * g).length == g.length
    )


def _cut_orbits(shape: AnnulusShape) -> list[tuple[int, ...]]:
    g = shape.rotation()
    orbits = []
    for k in shape.outer_points():
        for j in shape.inner_points():
            merged = g * Permutation.transposition(shape.size, k, j)
            orbit = merged.cycle_of(1)
            assert len(orbit) == shape.size
            orbits.append(orbit)
    return orbits


def iter_snc(
    shape: AnnulusShape,
    pair_ok: PairOk | None = None,
    block_ok: BlockOk | None = None,
) -> Iterator[Permutation]:
    """Annular non-crossing permutations via cuts, deduplicated."""
    extend, close = _pairwise_hooks(pair_ok, block_ok)
    yield from iter_snc_hooked(shape, extend, close)


def iter_snc_hooked(
    shape: AnnulusShape,
    can_extend: ExtendOk | None = None,
    can_close: BlockOk | None = None,
) -> Iterator[Permutation]:
    """Cut-based annular search with raw generator hooks."""
    seen: set[tuple[int, ...]] = set()
    for orbit in _cut_orbits(shape):
        for blocks in iter_nc_blocks(orbit, can_extend, can_close):
            p = Permutation.from_cycles(shape.size, blocks)
            if p.image in seen:
                continue
            seen.add(p.image)
            if is_annular_nc(p, shape):
                yield p


def enumerate_snc(
    shape: AnnulusShape,
    config: AnnularConfig = DEFAULT_CONFIG,
    *,
    pair_ok: PairOk | None = None,
    block_ok: BlockOk | None = None,
    cache_key: str | None = None,
) -> tuple[Permutation, ...]:
    """All of the (m,n) annular non-crossing permutations, sorted.

    With constraints, returns the constrained subset; pass ``cache_key``
    to memoize a named constrained family.
    """
    if shape.size > config.annulus_cap:
        raise CapExceededError(
            f"annulus size {shape.size} exceeds cap {config.annulus_cap}"
        )
    key = (shape.outer, shape.inner, cache_key)
    if (pair_ok is None and block_ok is None) or cache_key is not None:
        hit = _SNC_CACHE.get(key)
        if hit is not None:
            return hit
    result = tuple(sorted(iter_snc(shape, pair_ok, block_ok), key=lambda p: p.image))
    if (pair_ok is None and block_ok is None) or cache_key is not None:
        _SNC_CACHE[key] = result
    return result


def brute_force_snc(shape: AnnulusShape) -> tuple[Permutation, ...]:
    """Filter the full symmetric group; test oracle for small sizes."""
    out = [
        p
        for p in map(
            Permutation, itertools.permutations(range(1, shape.size + 1))
        )
        if is_annular_nc(p, shape)
    ]
    return tuple(sorted(out, key=lambda p: p.image))


def enumerate_annular_pairings(
    shape: AnnulusShape, config: AnnularConfig = DEFAULT_CONFIG
) -> tuple[Permutation, ...]:
    """Annular non-crossing pairings: every cycle a through-or-not 2-cycle."""
    if shape.outer % 2 or shape.inner % 2:
        raise ValueError("annular pairings need both circle sizes even")
    return enumerate_snc(
        shape,
        config,
        pair_ok=None,
        block_ok=lambda b: len(b) == 2,
        cache_key="pairing",
    )


def unfold(p: Permutation, shape: AnnulusShape, k: int) -> Permutation:
    """Merge the two circles along the crossing k -> p(k).

    Returns g~ = g (k, g^-1 p(k)), a single cycle with respect to which
    p is non-crossing.
    """
    g = shape.rotation()
    if shape.circle_of(k) == shape.circle_of(p(k)):
        raise ValueError(f"{k} -> {p(k)} does not cross the annulus")
    j = g.inverse()(p(k))
    merged = g * Permutation.transposition(shape.size, k, j)
    assert len(merged.cycle_of(1)) == shape.size
    return merged


# ---------------------------------------------------------------------------
# partitioned annular families


def enumerate_ps_nc_prime(
    shape: AnnulusShape, config: AnnularConfig = DEFAULT_CONFIG
) -> tuple[PartitionedPermutation, ...]:
    """(U, pi) with pi a disc pair and U joining one cycle per circle."""
    if shape.size > config.psnc_cap:
        raise CapExceededError(
            f"partitioned enumeration size {shape.size} exceeds cap {config.psnc_cap}"
        )
    m, n = shape.outer, shape.inner
    out = []
    inner_partitions = [
        tuple(tuple(x + m for x in cyc) for cyc in q.cycles())
        for q in enumerate_nc(n, config)
    ]
    for p_out in enumerate_nc(m, config):
        blocks_out = p_out.cycles()
        for blocks_in in inner_partitions:
            cycles = blocks_out + blocks_in
            perm = Permutation.from_cycles(shape.size, cycles)
            for c_out in blocks_out:
                for c_in in blocks_in:
                    rest = [c for c in cycles if c is not c_out and c is not c_in]
                    u = SetPartition.from_blocks(
                        shape.size, rest + [tuple(c_out) + tuple(c_in)]
                    )
                    out.append(PartitionedPermutation(u, perm))
    out.sort(key=lambda x: (x.permutation.image, x.partition.blocks))
    return tuple(out)


def enumerate_ps_nc(
    shape: AnnulusShape, config: AnnularConfig = DEFAULT_CONFIG
) -> tuple[PartitionedPermutation, ...]:
    """The disjoint union of annular permutations and joined disc pairs."""
    if shape.size > config.psnc_cap:
        raise CapExceededError(
            f"partitioned enumeration size {shape.size} exceeds cap {config.psnc_cap}"
        )
    part1 = tuple(
        PartitionedPermutation.from_permutation(p)
        for p in enumerate_snc(shape, config)
    )
    return part1 + enumerate_ps_nc_prime(shape, config)


# ---------------------------------------------------------------------------
# parity structure


def is_even_cycles(p: Permutation) -> bool:
    """True iff every cycle length is even."""
    return all(len(c) % 2 == 0 for c in p.cycles())


def classify_parity(p: Permutation, shape: AnnulusShape) -> str:
    """Tag an even annular permutation: 'reversing' | 'preserving' |
    'not-even' | 'not-annular'.

    Reversing means every step k -> p(k) flips parity.  Preserving means
    even, annular non-crossing, and some (equivalently every) step
    across the circles keeps parity.
    """
    if not is_even_cycles(p):
        return "not-even"
    if all((k - p(k)) % 2 == 1 for k in range(1, p.size + 1)):
        return "reversing"
    if not is_annular_nc(p, shape):
        return "not-annular"
    return "preserving"


def _parity_flip(a: int, b: int) -> bool:
    return (a - b) % 2 == 1


def enumerate_snc_reversing(
    shape: AnnulusShape, config: AnnularConfig = DEFAULT_CONFIG
) -> tuple[Permutation, ...]:
    """Even annular permutations all of whose steps flip parity."""
    return enumerate_snc(
        shape,
        config,
        pair_ok=_parity_flip,
        block_ok=lambda b: len(b) % 2 == 0,
        cache_key="reversing",
    )


def enumerate_snc_preserving(
    shape: AnnulusShape, config: AnnularConfig = DEFAULT_CONFIG
) -> tuple[Permutation, ...]:
    """Even annular permutations whose circle-crossing steps keep parity."""
    m = shape.outer

    def pair_ok(a: int, b: int) -> bool:
        crossing = (a <= m) != (b <= m)
        return ((a - b) % 2 == 0) == crossing

    result = enumerate_snc(
        shape,
        config,
        pair_ok=pair_ok,
        block_ok=lambda b: len(b) % 2 == 0,
        cache_key="preserving",
    )
    return tuple(p for p in result if classify_parity(p, shape) == "preserving")


def enumerate_snc_all_through(
    shape: AnnulusShape, config: AnnularConfig = DEFAULT_CONFIG
) -> tuple[Permutation, ...]:
    """Annular permutations with every cycle visiting both circles."""
    m = shape.outer

    def block_ok(b: tuple[int, ...]) -> bool:
        return any(x <= m for x in b) and any(x > m for x in b)

    return enumerate_snc(shape, config, block_ok=block_ok, cache_key="all-through")


def enumerate_snc_preserving_all_through(
    shape: AnnulusShape, config: AnnularConfig = DEFAULT_CONFIG
) -> tuple[Permutation, ...]:
    """Even, parity-preserving, all cycles through: the correction set
    entering the determining sequence of an even element."""
    m = shape.outer

    def block_ok(b: tuple[int, ...]) -> bool:
        return (
            len(b) % 2 == 0
            and any(x <= m for x in b)
            and any(x > m for x in b)
        )

    def pair_ok(a: int, b: int) -> bool:
        crossing = (a <= m) != (b <= m)
        return ((a - b) % 2 == 0) == crossing

    result = enumerate_snc(
        shape, config, pair_ok=pair_ok, block_ok=block_ok, cache_key="preserving-all"
    )
    return tuple(p for p in result if classify_parity(p, shape) == "preserving")


# ---------------------------------------------------------------------------
# doubling maps


def double_nc(p: Permutation) -> Permutation:
    """The double of a disc non-crossing permutation, on twice the points.

    Even points advance along the boundary, the odd successors jump to
    twice the image: pihat(2k) = g_{2n}(2k) and pihat^2(2k) = 2 p(k).
    """
    if not is_noncrossing_disc(p):
        raise ValueError(f"{p} is not disc non-crossing")
    n = p.size
    g2 = Permutation.full_cycle(2 * n)
    image = [0] * (2 * n)
    for k in range(1, n + 1):
        image[2 * k - 1] = g2(2 * k)
        image[g2(2 * k) - 1] = 2 * p(k)
    return Permutation(tuple(image))


def undouble_nc(p: Permutation) -> Permutation:
    """Inverse of :func:`double_nc`: sigma(k) = p^2(2k) / 2."""
    if p.size % 2:
        raise ValueError("doubled permutation must have even size")
    n = p.size // 2
    image = []
    for k in range(1, n + 1):
        v = p(p(2 * k))
        if v % 2:
            raise ValueError(f"{p} is not a double: p^2({2*k}) = {v} is odd")
        image.append(v // 2)
    sigma = Permutation(tuple(image))
    if double_nc(sigma) != p:
        raise ValueError(f"{p} is not the double of a disc non-crossing permutation")
    return sigma


def double_reversing(sigma: Permutation, shape: AnnulusShape) -> Permutation:
    """Send sigma on the (p,q)-annulus to the parity-reversing double on
    the (2p,2q)-annulus, the inverse of :func:`undouble_reversing`."""
    if sigma.size != shape.size:
        raise ValueError("size mismatch")
    if not is_annular_nc(sigma, shape):
        raise ValueError(f"{sigma} is not annular non-crossing on {shape}")
    doubled = AnnulusShape(2 * shape.outer, 2 * shape.inner)
    g2 = doubled.rotation()
    image = [0] * doubled.size
    for k in range(1, shape.size + 1):
        image[2 * k - 1] = g2(2 * k)
        image[g2(2 * k) - 1] = 2 * sigma(k)
    return Permutation(tuple(image))


def undouble_reversing(p: Permutation, doubled: AnnulusShape) -> Permutation:
    """Halve a parity-reversing annular permutation: sigma(k) = p^2(2k)/2.

    Requires p even and parity reversing, annular non-crossing, with
    g p^-1 separating the odd positions; the error names the failed
    predicate.
    """
    if doubled.outer % 2 or doubled.inner % 2:
        raise ValueError("doubled shape must have even circles")
    if p.size != doubled.size:
        raise ValueError("size mismatch")
    tag = classify_parity(p, doubled)
    if tag != "reversing":
        raise ValueError(f"not parity reversing (classified {tag}): {p}")
    if not is_annular_nc(p, doubled):
        raise ValueError(f"not annular non-crossing: {p}")
    g = doubled.rotation()
    odds = range(1, doubled.size, 2)
    if not (g * p.inverse()).separates(odds):
        raise ValueError(f"g p^-1 does not separate the odd points: {p}")
    half = AnnulusShape(doubled.outer // 2, doubled.inner // 2)
    image = []
    for k in range(1, half.size + 1):
        v = p(p(2 * k))
        assert v % 2 == 0
        image.append(v // 2)
    return Permutation(tuple(image))


def double_block(block: Iterable[int], doubled_rotation: Permutation) -> tuple[int, ...]:
    """{2k, g(2k) : k in block} -- the doubled point set of a block."""
    out = set()
    for k in block:
        out.add(2 * k)
        out.add(doubled_rotation(2 * k))
    return tuple(sorted(out))


def double_partitioned(
    x: PartitionedPermutation, shape: AnnulusShape
) -> PartitionedPermutation:
    """Double a joined disc pair (U, sigma) to (Uhat, sigmahat).

    Each disc factor is doubled inside its own circle and every block of
    U is doubled as a point set.
    """
    _require_ps_prime(x, shape)
    doubled = AnnulusShape(2 * shape.outer, 2 * shape.inner)
    g2 = doubled.rotation()
    image = [0] * doubled.size
    for k in range(1, shape.size + 1):
        image[2 * k - 1] = g2(2 * k)
        image[g2(2 * k) - 1] = 2 * x.permutation(k)
    perm = Permutation(tuple(image))
    blocks = [double_block(b, g2) for b in x.partition.blocks]
    return PartitionedPermutation(SetPartition.from_blocks(doubled.size, blocks), perm)


def undouble_partitioned(
    x: PartitionedPermutation, doubled: AnnulusShape
) -> PartitionedPermutation:
    """Inverse of :func:`double_partitioned`."""
    half = AnnulusShape(doubled.outer // 2, doubled.inner // 2)
    image = []
    for k in range(1, half.size + 1):
        v = x.permutation(x.permutation(2 * k))
        if v % 2:
            raise ValueError("permutation component is not a double")
        image.append(v // 2)
    perm = Permutation(tuple(image))
    blocks = [
        tuple(sorted(k // 2 for k in b if k % 2 == 0)) for b in x.partition.blocks
    ]
    result = PartitionedPermutation(
        SetPartition.from_blocks(half.size, blocks), perm
    )
    if double_partitioned(result, half) != x:
        raise ValueError(f"{x} is not a doubled joined disc pair")
    return result


def _require_ps_prime(x: PartitionedPermutation, shape: AnnulusShape) -> None:
    """Validate membership in the joined-disc-pair family."""
    if x.size != shape.size:
        raise ValueError("size mismatch")
    if not is_disc_pair(x.permutation, shape):
        raise ValueError(f"{x.permutation} is not a non-crossing disc pair")
    m = shape.outer
    cycles = set(x.permutation.cycles())
    joined = 0
    for b in x.partition.blocks:
        members = [c for c in cycles if set(c) <= set(b)]
        if tuple(sorted(p for c in members for p in c)) != b:
            raise ValueError("partition blocks must be unions of cycles")
        if len(members) == 1:
            continue
        if len(members) != 2:
            raise ValueError("a block may join at most two cycles")
        sides = {min(c) <= m for c in members}
        if sides != {True, False}:
            raise ValueError("the joined cycles must come from opposite circles")
        joined += 1
    if joined != 1:
        raise ValueError("exactly one block must join the circles")


def snc_grouped(
    x: PartitionedPermutation,
    shape: AnnulusShape,
    config: AnnularConfig = DEFAULT_CONFIG,
) -> tuple[Permutation, ...]:
    """Parity-preserving doubles compatible with a joined disc pair.

    Returns the pi in the preserving class of the doubled annulus whose
    non-through cycles are doubles of cycles of sigma and whose through
    cycles cover exactly the double of the joined block.
    """
    _require_ps_prime(x, shape)
    doubled = AnnulusShape(2 * shape.outer, 2 * shape.inner)
    g2 = doubled.rotation()
    joined = next(
        b
        for b in x.partition.blocks
        if b not in {tuple(c) for c in map(lambda c: tuple(sorted(c)), x.permutation.cycles())}
    )
    target_union = set(double_block(joined, g2))
    allowed_nonthrough = {
        tuple(sorted(double_block(c, g2))): double_cycle_of(c, g2, x.permutation)
        for c in x.permutation.cycles()
        if not set(c) <= set(joined)
    }
    out = []
    for p in enumerate_snc_preserving(doubled, config):
        through = through_cycles(p, doubled)
        union = {pt for c in through for pt in c}
        if union != target_union:
            continue
        ok = True
        for cyc in p.cycles():
            if cyc in through:
                continue
            want = allowed_nonthrough.get(tuple(sorted(cyc)))
            if want is None or Permutation.from_cycles(p.size, [cyc]) != want:
                ok = False
                break
        if ok:
            out.append(p)
    return tuple(out)


def double_cycle_of(
    cycle: Sequence[int], doubled_rotation: Permutation, perm: Permutation
) -> Permutation:
    """The doubled single cycle (2i1, g(2i1), 2i2, ...) as a permutation."""
    size = doubled_rotation.size
    pts = []
    for k in cycle:
        pts.append(2 * k)
        pts.append(doubled_rotation(2 * k))
    doubled_cycle = []
    k = cycle[0]
    for _ in cycle:
        doubled_cycle.append(2 * k)
        doubled_cycle.append(doubled_rotation(2 * k))
        k = perm(k)
    return Permutation.from_cycles(size, [doubled_cycle])


# ---------------------------------------------------------------------------
# k-structure of Definition-style products


@dataclass(frozen=True)
class KStructure:
    divisible: bool
    equal: bool
    alternating: bool
    preserving: bool
    completing: bool


def k_structure(p: Permutation, base: AnnulusShape, k: int) -> KStructure:
    """Evaluate the five k-predicates of a permutation on the scaled annulus."""
    if p.size != k * base.size:
        raise ValueError(f"expected size {k * base.size}, got {p.size}")
    shape = AnnulusShape(k * base.outer, k * base.inner)
    g = shape.rotation()
    cycles = p.cycles()
    divisible = all(len(c) % k == 0 for c in cycles)
    equal = all(len(c) == k for c in cycles)
    alternating = all((p(i) - i - 1) % k == 0 for i in range(1, p.size + 1))
    preserving = all((p(i) - i) % k == 0 for i in range(1, p.size + 1))
    marks = range(k, p.size + 1, k)
    completing = preserving and (p.inverse() * g).separates(marks)
    return KStructure(divisible, equal, alternating, preserving, completing)


def enumerate_snc_k_alternating(
    p: int, q: int, k: int, config: AnnularConfig = DEFAULT_CONFIG
) -> tuple[Permutation, ...]:
    """k-alternating members of the (kp, kq) annular permutations."""
    shape = AnnulusShape(k * p, k * q)
    if shape.size > config.annulus_cap:
        raise CapExceededError(
            f"annulus size {shape.size} exceeds cap {config.annulus_cap}"
        )
    return enumerate_snc(
        shape,
        config,
        pair_ok=lambda a, b: (b - a - 1) % k == 0,
        cache_key=f"alt-{k}",
    )


def enumerate_snc_k_alternating_equal(
    p: int, q: int, k: int, config: AnnularConfig = DEFAULT_CONFIG
) -> tuple[Permutation, ...]:
    """k-alternating members whose cycles all have exactly k elements."""
    shape = AnnulusShape(k * p, k * q)
    if shape.size > config.annulus_cap:
        raise CapExceededError(
            f"annulus size {shape.size} exceeds cap {config.annulus_cap}"
        )
    return enumerate_snc(
        shape,
        config,
        pair_ok=lambda a, b: (b - a - 1) % k == 0,
        block_ok=lambda b: len(b) == k,
        cache_key=f"alt-eq-{k}",
    )
