"""Shared builders for the test suite.

Everything random is driven by an explicit random.Random instance so failures
reproduce.  The oracles here are deliberately independent of the engine's own
formulas: the closed form for inner automorphisms enumerates compositions, and
the cup-product pairing folds a primitive cochain through a finite 2-step
quotient without ever touching series coefficients.
"""

from __future__ import annotations

import random
from math import ceil

from pjohnson import (
    GroupContext,
    GroupEndo,
    JohnsonTable,
    TruncSeries,
    Word,
    compose,
    generator,
    magnus_embed,
    series_multiply,
    word,
    word_commutator,
    word_power,
)
from pjohnson.autom import AlgebraEndo, induced_matrix, mat_inverse


def random_word(rng: random.Random, ctx: GroupContext, blocks: int,
                max_exp: int = 2, max_gen: int | None = None) -> Word:
    pairs = []
    top = max_gen or ctx.rank
    for _ in range(blocks):
        g = rng.randint(1, top)
        e = rng.choice([k for k in range(-max_exp, max_exp + 1) if k])
        pairs.append((g, e))
    return word(pairs)


def random_short_word(rng: random.Random, ctx: GroupContext, letters: int) -> Word:
    """Random word with total letter count (sum of |exponents|) <= letters."""
    pairs = []
    budget = letters
    while budget > 0 and rng.random() < 0.85:
        g = rng.randint(1, ctx.rank)
        e = rng.randint(1, min(2, budget)) * rng.choice([1, -1])
        pairs.append((g, e))
        budget -= abs(e)
    return word(pairs)


def _filtered_word_raw(rng: random.Random, ctx: GroupContext, k: int) -> Word:
    if k <= 1:
        return random_word(rng, ctx, rng.randint(1, 2))
    roll = rng.random()
    if roll < 0.5 and ctx.rank >= 2:
        i = rng.randint(1, k - 1)
        return word_commutator(_filtered_word_raw(rng, ctx, i),
                               _filtered_word_raw(rng, ctx, k - i))
    if roll < 0.8:
        return word_power(_filtered_word_raw(rng, ctx, ceil(k / ctx.p)), ctx.p)
    return _filtered_word_raw(rng, ctx, k) * _filtered_word_raw(rng, ctx, k)


def filtered_word(rng: random.Random, ctx: GroupContext, k: int,
                  max_letters: int = 32) -> Word:
    """Random word lying in filtration level k.

    Built from the generating moves of the level: commutators across a split
    of k and p-th powers of words one rung down (ceil(k/p), not k//p).  The
    size cap keeps iterated endomorphism images inside the block guard.
    """
    for _ in range(20):
        w = _filtered_word_raw(rng, ctx, k)
        if w.letter_count() <= max_letters:
            return w
    s = 0
    power = 1
    while power < k:
        power *= ctx.p
        s += 1
    return word_power(generator(rng.randint(1, ctx.rank)), ctx.p**s)


def nonidentity_filtered_word(rng: random.Random, ctx: GroupContext, k: int) -> Word:
    for _ in range(50):
        w = filtered_word(rng, ctx, k)
        if not w.is_identity:
            return w
    # power ladder fallback: x1^(p^s) always has degree exactly p^s >= k
    s = 0
    power = 1
    while power < k:
        power *= ctx.p
        s += 1
    return word_power(generator(1), ctx.p**s)


def random_ia_endo(rng: random.Random, ctx: GroupContext, m: int) -> GroupEndo:
    """Automorphism x_j -> x_j c_j with every c_j in filtration level m+1.

    The linear part is the identity matrix, so these act trivially at every
    level up to m by construction.
    """
    images = []
    for j in range(1, ctx.rank + 1):
        if rng.random() < 0.85:
            c = filtered_word(rng, ctx, m + 1)
        else:
            c = word(())
        images.append(generator(j) * c)
    return GroupEndo(ctx, tuple(images))


def _avoiding_filtered_word(rng: random.Random, ctx: GroupContext, k: int,
                            avoid: int) -> Word:
    allowed = [g for g in range(1, ctx.rank + 1) if g != avoid]
    if k <= 1:
        g = rng.choice(allowed)
        return generator(g) ** rng.choice([1, -1, 2])
    if len(allowed) >= 2 and rng.random() < 0.6:
        i = rng.randint(1, k - 1)
        return word_commutator(_avoiding_filtered_word(rng, ctx, i, avoid),
                               _avoiding_filtered_word(rng, ctx, k - i, avoid))
    return word_power(
        _avoiding_filtered_word(rng, ctx, ceil(k / ctx.p), avoid), ctx.p
    )


def random_ia_pair(rng: random.Random, ctx: GroupContext, m: int,
                   moves: int = 2) -> tuple[GroupEndo, GroupEndo]:
    """Automorphism of depth >= m together with its exact inverse.

    Composed from moves whose inverses are known in closed form: inner
    automorphisms by level-m words, and transvections x_t -> x_t c with c a
    level-(m+1) word avoiding x_t.
    """
    phi = GroupEndo.identity(ctx)
    inv = GroupEndo.identity(ctx)
    for _ in range(moves):
        if rng.random() < 0.5:
            x = filtered_word(rng, ctx, m)
            step = GroupEndo.inner(ctx, x)
            back = GroupEndo.inner(ctx, ~x)
        else:
            t = rng.randint(1, ctx.rank)
            c = _avoiding_filtered_word(rng, ctx, m + 1, t)
            fwd_images = []
            bwd_images = []
            for j in range(1, ctx.rank + 1):
                if j == t:
                    fwd_images.append(generator(j) * c)
                    bwd_images.append(generator(j) * ~c)
                else:
                    fwd_images.append(generator(j))
                    bwd_images.append(generator(j))
            step = GroupEndo(ctx, tuple(fwd_images))
            back = GroupEndo(ctx, tuple(bwd_images))
        phi = compose(phi, step)
        inv = compose(back, inv)
    return phi, inv


def random_aut_pair(rng: random.Random, ctx: GroupContext,
                    moves: int = 3) -> tuple[GroupEndo, GroupEndo]:
    """A free-group automorphism and its exact inverse, from elementary moves."""
    phi = GroupEndo.identity(ctx)
    inv = GroupEndo.identity(ctx)
    for _ in range(moves):
        kind = rng.randint(0, 3 if ctx.rank >= 2 else 1)
        if kind == 0:
            a = rng.randint(1, ctx.rank)
            images = [generator(j) if j != a else generator(j) ** -1
                      for j in range(1, ctx.rank + 1)]
            step = back = GroupEndo(ctx, tuple(images))
        elif kind == 1:
            x = random_word(rng, ctx, rng.randint(1, 2))
            step = GroupEndo.inner(ctx, x)
            back = GroupEndo.inner(ctx, ~x)
        elif kind == 2:
            a, b = rng.sample(range(1, ctx.rank + 1), 2)
            images = []
            for j in range(1, ctx.rank + 1):
                images.append(generator(b) if j == a
                              else generator(a) if j == b else generator(j))
            step = back = GroupEndo(ctx, tuple(images))
        else:
            a, b = rng.sample(range(1, ctx.rank + 1), 2)
            e = rng.choice([1, -1])
            fwd = [generator(j) if j != a else generator(a) * generator(b) ** e
                   for j in range(1, ctx.rank + 1)]
            bwd = [generator(j) if j != a else generator(a) * generator(b) ** -e
                   for j in range(1, ctx.rank + 1)]
            step = GroupEndo(ctx, tuple(fwd))
            back = GroupEndo(ctx, tuple(bwd))
        phi = compose(phi, step)
        inv = compose(back, inv)
    return phi, inv


def random_series(rng: random.Random, ctx: GroupContext, terms: int = 6,
                  min_deg: int = 0) -> TruncSeries:
    coeffs = {}
    for _ in range(terms):
        d = rng.randint(min_deg, ctx.trunc)
        mono = tuple(rng.randint(1, ctx.rank) for _ in range(d))
        coeffs[mono] = rng.randint(1, ctx.p - 1)
    return TruncSeries(ctx, {m: c for m, c in coeffs.items() if c % ctx.p})


def random_algebra_endo(rng: random.Random, ctx: GroupContext) -> AlgebraEndo:
    """Random filtration-preserving automorphism of the truncated algebra:
    an invertible linear part plus sparse higher-degree noise."""
    r, p = ctx.rank, ctx.p
    while True:
        mat = tuple(tuple(rng.randrange(p) for _ in range(r)) for _ in range(r))
        if mat_inverse(mat, p) is not None:
            break
    images = []
    for j in range(ctx.rank):
        coeffs = {}
        for i in range(r):
            if mat[i][j]:
                coeffs[(i + 1,)] = mat[i][j]
        for _ in range(rng.randint(0, 4)):
            d = rng.randint(2, ctx.trunc)
            mono = tuple(rng.randint(1, r) for _ in range(d))
            coeffs[mono] = rng.randint(1, p - 1)
        images.append(TruncSeries(ctx, coeffs))
    return AlgebraEndo(ctx, tuple(images))


def positive_compositions(n: int, j: int):
    """Ordered tuples of j positive integers summing to n."""
    if j == 1:
        yield (n,)
        return
    for first in range(1, n - j + 2):
        for rest in positive_compositions(n - first, j - 1):
            yield (first,) + rest


def inner_table_closed_form(ctx: GroupContext, f: Word, m: int) -> JohnsonTable:
    """Level-m table of the inner automorphism by f, via the alternating sum
    over compositions of m; no automorphism is ever applied."""
    emb = magnus_embed(f, ctx)
    part = [emb.homogeneous(q) for q in range(m + 1)]
    rows = []
    for h in range(1, ctx.rank + 1):
        x_h = TruncSeries.variable(ctx, h)
        total = series_multiply(part[m], x_h)
        for j in range(1, m + 1):
            for q0 in range(0, m - j + 1):
                for comp in positive_compositions(m - q0, j):
                    term = series_multiply(part[q0], x_h)
                    for q in comp:
                        term = series_multiply(term, part[q])
                    total = total + term.scale((-1) ** j)
        rows.append(total.homogeneous(m + 1))
    return JohnsonTable(ctx, m, tuple(rows))


def transport_table(psi: GroupEndo, table: JohnsonTable) -> JohnsonTable:
    """The table of psi . phi: row j becomes the psi-substitution of the
    Q-combination of rows, Q the inverse induced matrix of psi."""
    ctx = table.ctx
    mat = induced_matrix(psi)
    inv = mat_inverse(mat, ctx.p)
    assert inv is not None
    sub = AlgebraEndo.from_matrix(ctx, mat)
    rows = []
    for j in range(ctx.rank):
        mixed = TruncSeries.zero(ctx)
        for i in range(ctx.rank):
            c = inv[i][j]
            if c:
                mixed = mixed + table.rows[i].scale(c)
        rows.append(sub(mixed).homogeneous(table.level + 1))
    return JohnsonTable(ctx, table.level, tuple(rows))


def derivation_apply(table: JohnsonTable, s: TruncSeries) -> TruncSeries:
    """Extend the table's rows to a derivation of the tensor algebra and
    apply it to a homogeneous series: one slot replaced per summand."""
    ctx = table.ctx
    out = TruncSeries.zero(ctx)
    for mono, c in s.terms():
        for slot in range(len(mono)):
            left = TruncSeries.constant(ctx, 1)
            for a in mono[:slot]:
                left = series_multiply(left, TruncSeries.variable(ctx, a))
            mid = table.rows[mono[slot] - 1]
            piece = series_multiply(left, mid)
            for a in mono[slot + 1:]:
                piece = series_multiply(piece, TruncSeries.variable(ctx, a))
            out = out + piece.scale(c)
    return out


def series_bracket(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    return series_multiply(a, b) - series_multiply(b, a)


# --- independent cup-product oracle over the finite 2-step quotient -------
#
# Rank-2 only.  Group elements are normal forms (a, b, c) for x^a y^b z^c
# with z = [x, y] central and y x = z^-1 x y, all coordinates mod p.

HEIS_GENS = {1: (1, 0, 0), 2: (0, 1, 0)}


def heis_mul(p: int, u, v):
    return ((u[0] + v[0]) % p, (u[1] + v[1]) % p,
            (u[2] + v[2] - v[0] * u[1]) % p)


def heis_inv(p: int, u):
    a, b, c = u
    return (-a % p, -b % p, (-c - a * b) % p)


def cup_fold_value(ctx: GroupContext, a1, a2, f: Word) -> int:
    """Pairing of the cup product of two characters (coordinate vectors a1,
    a2) against the class of a word f with exponent sums divisible by p.

    Folds the primitive cochain relation b(uy) = b(u) + b(y) - a1(u) a2(y)
    letter by letter, with b vanishing on the generators; the running prefix
    lives in the finite quotient.
    """
    p = ctx.p

    def chi(vals, u):
        return (vals[0] * u[0] + vals[1] * u[1]) % p

    total = 0
    prefix = (0, 0, 0)
    for g, e in f.letters:
        base = HEIS_GENS[g]
        step = base if e > 0 else heis_inv(p, base)
        letter_val = 0 if e > 0 else chi(a1, base) * chi(a2, step) % p
        for _ in range(abs(e)):
            total = (total + letter_val - chi(a1, prefix) * chi(a2, step)) % p
            prefix = heis_mul(p, prefix, step)
    return total % p


def random_frattini_word(rng: random.Random, ctx: GroupContext,
                         pieces: int = 2) -> Word:
    """Random element of the second filtration level with every exponent sum
    zero mod p: a product of commutators and p-th powers."""
    out = word(())
    for _ in range(pieces):
        if rng.random() < 0.6:
            out = out * word_commutator(random_word(rng, ctx, 2),
                                        random_word(rng, ctx, 2))
        else:
            out = out * word_power(random_word(rng, ctx, 2), ctx.p)
    return out
