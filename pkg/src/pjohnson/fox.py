"""Free differential calculus mod p.

Two routes are provided on purpose.  fox_derivative computes the embedded
image of a single derivative by the product rule on truncated series.
epsilon_via_fox iterates the derivative inside the group ring F_p[F]
(elements kept as sparse combinations of reduced words) and augments at the
end.  The latter never touches the series algebra, which is what makes it
an independent check of the Magnus coefficients.
"""

from __future__ import annotations

from .magnus import (
    Monomial,
    TruncSeries,
    generator_series,
    magnus_embed,
    series_multiply,
    _gbinom,
)
from .words import GroupContext, InputError, Word, word


def _derivative_of_power_series(ctx: GroupContext, j: int, e: int) -> TruncSeries:
    # Embedded image of d(x^e)/dx = sum_{k>=1} C(e, k) X^{k-1}, valid for
    # either sign of e.
    coeffs = {}
    for k in range(1, ctx.trunc + 2):
        c = _gbinom(e, k) % ctx.p
        if c and k - 1 <= ctx.trunc:
            coeffs[(j,) * (k - 1)] = c
    return TruncSeries(ctx, coeffs)


def fox_derivative(w: Word, j: int, ctx: GroupContext) -> TruncSeries:
    """Embedded image of the free derivative dw/dx_j, truncated.

    Product rule d(uv) = du + theta(u) dv with d x_i = delta_ij and
    d x_i^-1 = -theta(x_i^-1) delta_ij, folded over the letter blocks.
    """
    if not 1 <= j <= ctx.rank:
        raise InputError(f"derivative index {j} out of range (allowed 1..{ctx.rank})")
    if w.max_generator() > ctx.rank:
        raise InputError(f"word uses a generator beyond rank {ctx.rank}")
    result = TruncSeries.zero(ctx)
    prefix = TruncSeries.one(ctx)
    for g, e in w.letters:
        if g == j:
            result = result + series_multiply(
                prefix, _derivative_of_power_series(ctx, j, e)
            )
        prefix = series_multiply(prefix, generator_series(ctx, g, e))
    return result


# Group-ring elements are dicts mapping reduced letter tuples to scalars.
_Combo = dict[tuple[tuple[int, int], ...], int]


def _derive_word(letters: tuple[tuple[int, int], ...], j: int, p: int) -> _Combo:
    out: _Combo = {}

    def add(w: Word, c: int):
        c %= p
        if not c:
            return
        key = w.letters
        v = (out.get(key, 0) + c) % p
        if v:
            out[key] = v
        else:
            out.pop(key, None)

    prefix = Word()
    for g, e in letters:
        if g == j:
            if e > 0:
                # d(x^e) = 1 + x + ... + x^(e-1)
                for t in range(e):
                    add(prefix * word([(g, t)]), 1)
            else:
                # d(x^e) = -(x^-1 + ... + x^e)
                for t in range(1, -e + 1):
                    add(prefix * word([(g, -t)]), -1)
        prefix = prefix * word([(g, e)])
    return out


def _derive_combo(combo: _Combo, j: int, p: int) -> _Combo:
    out: _Combo = {}
    for letters, c in combo.items():
        for key, c2 in _derive_word(letters, j, p).items():
            v = (out.get(key, 0) + c * c2) % p
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return out


def epsilon_via_fox(mono: Monomial, w: Word, ctx: GroupContext) -> int:
    """Augmented iterated derivative along i_1..i_m, computed in the group
    ring mod p.

    The innermost derivative is taken with respect to the last index, so the
    result matches the left-to-right monomial reading of the series
    coefficients; see the convention test against magnus_coefficient.
    """
    mono = tuple(mono)
    if not mono:
        raise InputError("empty monomial has no iterated derivative")
    for i in mono:
        if not 1 <= i <= ctx.rank:
            raise InputError(f"monomial index {i} out of range (allowed 1..{ctx.rank})")
    if w.max_generator() > ctx.rank:
        raise InputError(f"word uses a generator beyond rank {ctx.rank}")
    p = ctx.p
    combo: _Combo = {w.letters: 1}
    for j in reversed(mono):
        combo = _derive_combo(combo, j, p)
        if not combo:
            return 0
    return sum(combo.values()) % p


def fundamental_identity_holds(w: Word, ctx: GroupContext) -> bool:
    """theta(w) - 1 == sum_j (dw/dx_j) * X_j, truncated."""
    total = TruncSeries.zero(ctx)
    for j in range(1, ctx.rank + 1):
        total = total + series_multiply(
            fox_derivative(w, j, ctx), TruncSeries.variable(ctx, j)
        )
    return total == magnus_embed(w, ctx) - 1
