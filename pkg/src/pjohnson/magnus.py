"""Truncated non-commutative power series over F_p and the Magnus embedding.

Series live in F_p<<X_1..X_r>> truncated above a fixed total degree N.  A
series is a sparse map from index tuples (monomials in the non-commuting
variables) to nonzero scalars in [1, p).  The embedding sends the generator
x_j to 1 + X_j; the filtration degree of a word and its graded components
are read off from the embedded series.
"""

from __future__ import annotations

import math
from typing import Iterable, Iterator

from .words import (
    GroupContext,
    InputError,
    PreconditionError,
    Word,
)

Monomial = tuple[int, ...]

# Degree results beyond the representable range.  IDENTITY means the word
# reduces to the empty word; EXCEEDS means the series deviation vanishes
# through the truncation horizon but the word is not the identity.
IDENTITY = "identity"
EXCEEDS = "exceeds"


def mono_key(m: Monomial) -> tuple[int, Monomial]:
    """Sort key for the length-lex order used by every deterministic surface."""
    return (len(m), m)


def format_monomial(m: Monomial, rank: int) -> str:
    """Compact digit string when every index fits in one digit, else commas."""
    if rank <= 9:
        return "".join(str(i) for i in m)
    return ",".join(str(i) for i in m)


def monomial_label(m: Monomial) -> str:
    """Display label: `1` for the empty monomial, else Xi1Xi2...

    Unlike the digit form this cannot collide: no variable monomial is
    ever labeled `1`.
    """
    return "1" if m == () else "".join(f"X{i}" for i in m)


def parse_monomial(text: str, rank: int) -> Monomial:
    text = text.strip()
    if not text:
        raise InputError("empty monomial")
    if "," in text:
        parts = [p.strip() for p in text.split(",")]
    else:
        if not text.isdigit():
            raise InputError(f"cannot parse monomial {text!r}")
        parts = list(text)
    try:
        mono = tuple(int(p) for p in parts)
    except ValueError:
        raise InputError(f"cannot parse monomial {text!r}") from None
    for i in mono:
        if not 1 <= i <= rank:
            raise InputError(f"monomial index {i} out of range (allowed 1..{rank})")
    return mono


class TruncSeries:
    """A truncated series.  Coefficients are normalized on construction:
    reduced mod p, zeros dropped, monomials beyond the truncation dropped."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: GroupContext, coeffs: dict[Monomial, int] | None = None):
        self.ctx = ctx
        if coeffs:
            p, n = ctx.p, ctx.trunc
            clean: dict[Monomial, int] = {}
            for m, c in coeffs.items():
                if len(m) > n:
                    continue
                c %= p
                if c:
                    clean[m] = c
            self.coeffs = clean
        else:
            self.coeffs: dict[Monomial, int] = {}

    @classmethod
    def zero(cls, ctx: GroupContext) -> "TruncSeries":
        return cls(ctx)

    @classmethod
    def constant(cls, ctx: GroupContext, c: int) -> "TruncSeries":
        c %= ctx.p
        return cls(ctx, {(): c} if c else {})

    @classmethod
    def one(cls, ctx: GroupContext) -> "TruncSeries":
        return cls.constant(ctx, 1)

    @classmethod
    def variable(cls, ctx: GroupContext, j: int) -> "TruncSeries":
        if not 1 <= j <= ctx.rank:
            raise InputError(f"variable index {j} out of range (allowed 1..{ctx.rank})")
        return cls(ctx, {(j,): 1})

    def copy(self) -> "TruncSeries":
        return TruncSeries(self.ctx, dict(self.coeffs))

    def is_zero(self) -> bool:
        return not self.coeffs

    def constant_term(self) -> int:
        return self.coeffs.get((), 0)

    def coefficient(self, mono: Monomial) -> int:
        return self.coeffs.get(tuple(mono), 0)

    def support(self) -> list[Monomial]:
        return sorted(self.coeffs, key=mono_key)

    def terms(self) -> Iterator[tuple[Monomial, int]]:
        for m in self.support():
            yield m, self.coeffs[m]

    def min_degree(self) -> int | None:
        """Smallest total degree carrying a nonzero coefficient, or None."""
        if not self.coeffs:
            return None
        return min(len(m) for m in self.coeffs)

    def homogeneous(self, m: int) -> "TruncSeries":
        return TruncSeries(
            self.ctx, {k: v for k, v in self.coeffs.items() if len(k) == m}
        )

    def truncate_above(self, m: int) -> "TruncSeries":
        return TruncSeries(
            self.ctx, {k: v for k, v in self.coeffs.items() if len(k) <= m}
        )

    def _coerce(self, other) -> "TruncSeries":
        if isinstance(other, TruncSeries):
            if other.ctx != self.ctx:
                raise InputError("series contexts differ (p, rank or truncation)")
            return other
        if isinstance(other, int):
            return TruncSeries.constant(self.ctx, other)
        return NotImplemented

    def __add__(self, other) -> "TruncSeries":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        p = self.ctx.p
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            v = (out.get(m, 0) + c) % p
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return TruncSeries(self.ctx, out)

    __radd__ = __add__

    def __neg__(self) -> "TruncSeries":
        p = self.ctx.p
        return TruncSeries(self.ctx, {m: (-c) % p for m, c in self.coeffs.items()})

    def __sub__(self, other) -> "TruncSeries":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "TruncSeries":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def scale(self, c: int) -> "TruncSeries":
        p = self.ctx.p
        c %= p
        if c == 0:
            return TruncSeries(self.ctx)
        return TruncSeries(self.ctx, {m: (c * v) % p for m, v in self.coeffs.items()})

    def __mul__(self, other) -> "TruncSeries":
        if isinstance(other, int):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return series_multiply(self, other)

    def __rmul__(self, other) -> "TruncSeries":
        if isinstance(other, int):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = TruncSeries.constant(self.ctx, other)
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.ctx == other.ctx and self.coeffs == other.coeffs

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for m, c in self.terms():
            if m == ():
                parts.append(str(c))
            else:
                parts.append(f"{c}*{monomial_label(m)}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"TruncSeries({str(self)})"


def series_multiply(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    if a.ctx != b.ctx:
        raise InputError("series contexts differ (p, rank or truncation)")
    p, n = a.ctx.p, a.ctx.trunc
    # Bucket the right factor by degree so only pairs that survive the
    # truncation are visited; on saturated supports this is the difference
    # between quadratic and near-linear work.
    by_degree: dict[int, list[tuple[Monomial, int]]] = {}
    for m2, c2 in b.coeffs.items():
        by_degree.setdefault(len(m2), []).append((m2, c2))
    out: dict[Monomial, int] = {}
    for m1, c1 in a.coeffs.items():
        room = n - len(m1)
        if room < 0:
            continue
        for d, items in by_degree.items():
            if d > room:
                continue
            for m2, c2 in items:
                key = m1 + m2
                out[key] = out.get(key, 0) + c1 * c2
    return TruncSeries(a.ctx, {m: v for m, v in ((m, c % p) for m, c in out.items()) if v})


def series_invert(a: TruncSeries) -> TruncSeries:
    """Inverse of a unit: constant term inverted, geometric series for the rest."""
    c = a.constant_term()
    if c == 0:
        raise PreconditionError("series is not a unit: constant term is zero")
    p, n = a.ctx.p, a.ctx.trunc
    cinv = pow(c, p - 2, p)
    u = 1 - a.scale(cinv)  # zero constant term, so powers gain degree
    acc = TruncSeries.one(a.ctx)
    pw = TruncSeries.one(a.ctx)
    for _ in range(n):
        pw = series_multiply(pw, u)
        if pw.is_zero():
            break
        acc = acc + pw
    return acc.scale(cinv)


def _gbinom(e: int, k: int) -> int:
    """Binomial coefficient with an arbitrary integer upper argument."""
    num = 1
    for i in range(k):
        num *= e - i
    return num // math.factorial(k)


def generator_series(ctx: GroupContext, j: int, e: int = 1) -> TruncSeries:
    """(1 + X_j)^e for any integer exponent, truncated."""
    if not 1 <= j <= ctx.rank:
        raise InputError(f"generator index {j} out of range (allowed 1..{ctx.rank})")
    coeffs: dict[Monomial, int] = {}
    for k in range(ctx.trunc + 1):
        c = _gbinom(e, k) % ctx.p
        if c:
            coeffs[(j,) * k] = c
    return TruncSeries(ctx, coeffs)


def magnus_embed(w: Word, ctx: GroupContext) -> TruncSeries:
    """The truncated image of a word under x_j -> 1 + X_j."""
    if w.max_generator() > ctx.rank:
        raise InputError(f"word uses a generator beyond rank {ctx.rank}")
    acc = TruncSeries.one(ctx)
    for g, e in w.letters:
        acc = series_multiply(acc, generator_series(ctx, g, e))
    return acc


def magnus_coefficient(mono: Monomial, w: Word, ctx: GroupContext) -> int:
    """Coefficient of the given monomial in the embedded word."""
    mono = tuple(mono)
    if len(mono) > ctx.trunc:
        raise InputError(
            f"monomial degree {len(mono)} exceeds truncation order {ctx.trunc}"
        )
    for i in mono:
        if not 1 <= i <= ctx.rank:
            raise InputError(f"monomial index {i} out of range (allowed 1..{ctx.rank})")
    return magnus_embed(w, ctx).coefficient(mono)


def zassenhaus_degree(w: Word, ctx: GroupContext) -> int | str:
    """Filtration degree of a word: the smallest n with a nonzero degree-n
    coefficient in theta(w) - 1.

    Returns IDENTITY for the empty word and EXCEEDS when the deviation
    vanishes through the truncation horizon.
    """
    if w.is_identity:
        return IDENTITY
    dev = magnus_embed(w, ctx) - 1
    d = dev.min_degree()
    return EXCEEDS if d is None else d


def degree_at_least(w: Word, ctx: GroupContext, n: int) -> bool:
    """Whether the word lies in filtration level n, as certified through the
    truncation horizon.  IDENTITY and EXCEEDS count as arbitrarily deep."""
    deg = zassenhaus_degree(w, ctx)
    if deg in (IDENTITY, EXCEEDS):
        return True
    return deg >= n


def graded_component(w: Word, m: int, ctx: GroupContext) -> TruncSeries:
    """Degree-m component of theta(w) - 1 for a word in filtration level m.

    This is the graded image of the word's class in level m over level m+1.
    """
    if not 1 <= m <= ctx.trunc:
        raise InputError(f"graded level must lie in [1, {ctx.trunc}], got {m}")
    dev = magnus_embed(w, ctx) - 1
    d = dev.min_degree()
    if d is not None and d < m:
        raise PreconditionError(f"word is not in filtration level {m} (degree {d})")
    return dev.homogeneous(m)


def series_tsv(s: TruncSeries) -> str:
    """TSV rendering: one `monomial<TAB>coefficient` line per term."""
    return "\n".join(f"{monomial_label(m)}\t{c}" for m, c in s.terms())
