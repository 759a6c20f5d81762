"""Words in a finitely generated free group, and endomorphisms given by
generator images.

A word is stored freely reduced as a tuple of (generator, exponent) blocks
with generators numbered from 1 and nonzero exponents.  The module also
houses the shared ambient context (prime, rank, truncation order), the text
grammar used by every user-facing surface, and the resource guard that
protects word-level iteration from exponential blowup.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

MAX_TRUNC = 16
MAX_EXPONENT = 2**31
MAX_WORD_BLOCKS = 10**5


class EngineError(Exception):
    """Base class for every error raised by this package."""


class InputError(EngineError):
    """Invalid input: bad syntax, bad parameters, or an out-of-range index."""


class PreconditionError(InputError):
    """An operation was invoked outside its domain of definition."""


class WordSyntaxError(InputError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class ResourceLimitError(EngineError):
    """A configured resource guard tripped (word length during iteration)."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class GroupContext:
    """Ambient parameters: the prime p, the free rank, and the truncation
    order of the power series algebra."""

    p: int
    rank: int
    trunc: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not _is_prime(self.p):
            raise InputError(f"p must be a prime number, got {self.p!r}")
        if not isinstance(self.rank, int) or self.rank < 1:
            raise InputError(f"rank must be an integer >= 1, got {self.rank!r}")
        if not isinstance(self.trunc, int) or not 2 <= self.trunc <= MAX_TRUNC:
            raise InputError(
                f"truncation order must lie in [2, {MAX_TRUNC}], got {self.trunc!r}"
            )

    def require_odd(self, feature: str) -> None:
        if self.p == 2:
            raise InputError(f"{feature} requires an odd prime, got p=2")


def _check_exponent(e: int) -> int:
    if abs(e) >= MAX_EXPONENT:
        raise InputError(f"exponent overflow: |{e}| >= 2^31")
    return e


def _reduce(pairs: Iterable[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    out: list[list[int]] = []
    for g, e in pairs:
        if e == 0:
            continue
        if out and out[-1][0] == g:
            out[-1][1] += e
            _check_exponent(out[-1][1])
            if out[-1][1] == 0:
                out.pop()
        else:
            out.append([g, _check_exponent(e)])
    return tuple((g, e) for g, e in out)


@dataclass(frozen=True)
class Word:
    """A freely reduced word.  The empty tuple is the identity.

    Instances are immutable values; all arithmetic returns new words.
    Construct through :func:`word`, :func:`generator` or the parser so the
    reduction invariant holds.
    """

    letters: tuple[tuple[int, int], ...] = ()

    @property
    def is_identity(self) -> bool:
        return not self.letters

    def block_count(self) -> int:
        return len(self.letters)

    def letter_count(self) -> int:
        return sum(abs(e) for _, e in self.letters)

    def max_generator(self) -> int:
        return max((g for g, _ in self.letters), default=0)

    def exponent_sum(self, j: int) -> int:
        return sum(e for g, e in self.letters if g == j)

    def __mul__(self, other: "Word") -> "Word":
        return Word(_reduce(self.letters + other.letters))

    def __invert__(self) -> "Word":
        return Word(tuple((g, -e) for g, e in reversed(self.letters)))

    def __pow__(self, k: int) -> "Word":
        return word_power(self, k)

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        parts = []
        for g, e in self.letters:
            parts.append(f"x{g}" if e == 1 else f"x{g}^{e}")
        return "*".join(parts)

    def __repr__(self) -> str:
        return f"Word({str(self)!r})"


IDENTITY_WORD = Word()


def word(pairs: Iterable[tuple[int, int]]) -> Word:
    """Build a word from (generator, exponent) pairs, reducing freely."""
    pairs = tuple(pairs)
    for g, _ in pairs:
        if not isinstance(g, int) or g < 1:
            raise InputError(f"generator index must be a positive integer, got {g!r}")
    return Word(_reduce(pairs))


def generator(j: int) -> Word:
    if j < 1:
        raise InputError(f"generator index must be >= 1, got {j}")
    return Word(((j, 1),))


def word_power(w: Word, k: int) -> Word:
    _check_exponent(k)
    if k == 0 or w.is_identity:
        return IDENTITY_WORD
    base = w if k > 0 else ~w
    n = abs(k)
    if base.block_count() == 1:
        g, e = base.letters[0]
        if abs(e) * n >= MAX_EXPONENT:
            raise ResourceLimitError("word power exponent exceeds 2^31")
        return word([(g, e * n)])
    if base.block_count() * n > MAX_WORD_BLOCKS:
        raise ResourceLimitError(
            f"word power would exceed {MAX_WORD_BLOCKS} letter blocks"
        )
    return Word(_reduce(base.letters * n))


def word_product(factors: Sequence[tuple[Word, int]]) -> Word:
    """Product of word powers: factors is a sequence of (word, exponent)."""
    acc: list[tuple[int, int]] = []
    for w, e in factors:
        acc.extend(word_power(w, e).letters)
        if len(acc) > 2 * MAX_WORD_BLOCKS:
            acc = list(_reduce(acc))
    return Word(_reduce(acc))


def word_commutator(u: Word, v: Word) -> Word:
    """The commutator u v u^-1 v^-1."""
    return Word(_reduce(u.letters + v.letters + (~u).letters + (~v).letters))


def eliminate_generator(w: Word, j: int) -> Word:
    """Substitute the identity for generator j (drop its letters, reduce)."""
    return Word(_reduce(p for p in w.letters if p[0] != j))


class _Parser:
    """Recursive-descent parser for the word grammar.

    word := term (('*')? term)*
    term := atom ('^' int)?
    atom := 'x' int | '[' word ',' word ']' | '(' word ')' | '1'

    Whitespace is ignored.  The atom '1' denotes the identity so that the
    canonical printer round-trips.
    """

    def __init__(self, text: str, max_gen: int):
        self.text = text
        self.pos = 0
        self.max_gen = max_gen

    def error(self, message: str):
        raise WordSyntaxError(message, self.pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def parse_int(self) -> int:
        self.skip_ws()
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] == "-":
            self.pos += 1
        digits = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == digits:
            self.pos = start
            self.error("expected an integer")
        value = int(self.text[start : self.pos])
        _check_exponent(value)
        return value

    def parse_atom(self) -> list[tuple[int, int]]:
        ch = self.peek()
        if ch == "x":
            self.pos += 1
            at = self.pos
            j = self.parse_int()
            if j < 1:
                self.pos = at
                self.error(f"generator index must be >= 1, got {j}")
            if j > self.max_gen:
                self.pos = at
                self.error(
                    f"generator index {j} out of range (allowed 1..{self.max_gen})"
                )
            return [(j, 1)]
        if ch == "[":
            self.pos += 1
            u = self.parse_word(stops=",")
            self.expect(",")
            v = self.parse_word(stops="]")
            self.expect("]")
            return list(word_commutator(Word(_reduce(u)), Word(_reduce(v))).letters)
        if ch == "(":
            self.pos += 1
            w = self.parse_word(stops=")")
            self.expect(")")
            return w
        if ch == "1":
            self.pos += 1
            return []
        self.error("expected a term ('x<k>', '[', '(' or '1')")

    def parse_term(self) -> list[tuple[int, int]]:
        atom = self.parse_atom()
        if self.peek() == "^":
            self.pos += 1
            e = self.parse_int()
            return list(word_power(Word(_reduce(atom)), e).letters)
        return atom

    def parse_word(self, stops: str = "") -> list[tuple[int, int]]:
        out = list(self.parse_term())
        while True:
            ch = self.peek()
            if ch == "" or ch in stops:
                return out
            if ch == "*":
                self.pos += 1
            out.extend(self.parse_term())

    def parse(self) -> Word:
        w = self.parse_word()
        self.skip_ws()
        if self.pos != len(self.text):
            self.error("unexpected trailing input")
        return Word(_reduce(w))


def parse_word(text: str, ctx: GroupContext, allow_aux: bool = False) -> Word:
    """Parse a word over x1..xr (plus the auxiliary x_{r+1} when allowed).

    Raises WordSyntaxError with a position on malformed input, and
    InputError on out-of-range generator indices.
    """
    max_gen = ctx.rank + 1 if allow_aux else ctx.rank
    return _Parser(text, max_gen).parse()


@dataclass(frozen=True)
class GroupEndo:
    """An endomorphism of the free group, given by the images of x1..xr."""

    ctx: GroupContext
    images: tuple[Word, ...]

    def __post_init__(self):
        if len(self.images) != self.ctx.rank:
            raise InputError(
                f"expected {self.ctx.rank} generator images, got {len(self.images)}"
            )
        for j, img in enumerate(self.images, start=1):
            if img.max_generator() > self.ctx.rank:
                raise InputError(
                    f"image of x{j} uses a generator beyond rank {self.ctx.rank}"
                )

    @classmethod
    def identity(cls, ctx: GroupContext) -> "GroupEndo":
        return cls(ctx, tuple(generator(j) for j in range(1, ctx.rank + 1)))

    @classmethod
    def inner(cls, ctx: GroupContext, x: Word) -> "GroupEndo":
        """Conjugation g -> x g x^-1."""
        if x.max_generator() > ctx.rank:
            raise InputError(f"conjugator uses a generator beyond rank {ctx.rank}")
        return cls(ctx, tuple(x * generator(j) * ~x for j in range(1, ctx.rank + 1)))

    def __call__(self, w: Word) -> Word:
        return apply_endo(self, w)

    def __str__(self) -> str:
        return ", ".join(
            f"x{j} -> {img}" for j, img in enumerate(self.images, start=1)
        )


def apply_endo(phi: GroupEndo, w: Word) -> Word:
    """Apply the substitution homomorphism to a word.

    Raises ResourceLimitError when the image would exceed the block guard.
    """
    if w.max_generator() > phi.ctx.rank:
        raise InputError(f"word uses a generator beyond rank {phi.ctx.rank}")
    stack: list[list[int]] = []

    def push(g: int, e: int):
        if e == 0:
            return
        if stack and stack[-1][0] == g:
            stack[-1][1] += e
            if abs(stack[-1][1]) >= MAX_EXPONENT:
                raise ResourceLimitError(f"image exponent exceeds 2^31 on x{g}")
            if stack[-1][1] == 0:
                stack.pop()
        else:
            # computed exponents can blow up even when block counts stay
            # small (powers of a single generator), so guard them here too
            if abs(e) >= MAX_EXPONENT:
                raise ResourceLimitError(f"image exponent exceeds 2^31 on x{g}")
            if len(stack) >= MAX_WORD_BLOCKS:
                raise ResourceLimitError(
                    f"image word exceeds {MAX_WORD_BLOCKS} letter blocks"
                )
            stack.append([g, e])

    for g, e in w.letters:
        img = phi.images[g - 1]
        if img.is_identity:
            continue
        if img.block_count() == 1:
            g2, e2 = img.letters[0]
            push(g2, e2 * e)
            continue
        if abs(e) * img.block_count() > MAX_WORD_BLOCKS:
            raise ResourceLimitError(
                f"image word exceeds {MAX_WORD_BLOCKS} letter blocks"
            )
        seq = img.letters if e > 0 else (~img).letters
        for _ in range(abs(e)):
            for g2, e2 in seq:
                push(g2, e2)
    return Word(tuple((g, e) for g, e in stack))


def compose(phi: GroupEndo, psi: GroupEndo) -> GroupEndo:
    """The composite phi after psi: x -> phi(psi(x))."""
    if phi.ctx != psi.ctx:
        raise InputError("cannot compose endomorphisms over different contexts")
    return GroupEndo(phi.ctx, tuple(apply_endo(phi, img) for img in psi.images))


def power_endo(phi: GroupEndo, k: int) -> GroupEndo:
    """k-fold composite of phi with itself; k must be a positive integer.

    Uses square-and-multiply, so the number of compositions is O(log k).
    The block guard in apply_endo turns runaway growth into a
    ResourceLimitError rather than an unbounded computation.
    """
    if not isinstance(k, int) or k < 1:
        raise InputError(f"endomorphism power must be a positive integer, got {k!r}")
    result: GroupEndo | None = None
    base = phi
    while True:
        if k & 1:
            result = base if result is None else compose(result, base)
        k >>= 1
        if not k:
            return result
        base = compose(base, base)
