"""Massey-product values from finite defining-system tables, relator sets of
automorphism iterates, and the coefficient comparison between Johnson tables
and relator coefficients.

A defining system for a length-m product over generators g_1..g_s is stored
as a sparse table a(k, l, i) with 1 <= k < l <= m+1 and (k, l) != (1, m+1).
Missing positions contribute zero, so composition terms through the missing
corner vanish.  The value on the class of a relator f is

    sum_{j=1}^{m} (-1)^(j+1)
      sum_{c_1+..+c_j = m}  sum_{i_1..i_j}
        a(1, 1+c_1, i_1) * ... * a(m+1-c_j, m+1, i_j) * eps(i_1..i_j; f)

with eps the coefficients of the embedded relator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product

from .autom import (
    aj_depth_at_least,
    is_automorphism,
    iterate_deviations,
    johnson_table_from_deviations,
    _depth_from_deviations,
)
from .magnus import (
    EXCEEDS,
    Monomial,
    format_monomial,
    magnus_coefficient,
    magnus_embed,
    mono_key,
)
from .words import (
    GroupContext,
    GroupEndo,
    InputError,
    PreconditionError,
    Word,
    apply_endo,
    generator,
    power_endo,
)


@dataclass
class DefiningSystem:
    """Sparse value table of a defining system on presentation generators.

    length is m (the number of classes multiplied), gens is the generator
    count s, and values maps (k, l, i) to scalars.
    """

    length: int
    gens: int
    values: dict[tuple[int, int, int], int] = field(default_factory=dict)

    def __post_init__(self):
        if self.length < 2:
            raise InputError(f"product length must be >= 2, got {self.length}")
        if self.gens < 1:
            raise InputError(f"generator count must be >= 1, got {self.gens}")
        for (k, l, i), v in self.values.items():
            if not (1 <= k < l <= self.length + 1):
                raise InputError(f"array position ({k},{l}) out of range")
            if (k, l) == (1, self.length + 1):
                raise InputError("array position (1, m+1) is not part of a "
                                 "defining system")
            if not 1 <= i <= self.gens:
                raise InputError(f"generator index {i} out of range "
                                 f"(allowed 1..{self.gens})")
            if not isinstance(v, int):
                raise InputError(f"value at ({k},{l},{i}) is not an integer")

    def value(self, k: int, l: int, i: int) -> int:
        return self.values.get((k, l, i), 0)


def _compositions(m: int, j: int):
    """Ordered compositions of m into j positive parts, deterministic order."""
    for cuts in combinations(range(1, m), j - 1):
        bounds = (0,) + cuts + (m,)
        yield tuple(bounds[t + 1] - bounds[t] for t in range(j))


def massey_eval(ds: DefiningSystem, relator: Word, ctx: GroupContext) -> int:
    """Value of the length-m product attached to the defining system on the
    class of the relator, as a scalar in [0, p)."""
    ctx.require_odd("massey evaluation")
    m = ds.length
    if m > ctx.trunc:
        raise InputError(
            f"product length {m} exceeds truncation order {ctx.trunc}"
        )
    if relator.max_generator() > ds.gens:
        raise InputError(
            f"relator uses a generator beyond the system's count {ds.gens}"
        )
    p = ctx.p
    emb_ctx = GroupContext(p, ds.gens, ctx.trunc)
    emb = magnus_embed(relator, emb_ctx)
    by_degree: dict[int, list[tuple[Monomial, int]]] = {}
    for mono, c in emb.coeffs.items():
        by_degree.setdefault(len(mono), []).append((mono, c))
    total = 0
    for j in range(1, m + 1):
        sign = -1 if j % 2 == 0 else 1
        terms = by_degree.get(j, [])
        if not terms:
            continue
        terms = sorted(terms, key=lambda t: mono_key(t[0]))
        for comp in _compositions(m, j):
            bounds = [1]
            for c in comp:
                bounds.append(bounds[-1] + c)
            positions = [(bounds[t], bounds[t + 1]) for t in range(j)]
            if (1, m + 1) in positions:
                continue
            for mono, c in terms:
                prod_val = 1
                for t, i in enumerate(mono):
                    prod_val = (prod_val * ds.value(*positions[t], i)) % p
                    if prod_val == 0:
                        break
                if prod_val:
                    total = (total + sign * prod_val * c) % p
    return total % p


@dataclass(frozen=True)
class RelatorSet:
    """Relators of the presentation attached to the d-th p-power iterate of
    an automorphism: relators live over x1..x_{r+1}, the reduced forms over
    x1..xr after killing the auxiliary generator."""

    ctx: GroupContext
    d: int
    relators: tuple[Word, ...]
    reduced: tuple[Word, ...]


def build_relators(phi: GroupEndo, d: int) -> RelatorSet:
    """Relator words of the iterate: R_j = psi(x_j) (x_{r+1} x_j x_{r+1}^-1)^-1
    and the reduced forms R'_j = psi(x_j) x_j^-1, where psi is the p^d-th
    iterate of phi."""
    ctx = phi.ctx
    ctx.require_odd("relator construction")
    if not isinstance(d, int) or d < 0:
        raise InputError(f"iterate exponent d must be a nonnegative integer, got {d!r}")
    if not is_automorphism(phi):
        raise PreconditionError("endomorphism is not an automorphism "
                                "(induced linear map is singular)")
    if not aj_depth_at_least(phi, 1):
        raise PreconditionError(
            "automorphism does not act trivially on the abelianized group "
            "(depth 0)"
        )
    psi = power_endo(phi, ctx.p**d)
    aux = generator(ctx.rank + 1)
    relators = []
    reduced = []
    for j in range(1, ctx.rank + 1):
        img = apply_endo(psi, generator(j))
        conj = aux * generator(j) * ~aux
        relators.append(img * ~conj)
        reduced.append(img * ~generator(j))
    return RelatorSet(ctx, d, tuple(relators), tuple(reduced))


@dataclass(frozen=True)
class TheoremReport:
    """Comparison of the level-m Johnson coefficient of an iterate with the
    matching coefficient of the reduced relator, after the two equal sign
    factors cancel."""

    d: int
    j: int
    mono: Monomial
    level: int
    lhs: int
    rhs: int
    equal: bool

    def as_dict(self, rank: int) -> dict:
        return {
            "d": self.d,
            "j": self.j,
            "mono": format_monomial(self.mono, rank),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "equal": self.equal,
        }


def _iterate_level(phi: GroupEndo, d: int):
    """Deviation series of the p^d-th iterate together with its exact depth.

    Raises PreconditionError when the depth exceeds the horizon, since the
    comparison needs the exact level.
    """
    ctx = phi.ctx
    devs, psi = iterate_deviations(phi, ctx.p**d)
    level = _depth_from_deviations(devs)
    if level == EXCEEDS:
        raise PreconditionError(
            f"iterate acts trivially through the truncation horizon "
            f"(depth beyond {ctx.trunc - 1}); no comparison level exists"
        )
    if level + 1 > ctx.trunc:
        raise PreconditionError(
            f"comparison degree {level + 1} exceeds truncation order {ctx.trunc}"
        )
    return devs, psi, level


def theorem_522_check(phi: GroupEndo, d: int, mono: Monomial, j: int) -> TheoremReport:
    """Single-coefficient comparison.

    lhs: the level-m Johnson coefficient of the p^d-th iterate at (j, mono),
    where m is the iterate's depth.  rhs: (-1)^(m+1) * (-1)^(m+1) times the
    monomial coefficient of the embedded reduced relator, which the equal
    sign factors collapse to the bare coefficient.
    """
    ctx = phi.ctx
    ctx.require_odd("relator coefficient comparison")
    if not is_automorphism(phi):
        raise PreconditionError("endomorphism is not an automorphism "
                                "(induced linear map is singular)")
    if not aj_depth_at_least(phi, 1):
        raise PreconditionError(
            "automorphism does not act trivially on the abelianized group "
            "(depth 0)"
        )
    mono = tuple(mono)
    if not 1 <= j <= ctx.rank:
        raise InputError(f"relator index {j} out of range (allowed 1..{ctx.rank})")
    for i in mono:
        if not 1 <= i <= ctx.rank:
            raise InputError(f"monomial index {i} out of range (allowed 1..{ctx.rank})")
    devs, psi, level = _iterate_level(phi, d)
    if len(mono) != level + 1:
        raise InputError(
            f"monomial degree {len(mono)} does not match comparison degree "
            f"{level + 1}"
        )
    table = johnson_table_from_deviations(ctx, devs, level)
    lhs = table.coefficient(j, mono)
    sign = (-1) ** (level + 1) % ctx.p
    if psi is not None:
        reduced = apply_endo(psi, generator(j)) * ~generator(j)
        eps = magnus_coefficient(mono, reduced, ctx)
    else:
        # Word-level iterate not representable: the reduced relator's
        # embedding equals the iterate's deviation series by construction.
        eps = devs[j - 1].coefficient(mono)
    rhs = (sign * sign * eps) % ctx.p
    return TheoremReport(d, j, mono, level, lhs, rhs, lhs == rhs)


def theorem_522_grid(phi: GroupEndo, d: int) -> list[TheoremReport]:
    """Reports for every relator index and every monomial of the comparison
    degree, in deterministic order."""
    ctx = phi.ctx
    ctx.require_odd("relator coefficient comparison")
    if not is_automorphism(phi):
        raise PreconditionError("endomorphism is not an automorphism "
                                "(induced linear map is singular)")
    if not aj_depth_at_least(phi, 1):
        raise PreconditionError(
            "automorphism does not act trivially on the abelianized group "
            "(depth 0)"
        )
    devs, psi, level = _iterate_level(phi, d)
    table = johnson_table_from_deviations(ctx, devs, level)
    reduced_embeds = None
    if psi is not None:
        reduced_embeds = [
            magnus_embed(apply_endo(psi, generator(j)) * ~generator(j), ctx) - 1
            for j in range(1, ctx.rank + 1)
        ]
    sign = (-1) ** (level + 1) % ctx.p
    reports = []
    for j in range(1, ctx.rank + 1):
        source = reduced_embeds[j - 1] if reduced_embeds is not None else devs[j - 1]
        for mono in product(range(1, ctx.rank + 1), repeat=level + 1):
            lhs = table.coefficient(j, mono)
            eps = source.coefficient(mono)
            rhs = (sign * sign * eps) % ctx.p
            reports.append(TheoremReport(d, j, mono, level, lhs, rhs, lhs == rhs))
    return reports
