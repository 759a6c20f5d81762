"""p-period of torsion Iwasawa modules with trivial mu-invariant, and the
depth dynamics of p-power iterates of an automorphism.

A module is described by the degree multiset of its cyclic elementary
summands F_p[[X]]/(X^deg).  The p-period is the least d such that the
sigma-action generator to the p^d-th power acts trivially, which happens
exactly when p^d clears every degree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .autom import aj_depth_at_least, is_automorphism, iterate_depth, johnson_hom
from .magnus import EXCEEDS, degree_at_least, zassenhaus_degree
from .words import (
    GroupContext,
    GroupEndo,
    InputError,
    PreconditionError,
    Word,
    compose,
    power_endo,
)


@dataclass(frozen=True)
class LambdaModuleDesc:
    """Degree multiset of the elementary summands, over an odd prime."""

    p: int
    degrees: tuple[int, ...]

    def __post_init__(self):
        probe = GroupContext(self.p, 1, 2)  # reuse the primality validation
        probe.require_odd("Iwasawa module description")
        for d in self.degrees:
            if not isinstance(d, int) or d < 1:
                raise InputError(f"summand degree must be an integer >= 1, got {d!r}")


def p_period(desc: LambdaModuleDesc) -> int:
    """Smallest d with p^d >= every summand degree."""
    if not desc.degrees:
        raise InputError("empty degree multiset has no period")
    target = max(desc.degrees)
    d = 0
    power = 1
    while power < target:
        power *= desc.p
        d += 1
    return d


def lambda_action_check(desc: LambdaModuleDesc, d: int) -> bool:
    """Whether (1+X)^(p^d) - 1 annihilates every summand, decided by honest
    binomial expansion reduced mod each X^deg."""
    if not desc.degrees:
        raise InputError("empty degree multiset has no period")
    if not isinstance(d, int) or d < 0:
        raise InputError(f"exponent d must be a nonnegative integer, got {d!r}")
    e = desc.p**d
    top = max(desc.degrees)
    # Annihilating F_p[X]/(X^deg) is equivalent to every coefficient of the
    # expansion below X^deg vanishing; the constant term is 1 - 1 = 0.
    for k in range(1, top):
        if math.comb(e, k) % desc.p:
            return False
    return True


@dataclass(frozen=True)
class MonodromySequences:
    """The two dual step sequences of an automorphism's p-power iterates.

    d_of_m[m-1] is the least d <= d_max whose iterate has depth >= m, or
    None when no such d was found.  m_of_d[d] is the exact depth of the
    p^d-th iterate, or EXCEEDS when it lies beyond the horizon.
    """

    ctx: GroupContext
    m_max: int
    d_max: int
    d_of_m: tuple[int | None, ...]
    m_of_d: tuple[int | str, ...]


def monodromy_sequences(
    phi: GroupEndo, m_max: int | None = None, d_max: int = 4
) -> MonodromySequences:
    ctx = phi.ctx
    ctx.require_odd("monodromy sequences")
    if m_max is None:
        m_max = ctx.trunc - 1
    if not 1 <= m_max <= ctx.trunc - 1:
        raise InputError(f"m_max must lie in [1, {ctx.trunc - 1}], got {m_max}")
    if not isinstance(d_max, int) or d_max < 0:
        raise InputError(f"d_max must be a nonnegative integer, got {d_max!r}")
    if not is_automorphism(phi):
        raise PreconditionError("endomorphism is not an automorphism "
                                "(induced linear map is singular)")
    depths = [iterate_depth(phi, ctx.p**d) for d in range(d_max + 1)]
    d_of_m = []
    for m in range(1, m_max + 1):
        found = None
        for d, depth in enumerate(depths):
            if depth == EXCEEDS or depth >= m:
                found = d
                break
        d_of_m.append(found)
    return MonodromySequences(ctx, m_max, d_max, tuple(d_of_m), tuple(depths))


def lift_independence_check(
    phi: GroupEndo, x: Word, e: int, m: int | None = None
) -> bool:
    """Whether twisting by the inner automorphism of x leaves the depth
    picture of the e-th iterate unchanged below x's filtration degree, and
    the level-m Johnson table unchanged when x sits one level deeper.
    """
    ctx = phi.ctx
    ctx.require_odd("lift independence check")
    if not isinstance(e, int) or e < 1:
        raise InputError(f"iterate exponent must be a positive integer, got {e!r}")
    if not is_automorphism(phi):
        raise PreconditionError("endomorphism is not an automorphism "
                                "(induced linear map is singular)")
    deg = zassenhaus_degree(x, ctx)
    if m is None:
        m = ctx.trunc - 1 if isinstance(deg, str) else min(deg, ctx.trunc - 1)
    if not 1 <= m <= ctx.trunc - 1:
        raise InputError(f"level must lie in [1, {ctx.trunc - 1}], got {m}")
    if not degree_at_least(x, ctx, m):
        raise PreconditionError(
            f"conjugator is not in filtration level {m} (degree {deg})"
        )
    twisted = compose(GroupEndo.inner(ctx, x), phi)
    a = power_endo(phi, e)
    b = power_endo(twisted, e)
    for level in range(1, m + 1):
        if aj_depth_at_least(a, level) != aj_depth_at_least(b, level):
            return False
    if degree_at_least(x, ctx, m + 1) and aj_depth_at_least(a, m):
        if johnson_hom(a, m) != johnson_hom(b, m):
            return False
    return True
