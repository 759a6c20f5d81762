"""Automorphisms of the free pro-p group: induced linear maps, the depth of
the action on filtration quotients, Johnson tables, and the parallel
machinery on the truncated series algebra (filtration-preserving algebra
endomorphisms, their triangular inversion, and the normalized comparison
map against the semidirect splitting by the linear part).
"""

from __future__ import annotations

from dataclasses import dataclass

from .magnus import (
    EXCEEDS,
    Monomial,
    TruncSeries,
    magnus_embed,
    mono_key,
    series_invert,
    series_multiply,
)
from .words import (
    GroupContext,
    GroupEndo,
    InputError,
    PreconditionError,
    ResourceLimitError,
    Word,
    apply_endo,
    generator,
    power_endo,
)

Matrix = tuple[tuple[int, ...], ...]


def mat_identity(r: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(r)) for i in range(r))


def mat_mul(a: Matrix, b: Matrix, p: int) -> Matrix:
    r = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(r)) % p for j in range(r))
        for i in range(r)
    )


def mat_inverse(a: Matrix, p: int) -> Matrix | None:
    """Gauss-Jordan over F_p; None when singular."""
    r = len(a)
    aug = [[a[i][j] % p for j in range(r)] + [1 if k == i else 0 for k in range(r)]
           for i in range(r)]
    row = 0
    for col in range(r):
        pivot = next((i for i in range(row, r) if aug[i][col] % p), None)
        if pivot is None:
            return None
        aug[row], aug[pivot] = aug[pivot], aug[row]
        inv = pow(aug[row][col], p - 2, p)
        aug[row] = [(v * inv) % p for v in aug[row]]
        for i in range(r):
            if i != row and aug[i][col]:
                f = aug[i][col]
                aug[i] = [(aug[i][j] - f * aug[row][j]) % p for j in range(2 * r)]
        row += 1
    return tuple(tuple(aug[i][r:]) for i in range(r))


def induced_matrix(phi: GroupEndo) -> Matrix:
    """Matrix of the induced map on H = F/F_2; column j holds the degree-1
    coefficients of the embedded image of x_j."""
    ctx = phi.ctx
    cols = []
    for img in phi.images:
        s = magnus_embed(img, ctx)
        cols.append(tuple(s.coefficient((i,)) for i in range(1, ctx.rank + 1)))
    return tuple(
        tuple(cols[j][i] for j in range(ctx.rank)) for i in range(ctx.rank)
    )


def is_automorphism(phi: GroupEndo) -> bool:
    """Invertibility of the induced linear map decides invertibility of the
    endomorphism of the free pro-p group."""
    return mat_inverse(induced_matrix(phi), phi.ctx.p) is not None


def deviation_series(phi: GroupEndo) -> list[TruncSeries]:
    """Per generator j, theta(phi(x_j) x_j^-1) - 1."""
    ctx = phi.ctx
    out = []
    for j in range(1, ctx.rank + 1):
        w = apply_endo(phi, generator(j)) * ~generator(j)
        out.append(magnus_embed(w, ctx) - 1)
    return out


def _depth_from_deviations(devs: list[TruncSeries]) -> int | str:
    degrees = [d.min_degree() for d in devs]
    finite = [d for d in degrees if d is not None]
    if not finite:
        return EXCEEDS
    return min(finite) - 1


def aj_depth(phi: GroupEndo) -> int | str:
    """Largest m with every phi(x_j) x_j^-1 in filtration level m+1, as
    certified through the truncation horizon.  EXCEEDS means the depth is at
    least the horizon allows (beyond trunc - 1)."""
    if not is_automorphism(phi):
        raise PreconditionError("endomorphism is not an automorphism "
                                "(induced linear map is singular)")
    return _depth_from_deviations(deviation_series(phi))


def aj_depth_at_least(phi: GroupEndo, m: int) -> bool:
    d = aj_depth(phi)
    return True if d == EXCEEDS else d >= m


@dataclass(frozen=True)
class JohnsonTable:
    """Rows of a degree-(level+1) tensor per generator: the graded effect of
    an automorphism acting at filtration level `level`."""

    ctx: GroupContext
    level: int
    rows: tuple[TruncSeries, ...]

    def coefficient(self, j: int, mono: Monomial) -> int:
        return self.rows[j - 1].coefficient(tuple(mono))

    def is_zero(self) -> bool:
        return all(r.is_zero() for r in self.rows)

    def entries(self):
        """(generator, monomial, value) triples: generators ascending,
        monomials length-lex."""
        for j, row in enumerate(self.rows, start=1):
            for mono, c in row.terms():
                yield j, mono, c

    def __add__(self, other: "JohnsonTable") -> "JohnsonTable":
        if self.ctx != other.ctx or self.level != other.level:
            raise InputError("cannot add tables at different levels or contexts")
        return JohnsonTable(
            self.ctx, self.level,
            tuple(a + b for a, b in zip(self.rows, other.rows)),
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, JohnsonTable):
            return NotImplemented
        return (self.ctx == other.ctx and self.level == other.level
                and all(a == b for a, b in zip(self.rows, other.rows)))


def _validate_level(ctx: GroupContext, m: int) -> None:
    if not 1 <= m <= ctx.trunc - 1:
        raise InputError(f"level must lie in [1, {ctx.trunc - 1}], got {m}")


def johnson_hom(phi: GroupEndo, m: int) -> JohnsonTable:
    """Level-m Johnson table of an automorphism of depth at least m: row j is
    the degree-(m+1) graded component of phi(x_j) x_j^-1."""
    ctx = phi.ctx
    _validate_level(ctx, m)
    if not is_automorphism(phi):
        raise PreconditionError("endomorphism is not an automorphism "
                                "(induced linear map is singular)")
    devs = deviation_series(phi)
    depth = _depth_from_deviations(devs)
    if depth != EXCEEDS and depth < m:
        raise PreconditionError(
            f"automorphism does not act trivially at level {m} (depth {depth})"
        )
    return JohnsonTable(ctx, m, tuple(d.homogeneous(m + 1) for d in devs))


def johnson_table_from_deviations(
    ctx: GroupContext, devs: list[TruncSeries], m: int
) -> JohnsonTable:
    """Same read-off as johnson_hom, for deviation series already in hand
    (used by the algebra-side iterate route)."""
    _validate_level(ctx, m)
    depth = _depth_from_deviations(devs)
    if depth != EXCEEDS and depth < m:
        raise PreconditionError(
            f"automorphism does not act trivially at level {m} (depth {depth})"
        )
    return JohnsonTable(ctx, m, tuple(d.homogeneous(m + 1) for d in devs))


@dataclass(frozen=True)
class AlgebraEndo:
    """Filtration-preserving endomorphism of the truncated algebra, given by
    the images of the variables (each with zero constant term)."""

    ctx: GroupContext
    images: tuple[TruncSeries, ...]

    def __post_init__(self):
        if len(self.images) != self.ctx.rank:
            raise InputError(
                f"expected {self.ctx.rank} variable images, got {len(self.images)}"
            )
        for j, s in enumerate(self.images, start=1):
            if s.constant_term() != 0:
                raise InputError(f"image of X{j} has a nonzero constant term")

    @classmethod
    def identity(cls, ctx: GroupContext) -> "AlgebraEndo":
        return cls(ctx, tuple(TruncSeries.variable(ctx, j)
                              for j in range(1, ctx.rank + 1)))

    @classmethod
    def from_matrix(cls, ctx: GroupContext, mat: Matrix) -> "AlgebraEndo":
        """The multiplicative extension of a linear substitution."""
        images = []
        for j in range(ctx.rank):
            coeffs = {}
            for i in range(ctx.rank):
                c = mat[i][j] % ctx.p
                if c:
                    coeffs[(i + 1,)] = c
            images.append(TruncSeries(ctx, coeffs))
        return cls(ctx, tuple(images))

    def __call__(self, s: TruncSeries) -> TruncSeries:
        return algebra_endo_apply(self, s)

    def linear_matrix(self) -> Matrix:
        r = self.ctx.rank
        return tuple(
            tuple(self.images[j].coefficient((i + 1,)) for j in range(r))
            for i in range(r)
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebraEndo):
            return NotImplemented
        return self.ctx == other.ctx and all(
            a == b for a, b in zip(self.images, other.images)
        )


def algebra_endo_of(phi: GroupEndo) -> AlgebraEndo:
    """Conjugate of the group endomorphism by the embedding: X_j maps to
    theta(phi(x_j)) - 1."""
    ctx = phi.ctx
    return AlgebraEndo(
        ctx, tuple(magnus_embed(img, ctx) - 1 for img in phi.images)
    )


def algebra_endo_apply(e: AlgebraEndo, s: TruncSeries) -> TruncSeries:
    """Substitute the variable images into a series, truncating throughout."""
    if s.ctx != e.ctx:
        raise InputError("series context differs from endomorphism context")
    ctx = e.ctx
    cache: dict[Monomial, TruncSeries] = {(): TruncSeries.one(ctx)}

    def image(mono: Monomial) -> TruncSeries:
        got = cache.get(mono)
        if got is None:
            got = series_multiply(image(mono[:-1]), e.images[mono[-1] - 1])
            cache[mono] = got
        return got

    out = TruncSeries.zero(ctx)
    for mono in sorted(s.coeffs, key=mono_key):
        out = out + image(mono).scale(s.coeffs[mono])
    return out


def algebra_endo_compose(e: AlgebraEndo, f: AlgebraEndo) -> AlgebraEndo:
    """e after f."""
    if e.ctx != f.ctx:
        raise InputError("cannot compose endomorphisms over different contexts")
    return AlgebraEndo(e.ctx, tuple(algebra_endo_apply(e, img) for img in f.images))


def algebra_endo_power(e: AlgebraEndo, k: int) -> AlgebraEndo:
    if not isinstance(k, int) or k < 1:
        raise InputError(f"endomorphism power must be a positive integer, got {k!r}")
    result: AlgebraEndo | None = None
    base = e
    while True:
        if k & 1:
            result = base if result is None else algebra_endo_compose(result, base)
        k >>= 1
        if not k:
            return result
        base = algebra_endo_compose(base, base)


def algebra_endo_inverse(e: AlgebraEndo) -> AlgebraEndo:
    """Inverse of a filtration-preserving automorphism of the truncated
    algebra, solved degree by degree from the invertible linear part."""
    ctx = e.ctx
    pinv = mat_inverse(e.linear_matrix(), ctx.p)
    if pinv is None:
        raise PreconditionError(
            "not a filtration-preserving automorphism: degree-1 part is singular"
        )
    lin_inv = AlgebraEndo.from_matrix(ctx, pinv)
    images = []
    for j in range(1, ctx.rank + 1):
        target = TruncSeries.variable(ctx, j)
        y = TruncSeries.zero(ctx)
        for m in range(1, ctx.trunc + 1):
            rem = (target - algebra_endo_apply(e, y)).homogeneous(m)
            if rem.is_zero():
                continue
            y = y + algebra_endo_apply(lin_inv, rem)
        images.append(y)
    return AlgebraEndo(ctx, tuple(images))


def kappa_theta(phi: GroupEndo) -> AlgebraEndo:
    """The comparison endomorphism: the embedded automorphism normalized by
    the inverse of its linear part.  Its linear part is the identity and its
    variable deviations encode the Johnson map in every degree at once."""
    ctx = phi.ctx
    pinv = mat_inverse(induced_matrix(phi), ctx.p)
    if pinv is None:
        raise PreconditionError("endomorphism is not an automorphism "
                                "(induced linear map is singular)")
    a = algebra_endo_of(phi)
    images = []
    for j in range(ctx.rank):
        s = TruncSeries.zero(ctx)
        for i in range(ctx.rank):
            c = pinv[i][j]
            if c:
                s = s + a.images[i].scale(c)
        images.append(s)
    return AlgebraEndo(ctx, tuple(images))


def johnson_map(phi: GroupEndo, m: int) -> JohnsonTable:
    """Level-m table of the comparison endomorphism: row j is the
    degree-(m+1) part of kappa(X_j) - X_j.  Defined for every automorphism,
    without a depth precondition."""
    ctx = phi.ctx
    _validate_level(ctx, m)
    kappa = kappa_theta(phi)
    rows = []
    for j in range(1, ctx.rank + 1):
        rows.append((kappa.images[j - 1] - TruncSeries.variable(ctx, j))
                    .homogeneous(m + 1))
    return JohnsonTable(ctx, m, tuple(rows))


def ia_to_hom(e: AlgebraEndo) -> tuple[TruncSeries, ...]:
    """For an endomorphism with identity linear part, the tuple of variable
    deviations e(X_j) - X_j (each supported in degree >= 2)."""
    ctx = e.ctx
    if e.linear_matrix() != mat_identity(ctx.rank):
        raise PreconditionError("endomorphism does not have identity linear part")
    out = []
    for j in range(1, ctx.rank + 1):
        out.append(e.images[j - 1] - TruncSeries.variable(ctx, j))
    return tuple(out)


def hom_to_ia(ctx: GroupContext, deviations: tuple[TruncSeries, ...]) -> AlgebraEndo:
    """Inverse construction of ia_to_hom."""
    if len(deviations) != ctx.rank:
        raise InputError(f"expected {ctx.rank} deviations, got {len(deviations)}")
    images = []
    for j, t in enumerate(deviations, start=1):
        d = t.min_degree()
        if d is not None and d < 2:
            raise InputError(f"deviation {j} has support below degree 2")
        images.append(TruncSeries.variable(ctx, j) + t)
    return AlgebraEndo(ctx, tuple(images))


def iterate_deviations(
    phi: GroupEndo, k: int
) -> tuple[list[TruncSeries], GroupEndo | None]:
    """Deviation series of the k-th iterate.

    The word route is taken first; when the block guard trips, the iterate is
    formed on the algebra side instead (which agrees through the truncation
    horizon).  Returns the series and the word-level iterate when available.
    """
    ctx = phi.ctx
    try:
        psi = power_endo(phi, k)
        return deviation_series(psi), psi
    except ResourceLimitError:
        pass
    a = algebra_endo_power(algebra_endo_of(phi), k)
    devs = []
    for j in range(1, ctx.rank + 1):
        xinv = series_invert(magnus_embed(generator(j), ctx))
        devs.append(series_multiply(1 + a.images[j - 1], xinv) - 1)
    return devs, None


def iterate_depth(phi: GroupEndo, k: int) -> int | str:
    if not is_automorphism(phi):
        raise PreconditionError("endomorphism is not an automorphism "
                                "(induced linear map is singular)")
    devs, _ = iterate_deviations(phi, k)
    return _depth_from_deviations(devs)
