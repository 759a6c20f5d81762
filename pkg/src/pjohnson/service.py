"""Request/response models and handlers for every operation exposed by the
HTTP service and the command line.  Handlers are plain functions from
request model to response model so both surfaces share one code path."""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, Field, model_validator

from . import autom, iwasawa, magnus, massey, words
from .words import GroupContext, GroupEndo, InputError


class ContextModel(BaseModel):
    p: int = 3
    r: int = 2
    N: int = 6

    def to_context(self) -> GroupContext:
        return GroupContext(self.p, self.r, self.N)


class EndoModel(BaseModel):
    """Either explicit generator images or a conjugator for an inner
    automorphism."""

    images: Optional[list[str]] = None
    inner: Optional[str] = None

    @model_validator(mode="after")
    def _exactly_one(self):
        if (self.images is None) == (self.inner is None):
            raise ValueError("provide exactly one of images or inner")
        return self

    def to_endo(self, ctx: GroupContext) -> GroupEndo:
        if self.inner is not None:
            return GroupEndo.inner(ctx, words.parse_word(self.inner, ctx))
        if len(self.images) != ctx.rank:
            raise InputError(
                f"expected {ctx.rank} generator images, got {len(self.images)}"
            )
        return GroupEndo(
            ctx, tuple(words.parse_word(text, ctx) for text in self.images)
        )


class TermModel(BaseModel):
    monomial: str
    coefficient: int


class ExpandRequest(BaseModel):
    ctx: ContextModel = Field(default_factory=ContextModel)
    word: str


class ExpandResponse(BaseModel):
    series: str
    terms: list[TermModel]


def handle_expand(req: ExpandRequest) -> ExpandResponse:
    ctx = req.ctx.to_context()
    s = magnus.magnus_embed(words.parse_word(req.word, ctx), ctx)
    terms = [
        TermModel(monomial=magnus.monomial_label(m), coefficient=c)
        for m, c in s.terms()
    ]
    return ExpandResponse(series=str(s), terms=terms)


class EpsRequest(BaseModel):
    ctx: ContextModel = Field(default_factory=ContextModel)
    mono: list[int]
    word: str


class ScalarResponse(BaseModel):
    value: int


def handle_eps(req: EpsRequest) -> ScalarResponse:
    ctx = req.ctx.to_context()
    w = words.parse_word(req.word, ctx)
    return ScalarResponse(value=magnus.magnus_coefficient(tuple(req.mono), w, ctx))


class DegreeRequest(BaseModel):
    ctx: ContextModel = Field(default_factory=ContextModel)
    word: str


class DegreeResponse(BaseModel):
    kind: str  # "degree" | "identity" | "exceeds"
    degree: Optional[int] = None
    horizon: int


def handle_degree(req: DegreeRequest) -> DegreeResponse:
    ctx = req.ctx.to_context()
    deg = magnus.zassenhaus_degree(words.parse_word(req.word, ctx), ctx)
    if deg == magnus.IDENTITY:
        return DegreeResponse(kind="identity", horizon=ctx.trunc)
    if deg == magnus.EXCEEDS:
        return DegreeResponse(kind="exceeds", horizon=ctx.trunc)
    return DegreeResponse(kind="degree", degree=deg, horizon=ctx.trunc)


class DepthRequest(BaseModel):
    ctx: ContextModel = Field(default_factory=ContextModel)
    endo: EndoModel


class DepthResponse(BaseModel):
    depth: Optional[int] = None  # None when beyond the horizon
    horizon: int


def handle_depth(req: DepthRequest) -> DepthResponse:
    ctx = req.ctx.to_context()
    d = autom.aj_depth(req.endo.to_endo(ctx))
    return DepthResponse(
        depth=None if d == magnus.EXCEEDS else d, horizon=ctx.trunc - 1
    )


class TableRowModel(BaseModel):
    generator: str
    monomial: str
    value: int


class TableRequest(BaseModel):
    ctx: ContextModel = Field(default_factory=ContextModel)
    endo: EndoModel
    m: int


class TableResponse(BaseModel):
    p: int
    r: int
    N: int
    m: int
    rows: list[TableRowModel]


def _table_response(table: autom.JohnsonTable) -> TableResponse:
    ctx = table.ctx
    rows = [
        TableRowModel(
            generator=f"X{j}",
            monomial=magnus.format_monomial(mono, ctx.rank),
            value=c,
        )
        for j, mono, c in table.entries()
    ]
    return TableResponse(p=ctx.p, r=ctx.rank, N=ctx.trunc, m=table.level, rows=rows)


def handle_johnson(req: TableRequest) -> TableResponse:
    ctx = req.ctx.to_context()
    return _table_response(autom.johnson_hom(req.endo.to_endo(ctx), req.m))


def handle_jmap(req: TableRequest) -> TableResponse:
    ctx = req.ctx.to_context()
    return _table_response(autom.johnson_map(req.endo.to_endo(ctx), req.m))


class SystemEntryModel(BaseModel):
    k: int
    l: int
    i: int
    value: int


class SystemModel(BaseModel):
    length: int
    gens: int
    entries: list[SystemEntryModel] = Field(default_factory=list)

    def to_system(self) -> massey.DefiningSystem:
        values: dict[tuple[int, int, int], int] = {}
        for e in self.entries:
            key = (e.k, e.l, e.i)
            if key in values:
                raise InputError(f"duplicate entry a {e.k} {e.l} {e.i}")
            values[key] = e.value
        return massey.DefiningSystem(length=self.length, gens=self.gens,
                                     values=values)


class MasseyRequest(BaseModel):
    ctx: ContextModel = Field(default_factory=ContextModel)
    system: SystemModel
    relator: str


def handle_massey(req: MasseyRequest) -> ScalarResponse:
    ctx = req.ctx.to_context()
    ds = req.system.to_system()
    relator = words.parse_word(req.relator, ctx, allow_aux=True)
    return ScalarResponse(value=massey.massey_eval(ds, relator, ctx))


class RelatorsRequest(BaseModel):
    ctx: ContextModel = Field(default_factory=ContextModel)
    endo: EndoModel
    d: int = 0


class RelatorsResponse(BaseModel):
    d: int
    relators: list[str]
    reduced: list[str]


def handle_relators(req: RelatorsRequest) -> RelatorsResponse:
    ctx = req.ctx.to_context()
    rs = massey.build_relators(req.endo.to_endo(ctx), req.d)
    return RelatorsResponse(
        d=rs.d,
        relators=[str(w) for w in rs.relators],
        reduced=[str(w) for w in rs.reduced],
    )


class CheckRequest(BaseModel):
    ctx: ContextModel = Field(default_factory=ContextModel)
    endo: EndoModel
    d: int = 0


class CheckReportModel(BaseModel):
    d: int
    j: int
    mono: str
    lhs: int
    rhs: int
    equal: bool


class CheckResponse(BaseModel):
    d: int
    level: int
    all_equal: bool
    reports: list[CheckReportModel]


def handle_check522(req: CheckRequest) -> CheckResponse:
    ctx = req.ctx.to_context()
    reports = massey.theorem_522_grid(req.endo.to_endo(ctx), req.d)
    models = [CheckReportModel(**r.as_dict(ctx.rank)) for r in reports]
    return CheckResponse(
        d=req.d,
        level=reports[0].level if reports else 0,
        all_equal=all(r.equal for r in reports),
        reports=models,
    )


class PeriodRequest(BaseModel):
    p: int = 3
    degrees: list[int]


class PeriodResponse(BaseModel):
    period: int


def handle_period(req: PeriodRequest) -> PeriodResponse:
    desc = iwasawa.LambdaModuleDesc(req.p, tuple(req.degrees))
    return PeriodResponse(period=iwasawa.p_period(desc))


class SequencesRequest(BaseModel):
    ctx: ContextModel = Field(default_factory=ContextModel)
    endo: EndoModel
    m_max: Optional[int] = None
    d_max: int = 4


class SequenceEntryDM(BaseModel):
    m: int
    d: Optional[int] = None  # None when not found within d_max


class SequenceEntryMD(BaseModel):
    d: int
    m: Optional[int] = None  # None when the depth exceeds the horizon


class SequencesResponse(BaseModel):
    m_max: int
    d_max: int
    horizon: int
    d_of_m: list[SequenceEntryDM]
    m_of_d: list[SequenceEntryMD]


def handle_sequences(req: SequencesRequest) -> SequencesResponse:
    ctx = req.ctx.to_context()
    seq = iwasawa.monodromy_sequences(
        req.endo.to_endo(ctx), m_max=req.m_max, d_max=req.d_max
    )
    return SequencesResponse(
        m_max=seq.m_max,
        d_max=seq.d_max,
        horizon=ctx.trunc - 1,
        d_of_m=[
            SequenceEntryDM(m=m, d=d)
            for m, d in enumerate(seq.d_of_m, start=1)
        ],
        m_of_d=[
            SequenceEntryMD(d=d, m=None if depth == magnus.EXCEEDS else depth)
            for d, depth in enumerate(seq.m_of_d)
        ],
    )
