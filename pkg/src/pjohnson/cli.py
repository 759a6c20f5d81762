"""Command-line client.

Each verb builds the same request model the HTTP service accepts and either
calls the handler in process (the default) or posts it to a running server
when --server is given.  Output is deterministic: byte-identical runs for
identical inputs.

Exit codes: 0 success, 2 invalid input or violated precondition, 3 resource
guard tripped.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import pydantic

from . import files, magnus, service
from .words import EngineError, InputError, ResourceLimitError

DEFAULTS = {"p": 3, "r": 2, "N": 6}

_LOCAL_HANDLERS = {
    "expand": service.handle_expand,
    "eps": service.handle_eps,
    "degree": service.handle_degree,
    "depth": service.handle_depth,
    "johnson": service.handle_johnson,
    "jmap": service.handle_jmap,
    "massey": service.handle_massey,
    "relators": service.handle_relators,
    "check522": service.handle_check522,
    "period": service.handle_period,
    "sequences": service.handle_sequences,
}

_RESPONSE_MODELS = {
    "expand": service.ExpandResponse,
    "eps": service.ScalarResponse,
    "degree": service.DegreeResponse,
    "depth": service.DepthResponse,
    "johnson": service.TableResponse,
    "jmap": service.TableResponse,
    "massey": service.ScalarResponse,
    "relators": service.RelatorsResponse,
    "check522": service.CheckResponse,
    "period": service.PeriodResponse,
    "sequences": service.SequencesResponse,
}


def _post(server: str, verb: str, request) -> "pydantic.BaseModel":
    import httpx

    url = server.rstrip("/") + "/v1/" + verb
    resp = httpx.post(url, json=request.model_dump(), timeout=300.0)
    if resp.status_code != 200:
        try:
            payload = resp.json()
        except ValueError:
            payload = {"detail": resp.text, "code": "user-error"}
        detail = payload.get("detail", "request failed")
        if not isinstance(detail, str):
            detail = json.dumps(detail)
        if payload.get("code") == "resource-limit":
            raise ResourceLimitError(detail)
        raise InputError(detail)
    return _RESPONSE_MODELS[verb].model_validate(resp.json())


def _run(verb: str, request, server: str | None):
    if server:
        return _post(server, verb, request)
    return _LOCAL_HANDLERS[verb](request)


def _context_model(args, header: dict[str, int] | None = None) -> service.ContextModel:
    header = header or {}
    values = {}
    for key in ("p", "r", "N"):
        flag = getattr(args, key)
        values[key] = flag if flag is not None else header.get(key, DEFAULTS[key])
    return service.ContextModel(**values)


def _endo_model(args) -> tuple[service.EndoModel, dict[str, int]]:
    phi = getattr(args, "phi", None)
    inner = getattr(args, "inner", None)
    if (phi is None) == (inner is None):
        raise InputError("provide exactly one of --phi <file> or --inner <word>")
    if inner is not None:
        return service.EndoModel(inner=inner), {}
    header, images = files.parse_endo_spec(Path(phi).read_text())
    rank = getattr(args, "r", None) or header.get("r", DEFAULTS["r"])
    missing = [j for j in range(1, rank + 1) if j not in images]
    if missing:
        raise InputError(
            "automorphism spec is missing images for "
            + ", ".join(f"x{j}" for j in missing)
        )
    extra = [j for j in images if j > rank]
    if extra:
        raise InputError(
            "automorphism spec has images beyond the rank: "
            + ", ".join(f"x{j}" for j in sorted(extra))
        )
    ordered = [images[j] for j in range(1, rank + 1)]
    return service.EndoModel(images=ordered), header


def _parse_degrees(value: str) -> tuple[int | None, list[int]]:
    """--degrees takes a comma list of integers or a degree-multiset file."""
    path = Path(value)
    if path.is_file():
        p, degrees = files.parse_degree_multiset(path.read_text())
        return p, list(degrees)
    try:
        return None, [int(part) for part in value.split(",") if part.strip()]
    except ValueError:
        raise InputError(
            f"--degrees expects a comma-separated integer list or a file, "
            f"got {value!r}"
        ) from None


def _print(*lines: str) -> None:
    for line in lines:
        sys.stdout.write(line + "\n")


def _table_lines(resp: service.TableResponse) -> list[str]:
    lines = [f"# p={resp.p} r={resp.r} N={resp.N} m={resp.m}"]
    for row in resp.rows:
        lines.append(f"{row.generator}\t{row.monomial}\t{row.value}")
    return lines


def _emit_json(model) -> None:
    _print(model.model_dump_json())


def _cmd_expand(args, server):
    req = service.ExpandRequest(ctx=_context_model(args), word=args.word)
    resp = _run("expand", req, server)
    if args.json:
        _emit_json(resp)
    else:
        _print(resp.series)


def _cmd_eps(args, server):
    ctx = _context_model(args)
    mono = magnus.parse_monomial(args.mono, ctx.r)
    req = service.EpsRequest(ctx=ctx, mono=list(mono), word=args.word)
    resp = _run("eps", req, server)
    if args.json:
        _emit_json(resp)
    else:
        _print(str(resp.value))


def _cmd_degree(args, server):
    req = service.DegreeRequest(ctx=_context_model(args), word=args.word)
    resp = _run("degree", req, server)
    if args.json:
        _emit_json(resp)
    elif resp.kind == "identity":
        _print("identity")
    elif resp.kind == "exceeds":
        _print(f"exceeds {resp.horizon}")
    else:
        _print(str(resp.degree))


def _cmd_depth(args, server):
    endo, header = _endo_model(args)
    req = service.DepthRequest(ctx=_context_model(args, header), endo=endo)
    resp = _run("depth", req, server)
    if args.json:
        _emit_json(resp)
    elif resp.depth is None:
        _print(f"exceeds {resp.horizon}")
    else:
        _print(str(resp.depth))


def _cmd_table(verb: str):
    def run(args, server):
        endo, header = _endo_model(args)
        if args.m is None:
            raise InputError("--m <level> is required")
        req = service.TableRequest(
            ctx=_context_model(args, header), endo=endo, m=args.m
        )
        resp = _run(verb, req, server)
        if args.json:
            for row in resp.rows:
                _print(row.model_dump_json())
        else:
            _print(*_table_lines(resp))

    return run


def _cmd_massey(args, server):
    ctx = _context_model(args)
    ds = files.parse_defining_system(Path(args.ds).read_text())
    system = service.SystemModel(
        length=ds.length,
        gens=ds.gens,
        entries=[
            service.SystemEntryModel(k=k, l=l, i=i, value=v)
            for (k, l, i), v in sorted(ds.values.items())
        ],
    )
    req = service.MasseyRequest(ctx=ctx, system=system, relator=args.relator)
    resp = _run("massey", req, server)
    if args.json:
        _emit_json(resp)
    else:
        _print(str(resp.value))


def _cmd_relators(args, server):
    endo, header = _endo_model(args)
    ctx = _context_model(args, header)
    req = service.RelatorsRequest(ctx=ctx, endo=endo, d=args.d)
    resp = _run("relators", req, server)
    if args.json:
        _emit_json(resp)
        return
    lines = [f"# p={ctx.p} r={ctx.r} N={ctx.N} d={resp.d}"]
    for j, text in enumerate(resp.relators, start=1):
        lines.append(f"R{j}\t{text}")
    for j, text in enumerate(resp.reduced, start=1):
        lines.append(f"R'{j}\t{text}")
    _print(*lines)


def _cmd_check522(args, server):
    endo, header = _endo_model(args)
    req = service.CheckRequest(
        ctx=_context_model(args, header), endo=endo, d=args.d
    )
    resp = _run("check522", req, server)
    for report in resp.reports:
        _print(report.model_dump_json())


def _cmd_period(args, server):
    if args.degrees is None:
        raise InputError("--degrees <list-or-file> is required")
    file_p, degrees = _parse_degrees(args.degrees)
    p = args.p if args.p is not None else (file_p or DEFAULTS["p"])
    req = service.PeriodRequest(p=p, degrees=degrees)
    resp = _run("period", req, server)
    if args.json:
        _emit_json(resp)
    else:
        _print(str(resp.period))


def _cmd_sequences(args, server):
    endo, header = _endo_model(args)
    ctx = _context_model(args, header)
    req = service.SequencesRequest(
        ctx=ctx, endo=endo, m_max=args.m, d_max=args.d if args.d is not None else 4
    )
    resp = _run("sequences", req, server)
    if args.json:
        _emit_json(resp)
        return
    lines = [
        f"# p={ctx.p} r={ctx.r} N={ctx.N} mMax={resp.m_max} dMax={resp.d_max}",
        "# m\td(m)",
    ]
    for entry in resp.d_of_m:
        cell = f"not found <= {resp.d_max}" if entry.d is None else str(entry.d)
        lines.append(f"{entry.m}\t{cell}")
    lines.append("# d\tm(d)")
    for entry in resp.m_of_d:
        cell = f"exceeds {resp.horizon}" if entry.m is None else str(entry.m)
        lines.append(f"{entry.d}\t{cell}")
    _print(*lines)


def _add_common(sub, endo=False, level=False, iterate=False):
    sub.add_argument("--p", type=int, default=None, help="prime (default 3)")
    sub.add_argument("--r", type=int, default=None, help="free rank (default 2)")
    sub.add_argument("--N", type=int, default=None,
                     help="truncation order (default 6)")
    sub.add_argument("--json", action="store_true", help="emit JSON output")
    sub.add_argument("--server", default=None,
                     help="base URL of a running service; default is in-process")
    if endo:
        sub.add_argument("--phi", default=None,
                         help="automorphism spec file (xj -> word lines)")
        sub.add_argument("--inner", default=None,
                         help="conjugator word for an inner automorphism")
    if level:
        sub.add_argument("--m", type=int, default=None, help="filtration level")
    if iterate:
        sub.add_argument("--d", type=int, default=0,
                         help="iterate exponent d (power p^d)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pjohnson",
        description="Free pro-p group engine: series expansions, filtration "
        "degrees, Johnson tables, Massey values, period dynamics.",
    )
    subs = parser.add_subparsers(dest="verb", required=True)

    s = subs.add_parser("expand", help="embedded series of a word")
    _add_common(s)
    s.add_argument("word")
    s.set_defaults(run=_cmd_expand)

    s = subs.add_parser("eps", help="one series coefficient of a word")
    _add_common(s)
    s.add_argument("mono", help="monomial, e.g. 12 or 1,2")
    s.add_argument("word")
    s.set_defaults(run=_cmd_eps)

    s = subs.add_parser("degree", help="filtration degree of a word")
    _add_common(s)
    s.add_argument("word")
    s.set_defaults(run=_cmd_degree)

    s = subs.add_parser("depth", help="depth of an automorphism's action")
    _add_common(s, endo=True)
    s.set_defaults(run=_cmd_depth)

    s = subs.add_parser("johnson", help="level-m Johnson table (needs depth >= m)")
    _add_common(s, endo=True, level=True)
    s.set_defaults(run=_cmd_table("johnson"))

    s = subs.add_parser("jmap", help="level-m table of the comparison map")
    _add_common(s, endo=True, level=True)
    s.set_defaults(run=_cmd_table("jmap"))

    s = subs.add_parser("massey", help="value of a defining system on a relator")
    _add_common(s)
    s.add_argument("--ds", required=True, help="defining-system table file")
    s.add_argument("relator")
    s.set_defaults(run=_cmd_massey)

    s = subs.add_parser("relators", help="relator words of the p^d-th iterate")
    _add_common(s, endo=True, iterate=True)
    s.set_defaults(run=_cmd_relators)

    s = subs.add_parser("check522",
                        help="coefficient comparison grid for the p^d-th iterate")
    _add_common(s, endo=True, iterate=True)
    s.set_defaults(run=_cmd_check522)

    s = subs.add_parser("period", help="p-period of a degree multiset")
    _add_common(s)
    s.add_argument("--degrees", default=None,
                   help="comma-separated degrees or a degree-multiset file")
    s.set_defaults(run=_cmd_period)

    s = subs.add_parser("sequences", help="depth dynamics of p-power iterates")
    _add_common(s, endo=True, level=True)
    s.add_argument("--d", type=int, default=None, help="largest exponent d "
                   "(default 4)")
    s.set_defaults(run=_cmd_sequences)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        args.run(args, args.server)
    except ResourceLimitError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 3
    except (InputError, pydantic.ValidationError) as exc:
        message = str(exc).replace("\n", "; ")
        sys.stderr.write(f"error: {message}\n")
        return 2
    except EngineError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
