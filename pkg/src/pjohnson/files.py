"""Text file formats: automorphism specs, defining-system tables, and
degree multisets.  All three skip blank lines and '#' comments."""

from __future__ import annotations

from .massey import DefiningSystem
from .words import InputError


def _content_lines(text: str) -> list[tuple[int, str]]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((lineno, line))
    return out


def _parse_assignments(line: str, lineno: int, allowed: set[str]) -> dict[str, int]:
    out = {}
    for part in line.split():
        if "=" not in part:
            raise InputError(f"line {lineno}: expected key=value, got {part!r}")
        key, _, value = part.partition("=")
        if key not in allowed:
            raise InputError(f"line {lineno}: unknown key {key!r}")
        try:
            out[key] = int(value)
        except ValueError:
            raise InputError(f"line {lineno}: {key} must be an integer, "
                             f"got {value!r}") from None
    return out


def parse_endo_spec(text: str) -> tuple[dict[str, int], dict[int, str]]:
    """Automorphism spec: an optional context header `p=<prime> r=<rank>
    N=<trunc>` followed by one `xj -> <word>` line per generator.

    Returns the header values found and the raw image strings by generator
    index; word parsing happens once the context is resolved.
    """
    header: dict[str, int] = {}
    images: dict[int, str] = {}
    for lineno, line in _content_lines(text):
        if "->" in line:
            lhs, _, rhs = line.partition("->")
            lhs = lhs.strip()
            if not lhs.startswith("x") or not lhs[1:].isdigit():
                raise InputError(f"line {lineno}: expected xj -> word, got {lhs!r}")
            j = int(lhs[1:])
            if j in images:
                raise InputError(f"line {lineno}: duplicate image for x{j}")
            rhs = rhs.strip()
            if not rhs:
                raise InputError(f"line {lineno}: empty image for x{j}")
            images[j] = rhs
        else:
            if images:
                raise InputError(f"line {lineno}: header after image lines")
            header.update(
                _parse_assignments(line, lineno, allowed={"p", "r", "N"})
            )
    if not images:
        raise InputError("automorphism spec contains no generator images")
    return header, images


def parse_defining_system(text: str) -> DefiningSystem:
    """Defining-system table: optional `m=<int> s=<int>` header, then one
    `a k l i value` line per stored entry.  Missing header values are
    inferred from the entries."""
    m = None
    s = None
    entries: dict[tuple[int, int, int], int] = {}
    for lineno, line in _content_lines(text):
        parts = line.split()
        if parts[0] == "a":
            if len(parts) != 5:
                raise InputError(f"line {lineno}: expected `a k l i value`")
            try:
                k, l, i, v = (int(x) for x in parts[1:])
            except ValueError:
                raise InputError(f"line {lineno}: entries must be integers") from None
            if (k, l, i) in entries:
                raise InputError(f"line {lineno}: duplicate entry a {k} {l} {i}")
            entries[(k, l, i)] = v
        else:
            got = _parse_assignments(line, lineno, allowed={"m", "s"})
            m = got.get("m", m)
            s = got.get("s", s)
    if not entries and (m is None or s is None):
        raise InputError("defining-system table is empty")
    if m is None:
        m = max(l for _, l, _ in entries) - 1
    if s is None:
        s = max(i for _, _, i in entries)
    return DefiningSystem(length=m, gens=s, values=entries)


def parse_degree_multiset(text: str) -> tuple[int, tuple[int, ...]]:
    """Degree multiset: a `p=<prime>` header line, then one integer per line."""
    p = None
    degrees: list[int] = []
    for lineno, line in _content_lines(text):
        if "=" in line:
            got = _parse_assignments(line, lineno, allowed={"p"})
            if p is not None and "p" in got:
                raise InputError(f"line {lineno}: duplicate p header")
            p = got.get("p", p)
        else:
            try:
                degrees.append(int(line))
            except ValueError:
                raise InputError(f"line {lineno}: expected an integer degree, "
                                 f"got {line!r}") from None
    if p is None:
        raise InputError("degree multiset is missing its p=<prime> header")
    return p, tuple(degrees)
