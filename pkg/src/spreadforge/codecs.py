"""Bit-exact text serialization of codes and verification reports.

A code file is line oriented and diff friendly: `#`-prefixed header lines
carrying one key=value pair each, then one member per line.  Members are
written as base-p digit strings (tower elements flattened level-major,
little-endian), rows joined by `;`, and the body is sorted by those digit
strings, so a given code has exactly one on-disk form.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from .construction import CompletionChoice
from .errors import (
    DuplicateMember,
    MalformedHeader,
    NonCanonicalMember,
    VersionUnsupported,
)
from .gftower import FieldTower, field_build
from .subspaces import Line, Matrix, Subspace, canonical_line, canonical_subspace
from .verify import VerificationReport

FORMAT_NAME = "spreadforge-code"
FORMAT_VERSION = 1

KIND_LINES = "lines"
KIND_SUBSPACES = "subspaces"
COMPONENTS = ("Ci", "Ai", "Bj", "spread", "oracle", "external")

_ALPHABET = "0123456789abcdefghijklmnopqrstuvwxyz"
_DIGIT_VALUE = {ch: i for i, ch in enumerate(_ALPHABET)}


@dataclass(frozen=True)
class CodeHeader:
    """Identity of a code file: parameters, kind, and provenance tags."""

    p: int
    e: int
    k: int
    t: int
    kind: str
    component: str
    i: int | None = None
    j: int | None = None
    bm: str | None = None

    def __post_init__(self):
        if self.kind not in (KIND_LINES, KIND_SUBSPACES):
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.component not in COMPONENTS:
            raise ValueError(f"unknown component {self.component!r}")
        if self.p > len(_ALPHABET):
            raise ValueError(f"characteristic {self.p} exceeds the digit alphabet")

    @property
    def q(self) -> int:
        return self.p**self.e

    @property
    def s(self) -> int:
        return 2 * self.t

    @property
    def n(self) -> int:
        return self.k * self.s

    @property
    def r(self) -> int:
        qk = self.q**self.k
        return (qk**self.t - 1) // (qk - 1)

    def tower(self) -> FieldTower:
        return field_build(self.p, self.e, self.k, self.t)


def completion_fingerprint(choice: CompletionChoice) -> str:
    """Short stable digest of the chosen completion blocks."""
    text = "|".join(_matrix_record(block) for block in choice.blocks)
    return hashlib.sha256(text.encode("ascii")).hexdigest()[:16]


# -- member records --------------------------------------------------------------


def _row_record(row) -> str:
    digits = []
    for entry in row:
        digits.extend(entry.digits())
    return "".join(_ALPHABET[d] for d in digits)


def _matrix_record(m: Matrix) -> str:
    return ";".join(_row_record(row) for row in m.rows)


def member_record(member) -> str:
    """Canonical one-line text form of a Line or Subspace."""
    if isinstance(member, Line):
        return _row_record(member.generator)
    if isinstance(member, Subspace):
        return _matrix_record(member.matrix)
    raise TypeError(f"cannot serialize {type(member).__name__}")


def _parse_row(tower: FieldTower, level: int, width: int, text: str, lineno: int):
    span = tower.digit_length(level)
    if len(text) != width * span:
        raise MalformedHeader(
            f"line {lineno}: row has {len(text)} digits, expected {width * span}"
        )
    entries = []
    for pos in range(0, len(text), span):
        digits = []
        for ch in text[pos:pos + span]:
            value = _DIGIT_VALUE.get(ch)
            if value is None or value >= tower.p:
                raise MalformedHeader(f"line {lineno}: invalid digit {ch!r}")
            digits.append(value)
        entries.append(tower.element_from_digits(level, digits))
    return tuple(entries)


def _parse_member(header: CodeHeader, tower: FieldTower, text: str, lineno: int):
    if header.kind == KIND_LINES:
        if ";" in text:
            raise MalformedHeader(f"line {lineno}: line records must be a single row")
        gen = _parse_row(tower, 2, header.s, text, lineno)
        try:
            line = canonical_line(gen)
        except Exception as exc:
            raise NonCanonicalMember(f"line {lineno}: {exc}") from exc
        if line.generator != gen:
            raise NonCanonicalMember(f"line {lineno}: generator is not normalized")
        return line
    rows = text.split(";")
    if len(rows) != header.k:
        raise MalformedHeader(f"line {lineno}: expected {header.k} rows, found {len(rows)}")
    parsed = [_parse_row(tower, 1, header.n, row, lineno) for row in rows]
    matrix = Matrix(parsed)
    try:
        sub = canonical_subspace(matrix)
    except Exception as exc:
        raise NonCanonicalMember(f"line {lineno}: {exc}") from exc
    if sub.matrix != matrix:
        raise NonCanonicalMember(f"line {lineno}: basis is not in reduced echelon form")
    return sub


# -- whole files -------------------------------------------------------------------


def write_code(code, header: CodeHeader) -> str:
    """Serialize a code to its unique text form."""
    for member in code:
        is_line = isinstance(member, Line)
        if is_line != (header.kind == KIND_LINES):
            raise ValueError(f"member kind does not match header kind {header.kind!r}")
        break
    records = sorted(member_record(m) for m in code)
    lines = [f"# {FORMAT_NAME} v{FORMAT_VERSION}"]
    for key in ("p", "e", "k", "t"):
        lines.append(f"# {key}={getattr(header, key)}")
    for key in ("q", "s", "n", "r"):
        lines.append(f"# {key}={getattr(header, key)}")
    lines.append(f"# kind={header.kind}")
    lines.append(f"# component={header.component}")
    if header.i is not None:
        lines.append(f"# i={header.i}")
    if header.j is not None:
        lines.append(f"# j={header.j}")
    if header.bm is not None:
        lines.append(f"# bm={header.bm}")
    lines.append(f"# members={len(records)}")
    lines.extend(records)
    return "\n".join(lines) + "\n"


def _parse_header_lines(lines: list[str]) -> tuple[dict, int]:
    if not lines:
        raise MalformedHeader("empty stream")
    magic = lines[0].strip()
    if not magic.startswith(f"# {FORMAT_NAME} "):
        raise MalformedHeader(f"line 1: expected '# {FORMAT_NAME} v<N>' magic")
    version = magic[len(f"# {FORMAT_NAME} "):]
    if version != f"v{FORMAT_VERSION}":
        raise VersionUnsupported(f"unsupported format version {version!r}")
    fields: dict[str, str] = {}
    idx = 1
    while idx < len(lines) and lines[idx].startswith("#"):
        body = lines[idx][1:].strip()
        if "=" not in body:
            raise MalformedHeader(f"line {idx + 1}: expected key=value, got {body!r}")
        key, _, value = body.partition("=")
        if key in fields:
            raise MalformedHeader(f"line {idx + 1}: duplicate header key {key!r}")
        fields[key] = value
        idx += 1
    return fields, idx


def read_code(text: str) -> tuple[CodeHeader, frozenset]:
    """Parse a code file; inverse of write_code on canonical input."""
    lines = text.splitlines()
    fields, body_start = _parse_header_lines(lines)

    def intfield(key: str) -> int:
        if key not in fields:
            raise MalformedHeader(f"missing header key {key!r}")
        try:
            return int(fields[key])
        except ValueError:
            raise MalformedHeader(f"header key {key!r} is not an integer") from None

    p, e, k, t = (intfield(x) for x in ("p", "e", "k", "t"))
    kind = fields.get("kind")
    component = fields.get("component")
    if kind is None or component is None:
        raise MalformedHeader("missing 'kind' or 'component' header key")
    try:
        header = CodeHeader(
            p=p, e=e, k=k, t=t, kind=kind, component=component,
            i=int(fields["i"]) if "i" in fields else None,
            j=int(fields["j"]) if "j" in fields else None,
            bm=fields.get("bm"),
        )
    except ValueError as exc:
        raise MalformedHeader(str(exc)) from None
    if header.component in ("Ci", "Ai", "spread") and header.i is None:
        raise MalformedHeader(f"component {header.component!r} requires an 'i' tag")
    if header.component in ("Bj", "spread") and header.j is None:
        raise MalformedHeader(f"component {header.component!r} requires a 'j' tag")
    for key in ("q", "s", "n", "r"):
        if intfield(key) != getattr(header, key):
            raise MalformedHeader(
                f"derived key {key}={fields[key]} inconsistent with parameters"
            )
    members = intfield("members")
    body = lines[body_start:]
    if len(body) != members:
        raise MalformedHeader(
            f"line {body_start + len(body) + 1}: body has {len(body)} records, header says {members}"
        )
    tower = header.tower()
    out = []
    seen: set[str] = set()
    prev: str | None = None
    for offset, record in enumerate(body):
        lineno = body_start + offset + 1
        if record in seen:
            raise DuplicateMember(f"line {lineno}: duplicate member")
        seen.add(record)
        if prev is not None and record < prev:
            raise NonCanonicalMember(f"line {lineno}: members out of canonical order")
        prev = record
        out.append(_parse_member(header, tower, record, lineno))
    return header, frozenset(out)


# -- verification reports -------------------------------------------------------------


def report_text(report: VerificationReport) -> str:
    """Flat key=value block, one field per line."""
    lines = [f"{key}={value}" for key, value in report.as_dict().items()]
    return "\n".join(lines) + "\n"


def report_json(report: VerificationReport) -> str:
    return json.dumps(report.as_dict(), indent=2, sort_keys=True) + "\n"
