"""Line-oriented tensor documents.

Grammar::

    document := { line }
    line     := [ header | entry ] [ "#" comment ]
    header   := "tensor" field { field }      (exactly once, before any entry)
    field    := "m=" int | "n=" int | "det=" real | "name=" token | "ref=" real
    entry    := "a" int{m} "=" real           (indices 1-based, non-decreasing)

``m`` and ``n`` are required. ``det`` supplies an external determinant and is
only accepted for ``n > 2``. ``ref`` is a published bound displayed next to
the recomputed ones.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .tensor import SymmetricTensor, TensorError, from_unique_entries

__all__ = [
    "ParseError",
    "ValidationError",
    "TensorDocument",
    "parse_tensor_file",
    "load",
    "serialize",
]

_REAL = r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_INT = re.compile(r"\d+")
_FIELD = re.compile(r"(m|n|det|name|ref)=(\S+)")
_REAL_RE = re.compile(_REAL)


class ParseError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class ValidationError(ValueError):
    pass


@dataclass(frozen=True)
class TensorDocument:
    order: int
    dimension: int
    entries: tuple[tuple[tuple[int, ...], str], ...]
    name: str | None = None
    external_determinant: str | None = None
    reference: str | None = None
    _header_order: tuple[str, ...] = field(default=("m", "n"), repr=False, compare=False)

    @property
    def values(self) -> list[tuple[tuple[int, ...], float]]:
        return [(idx, float(v)) for idx, v in self.entries]

    @property
    def determinant(self) -> float | None:
        return None if self.external_determinant is None else float(self.external_determinant)

    @property
    def reference_value(self) -> float | None:
        return None if self.reference is None else float(self.reference)

    def to_tensor(self) -> SymmetricTensor:
        return from_unique_entries(self.order, self.dimension, self.values)


def _real(token: str, lineno: int, what: str) -> str:
    if not _REAL_RE.fullmatch(token):
        raise ParseError(lineno, f"{what} {token!r} is not a decimal number")
    return token


def _parse_header(tokens: list[str], lineno: int) -> dict:
    fields: dict[str, str] = {}
    for tok in tokens[1:]:
        match = _FIELD.fullmatch(tok)
        if not match:
            raise ParseError(lineno, f"unrecognised header field {tok!r}")
        key, value = match.groups()
        if key in fields:
            raise ParseError(lineno, f"header field {key!r} given twice")
        if key in ("m", "n") and not _INT.fullmatch(value):
            raise ParseError(lineno, f"{key} must be a positive integer, got {value!r}")
        if key in ("det", "ref"):
            _real(value, lineno, key)
        fields[key] = value
    for key in ("m", "n"):
        if key not in fields:
            raise ParseError(lineno, f"header is missing {key}=")
    fields["_order"] = tuple(k for k in (t.split("=", 1)[0] for t in tokens[1:]))
    return fields


def parse_tensor_file(text: str) -> TensorDocument:
    """Parse a tensor document.

    Raises
    ------
    ParseError
        Malformed syntax; the message carries the 1-based line number.
    ValidationError
        Well-formed but invalid content (bad index, duplicate orbit, a
        ``det`` field for ``n <= 2``); the message names the index.
    """
    header = None
    entries: list[tuple[tuple[int, ...], str]] = []
    seen: dict[tuple[int, ...], int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] == "tensor":
            if header is not None:
                raise ParseError(lineno, "second header line")
            if entries:
                raise ParseError(lineno, "header must precede entries")
            header = _parse_header(tokens, lineno)
            continue
        if tokens[0] != "a":
            raise ParseError(lineno, f"expected 'tensor' or 'a', got {tokens[0]!r}")
        if header is None:
            raise ParseError(lineno, "entry before header")
        lhs, eq, rhs = line[1:].partition("=")
        if not eq:
            raise ParseError(lineno, "entry is missing '='")
        idx_tokens = lhs.split()
        value_tokens = rhs.split()
        if len(value_tokens) != 1:
            raise ParseError(lineno, "entry needs exactly one value after '='")
        if not all(_INT.fullmatch(tok) for tok in idx_tokens):
            raise ParseError(lineno, f"indices must be positive integers: {lhs.strip()!r}")
        m = int(header["m"])
        if len(idx_tokens) != m:
            raise ParseError(lineno, f"entry has {len(idx_tokens)} indices, expected {m}")
        index = tuple(int(tok) for tok in idx_tokens)
        value = _real(value_tokens[0], lineno, "value")
        n = int(header["n"])
        if any(i < 1 or i > n for i in index):
            raise ValidationError(f"index {index} (line {lineno}) out of range [1, {n}]")
        if list(index) != sorted(index):
            raise ValidationError(f"index {index} (line {lineno}) is not canonical (non-decreasing)")
        if index in seen:
            raise ValidationError(f"duplicate canonical index {index} (lines {seen[index]} and {lineno})")
        seen[index] = lineno
        entries.append((index, value))
    if header is None:
        raise ParseError(max(1, len(text.splitlines())), "no 'tensor' header line")
    m, n = int(header["m"]), int(header["n"])
    if m < 2:
        raise ValidationError(f"order m={m} must be at least 2")
    if n < 1:
        raise ValidationError(f"dimension n={n} must be at least 1")
    if "det" in header and n <= 2:
        raise ValidationError("external det= is only accepted for dimension n > 2")
    doc = TensorDocument(
        m,
        n,
        tuple(entries),
        header.get("name"),
        header.get("det"),
        header.get("ref"),
        header["_order"],
    )
    try:
        doc.to_tensor()
    except TensorError as exc:
        raise ValidationError(str(exc)) from exc
    return doc


def load(path) -> TensorDocument:
    with open(path, encoding="utf-8") as fh:
        return parse_tensor_file(fh.read())


def serialize(doc: TensorDocument) -> str:
    values = {
        "m": str(doc.order),
        "n": str(doc.dimension),
        "det": doc.external_determinant,
        "name": doc.name,
        "ref": doc.reference,
    }
    keys = list(doc._header_order) + [k for k in values if k not in doc._header_order]
    header = " ".join(f"{k}={values[k]}" for k in keys if values[k] is not None)
    lines = [f"tensor {header}"]
    for index, value in doc.entries:
        lines.append("a " + " ".join(str(i) for i in index) + " = " + value)
    return "\n".join(lines) + "\n"
