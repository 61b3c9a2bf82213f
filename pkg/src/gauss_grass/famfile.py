"""Line-oriented text format for families and parametrized varieties.

Grammar::

    file    := (line '\\n')*
    line    := blank | comment | key '=' value
    comment := '#' any*
    key     := 'field' | 'ambient' | 'plane_dim' | 'params' | 'f' | 'coords'
             | 'perm' | 'label' | 'expect.' name
    value   := scalar | list
    list    := '[' (item (',' item)*)? ']'
    item    := expr | list

A value may continue onto following lines while its brackets are open.
``f`` is the (m+1) x (N-m) chart grid.  A variety is given with ``coords``
instead (N+1 expressions, the first equal to 1); it loads as the m = 0
family.  ``expect.*`` keys hold expected values for ``verify``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from pathlib import Path

from gauss_grass.algebra.field import FieldSpec
from gauss_grass.algebra.parse import ratfunc_parse
from gauss_grass.algebra.poly import Ring
from gauss_grass.charts import ChartFamily, ProjParam
from gauss_grass.errors import DimensionError, FieldError, ParseError, SchemaError

KEYS = ("label", "field", "ambient", "plane_dim", "params", "f", "coords", "perm")


def parse_list(text: str) -> list:
    """Nested bracketed list; leaves are stripped strings."""
    pos = 0

    def skip_ws():
        nonlocal pos
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def parse_item():
        nonlocal pos
        skip_ws()
        if pos < len(text) and text[pos] == "[":
            pos += 1
            items = []
            skip_ws()
            if pos < len(text) and text[pos] == "]":
                pos += 1
                return items
            while True:
                items.append(parse_item())
                skip_ws()
                if pos >= len(text):
                    raise ParseError("unterminated list", text, pos)
                if text[pos] == ",":
                    pos += 1
                elif text[pos] == "]":
                    pos += 1
                    return items
                else:
                    raise ParseError(f"expected ',' or ']', got {text[pos]!r}", text, pos)
        start = pos
        while pos < len(text) and text[pos] not in ",[]":
            pos += 1
        leaf = text[start:pos].strip()
        if not leaf:
            raise ParseError("empty list item", text, start)
        return leaf

    skip_ws()
    if pos >= len(text) or text[pos] != "[":
        raise ParseError("expected '['", text, pos)
    value = parse_item()
    skip_ws()
    if pos != len(text):
        raise ParseError("trailing text after list", text, pos)
    return value


def format_list(value) -> str:
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(format_list(v) for v in value) + "]"
    return str(value)


@dataclass
class FamilyFile:
    field: FieldSpec
    ambient: int
    plane_dim: int
    params: list[str]
    grid: list[list[str]] | None = None
    coords: list[str] | None = None
    perm: list[int] | None = None
    label: str | None = None
    expect: dict[str, str] = dc_field(default_factory=dict)
    lines: dict[str, int] = dc_field(default_factory=dict)

    @property
    def is_variety(self) -> bool:
        return self.coords is not None

    def _ring(self, field: FieldSpec | None) -> Ring:
        try:
            return Ring(tuple(self.params), field or self.field)
        except DimensionError as exc:
            raise SchemaError(str(exc), self.lines.get("params"), "params") from None

    def _parse_expr(self, text: str, ring: Ring, key: str):
        try:
            return ratfunc_parse(text, ring)
        except ParseError as exc:
            raise SchemaError(str(exc), self.lines.get(key), key) from None

    def family(self, field: FieldSpec | None = None) -> ChartFamily:
        """The chart family; a variety file gives its m = 0 point family."""
        ring = self._ring(field)
        if self.is_variety:
            v = self.variety(field)
            if not v.coords[0].is_one():
                raise SchemaError("first coordinate must be 1", self.lines.get("coords"), "coords")
            return ChartFamily(ring.field, v.N, 0, ring.params, [list(v.coords[1:])], tuple(self.perm or ()))
        f = [[self._parse_expr(s, ring, "f") for s in row] for row in self.grid]
        try:
            return ChartFamily(ring.field, self.ambient, self.plane_dim, ring.params, f, tuple(self.perm or ()))
        except DimensionError as exc:
            raise SchemaError(str(exc), self.lines.get("perm"), "perm") from None

    def variety(self, field: FieldSpec | None = None) -> ProjParam:
        ring = self._ring(field)
        if not self.is_variety:
            fam = self.family(field)
            if fam.m != 0:
                raise SchemaError("a variety file needs 'coords' or plane_dim = 0", None, "coords")
            one = ring.rat(1)
            stored = [one] + list(fam.f[0])
            labels = [None] * len(stored)
            for k, v in enumerate(stored):
                labels[fam.coord_perm[k]] = v
            return ProjParam(ring.field, fam.N, ring.params, tuple(labels))
        coords = [self._parse_expr(s, ring, "coords") for s in self.coords]
        try:
            return ProjParam(ring.field, len(coords) - 1, ring.params, tuple(coords))
        except DimensionError as exc:
            raise SchemaError(str(exc), self.lines.get("coords"), "coords") from None


def _logical_lines(text: str) -> list[tuple[int, str]]:
    """Join continuation lines of open bracketed values; strip comments."""
    out: list[tuple[int, str]] = []
    buf, start, depth = "", 0, 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not buf and not line.strip():
            continue
        if not buf:
            start = lineno
        buf += " " + line if buf else line
        depth += line.count("[") - line.count("]")
        if depth < 0:
            raise SchemaError("unbalanced ']'", lineno)
        if depth == 0:
            out.append((start, buf.strip()))
            buf = ""
    if buf:
        raise SchemaError("unterminated '['", start)
    return out


def _int(value: str, line: int, key: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise SchemaError(f"expected an integer, got {value!r}", line, key) from None


def _list(value: str, line: int, key: str) -> list:
    try:
        return parse_list(value)
    except ParseError as exc:
        raise SchemaError(str(exc), line, key) from None


def loads(text: str) -> FamilyFile:
    raw: dict[str, str] = {}
    lines: dict[str, int] = {}
    expect: dict[str, str] = {}
    for lineno, line in _logical_lines(text):
        if "=" not in line:
            raise SchemaError(f"expected 'key = value', got {line!r}", lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        if key.startswith("expect."):
            expect[key[len("expect."):]] = value
            lines[key] = lineno
            continue
        if key not in KEYS:
            raise SchemaError("unknown key", lineno, key)
        if key in raw:
            raise SchemaError("duplicate key", lineno, key)
        raw[key] = value
        lines[key] = lineno

    def need(key: str) -> str:
        if key not in raw:
            raise SchemaError("missing required key", None, key)
        return raw[key]

    try:
        field = FieldSpec.parse(need("field"))
    except FieldError as exc:
        raise FieldError(f"line {lines['field']}, field 'field': {exc}") from None

    params = _list(need("params"), lines["params"], "params")
    if any(isinstance(p, list) for p in params):
        raise SchemaError("params must be a flat list of names", lines["params"], "params")

    perm = None
    if "perm" in raw:
        perm = [_int(p, lines["perm"], "perm") for p in _list(raw["perm"], lines["perm"], "perm")]

    if ("f" in raw) == ("coords" in raw):
        raise SchemaError("give exactly one of 'f' and 'coords'", None, "f")

    if "coords" in raw:
        coords = _list(raw["coords"], lines["coords"], "coords")
        if any(isinstance(c, list) for c in coords):
            raise SchemaError("coords must be a flat list", lines["coords"], "coords")
        N = len(coords) - 1
        if "ambient" in raw and _int(raw["ambient"], lines["ambient"], "ambient") != N:
            raise SchemaError(f"ambient does not match the {N + 1} coordinates", lines["ambient"], "ambient")
        if "plane_dim" in raw and _int(raw["plane_dim"], lines["plane_dim"], "plane_dim") != 0:
            raise SchemaError("a variety has plane_dim 0", lines["plane_dim"], "plane_dim")
        return FamilyFile(field, N, 0, params, None, coords, perm, raw.get("label"), expect, lines)

    N = _int(need("ambient"), lines["ambient"], "ambient")
    m = _int(need("plane_dim"), lines["plane_dim"], "plane_dim")
    if N < 1 or not 0 <= m < N:
        raise SchemaError(f"need 0 <= plane_dim < ambient, got {m} and {N}", lines["plane_dim"], "plane_dim")
    grid = _list(raw["f"], lines["f"], "f")
    if len(grid) != m + 1 or any(not isinstance(r, list) for r in grid):
        raise SchemaError(f"grid must have {m + 1} rows of {N - m} entries", lines["f"], "f")
    for i, row in enumerate(grid):
        if len(row) != N - m or any(isinstance(x, list) for x in row):
            raise SchemaError(
                f"grid row {i} has {len(row)} entries, expected {N - m} (= ambient - plane_dim)",
                lines["f"],
                "f",
            )
    return FamilyFile(field, N, m, params, grid, None, perm, raw.get("label"), expect, lines)


def load(path: str | Path) -> FamilyFile:
    return loads(Path(path).read_text())


def parse_family_file(path: str | Path, field: FieldSpec | None = None) -> ChartFamily:
    return load(path).family(field)


def emit_family(fam: ChartFamily, label: str | None = None, expect: dict[str, str] | None = None) -> str:
    lines = []
    if label:
        lines.append(f"label = {label}")
    lines += [
        f"field = {fam.field}",
        f"ambient = {fam.N}",
        f"plane_dim = {fam.m}",
        f"params = {format_list(fam.params)}",
    ]
    rows = [format_list(r) for r in fam.grid_strings()]
    lines.append("f = [" + (",\n     ".join(rows)) + "]")
    if fam.coord_perm != tuple(range(fam.N + 1)):
        lines.append(f"perm = {format_list(fam.coord_perm)}")
    for k, v in (expect or {}).items():
        lines.append(f"expect.{k} = {v}")
    return "\n".join(lines) + "\n"


def emit_variety(v: ProjParam, label: str | None = None) -> str:
    lines = [f"label = {label}"] if label else []
    lines += [
        f"field = {v.field}",
        f"params = {format_list(v.params)}",
        f"coords = {format_list([str(c) for c in v.coords])}",
    ]
    return "\n".join(lines) + "\n"


def parse_grid(text: str, ring: Ring) -> list[list]:
    """A bracketed grid of expressions parsed over ``ring``."""
    grid = parse_list(text)
    return [[ratfunc_parse(s, ring) for s in row] if isinstance(row, list) else ratfunc_parse(row, ring)
            for row in grid]


__all__ = [
    "FamilyFile",
    "emit_family",
    "emit_variety",
    "format_list",
    "load",
    "loads",
    "parse_family_file",
    "parse_grid",
    "parse_list",
]
