"""Reading and writing algebra description files (JSON)."""

from __future__ import annotations

import json
import re
from pathlib import Path

from .algebra import SuperAlgebra
from .linalg import Matrix, format_scalar, parse_scalar

FIXTURE_DIR = Path(__file__).with_name("fixtures")


class LoadError(ValueError):
    """A malformed algebra file; ``field`` and ``line`` locate the problem when known."""

    def __init__(self, message: str, field: str | None = None, line: int | None = None,
                 source: str | None = None):
        self.field = field
        self.line = line
        self.source = source
        loc = ":".join(str(x) for x in (source, line) if x is not None)
        parts = [x for x in (loc, f"field {field}" if field else "", message) if x]
        super().__init__(": ".join(parts))

    def to_dict(self) -> dict:
        return {"error": str(self), "field": self.field, "line": self.line}


def _line_of(text: str, key: str) -> int | None:
    m = re.search(r'"%s"\s*:' % re.escape(key), text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def _scalar(text, field: str, ctx) -> object:
    if isinstance(text, bool):
        ctx.fail(f"expected a rational text, got {text!r}", field)
    if isinstance(text, int):
        return parse_scalar(str(text))
    if not isinstance(text, str):
        ctx.fail(f"expected a rational text like \"p/q\", got {text!r}", field)
    try:
        return parse_scalar(text)
    except (ValueError, ZeroDivisionError) as e:
        ctx.fail(f"malformed scalar {text!r}: {e}", field)


class _Ctx:
    def __init__(self, text: str, source):
        self.text = text
        self.source = source

    def fail(self, message: str, field: str):
        top = field.split("[")[0].split(".")[0]
        raise LoadError(message, field, _line_of(self.text, top), self.source)


def _matrix(rows, n: int, field: str, ctx: _Ctx) -> Matrix:
    if not isinstance(rows, list) or len(rows) != n:
        ctx.fail(f"expected {n} rows", field)
    out = []
    for r, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            ctx.fail(f"row {r} must have {n} entries", f"{field}[{r}]")
        out.append(tuple(_scalar(x, f"{field}[{r}][{c}]", ctx) for c, x in enumerate(row)))
    return Matrix(tuple(out))


def _index(x, names: list, n: int, field: str, ctx: _Ctx) -> int:
    if isinstance(x, str) and x in names:
        return names.index(x)
    if isinstance(x, int) and not isinstance(x, bool) and 0 <= x < n:
        return x
    if isinstance(x, str) and x.isdigit() and int(x) < n:
        return int(x)
    ctx.fail(f"{x!r} is not a basis index or label", field)


def algebra_from_dict(data: dict, text: str = "", source=None) -> SuperAlgebra:
    ctx = _Ctx(text, source)
    if not isinstance(data, dict):
        raise LoadError("top level must be an object", None, 1, source)
    for key in ("dimension", "basis", "parity", "brackets"):
        if key not in data:
            ctx.fail("missing required field", key)
    n = data["dimension"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        ctx.fail("dimension must be a nonnegative integer", "dimension")
    names = data["basis"]
    if not isinstance(names, list) or not all(isinstance(x, str) for x in names):
        ctx.fail("basis must be a list of labels", "basis")
    if len(names) != n:
        ctx.fail(f"has {len(names)} labels, dimension is {n}", "basis")
    if len(set(names)) != n:
        ctx.fail("labels must be distinct", "basis")
    parity = data["parity"]
    if not isinstance(parity, list) or len(parity) != n:
        ctx.fail(f"must be a list of length {n}", "parity")
    if any(p not in (0, 1) or isinstance(p, bool) for p in parity):
        ctx.fail("entries must be 0 or 1", "parity")
    products = {}
    brackets = data["brackets"]
    if not isinstance(brackets, list):
        ctx.fail("must be a list", "brackets")
    for e, entry in enumerate(brackets):
        f = f"brackets[{e}]"
        if not isinstance(entry, dict) or not {"left", "right", "result"} <= set(entry):
            ctx.fail("needs left, right and result", f)
        i = _index(entry["left"], names, n, f + ".left", ctx)
        j = _index(entry["right"], names, n, f + ".right", ctx)
        if (i, j) in products:
            ctx.fail(f"duplicate product ({names[i]}, {names[j]})", f)
        res = entry["result"]
        if not isinstance(res, dict):
            ctx.fail("result must map basis indices to scalars", f + ".result")
        products[(i, j)] = {_index(k, names, n, f + ".result", ctx): _scalar(v, f"{f}.result.{k}", ctx)
                            for k, v in res.items()}
    phi = _matrix(data["phi"], n, "phi", ctx) if "phi" in data else Matrix.identity(n)
    psi = _matrix(data["psi"], n, "psi", ctx) if "psi" in data else Matrix.identity(n)
    H = data.get("H")
    if H is not None:
        if not isinstance(H, list):
            ctx.fail("must be a list of basis indices", "H")
        H = [_index(h, names, n, "H", ctx) for h in H]
    return SuperAlgebra.from_products(names, parity, products, phi, psi, str(data.get("name", "")), H)


def loads_algebra(text: str, source=None) -> SuperAlgebra:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise LoadError(e.msg, None, e.lineno, source) from None
    return algebra_from_dict(data, text, source)


def load_algebra(path) -> SuperAlgebra:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise LoadError(f"cannot read file: {e.strerror}", None, None, str(path)) from None
    return loads_algebra(text, str(path))


def algebra_to_dict(a: SuperAlgebra) -> dict:
    fm = lambda m: [[format_scalar(x) for x in row] for row in m.rows]  # noqa: E731
    d = {
        "name": a.name,
        "dimension": a.dim,
        "basis": list(a.basis_names),
        "parity": list(a.parity),
        "brackets": [{"left": i, "right": j, "result": {str(k): format_scalar(c) for k, c in entry}}
                     for (i, j), entry in a.products],
        "phi": fm(a.phi),
        "psi": fm(a.psi),
    }
    if a.H is not None:
        d["H"] = list(a.H)
    return d


def dumps_algebra(a: SuperAlgebra) -> str:
    return json.dumps(algebra_to_dict(a), indent=1) + "\n"


def dump_algebra(a: SuperAlgebra, path) -> None:
    Path(path).write_text(dumps_algebra(a), encoding="utf-8")


def fixture_names() -> list:
    return sorted(p.stem for p in FIXTURE_DIR.glob("*.json"))


def load_fixture(name: str) -> SuperAlgebra:
    path = FIXTURE_DIR / f"{name}.json"
    if not path.exists():
        raise LoadError(f"no fixture named {name!r}; available: {', '.join(fixture_names())}")
    return load_algebra(path)
