"""Reading and writing model files.

A model file is line oriented; ``#`` starts a comment.  Header lines
``g = <int>``, ``selfdual = <bool>`` and optionally ``name = <text>`` come
first, followed by sections:

    [basis]        name p s
    [mult]         a * b = <combination>      (unlisted products are 0)
    [fourier]      F(a) = <combination over the dual basis>
    [degree]       deg(a) = <rational>
    [star]         a * b = <combination>      (optional, cross-checked)
    [diagonal]     Delta = <combination of a|b>
    [kernel]       extra NAME p s / X * Y = ... / push(X) = ... / c1 = ...
    [dual.basis] [dual.mult] [dual.degree] [fourier_hat]
                   distinct dual model; fourier_hat lines read Fhat(a) = ...

Rationals are written ``num/den``.  Loading runs :func:`validate` and
refuses invalid models unless ``force`` is set.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .algebra import Element, TableAlgebra
from .beauville_model import BasisLabel, BeauvilleAlgebra, ModelError, validate
from .coeff_ring import format_rational
from .expr import ExprError, parse_expression
from .formatting import format_element
from .kernel import TableKernel, tensor_ambient


class ModelParseError(ModelError):
    def __init__(self, message: str, line: int | None = None, source: str = ""):
        self.line = line
        where = f"{source}:" if source else ""
        prefix = f"{where}line {line}: " if line is not None else where
        super().__init__(prefix + message)


class ModelValidationError(ModelError):
    def __init__(self, name: str, report):
        self.report = report
        lines = "\n".join(r.line() for r in report.failures())
        super().__init__(f"model {name} failed validation:\n{lines}")


SECTIONS = ("basis", "mult", "fourier", "degree", "star", "diagonal", "kernel",
            "dual.basis", "dual.mult", "dual.degree", "fourier_hat")

_HEADER_RE = re.compile(r"^(\w+)\s*=\s*(.*)$")
_SECTION_RE = re.compile(r"^\[([\w.]+)\]$")
_PRODUCT_RE = re.compile(r"^(\S+)\s*\*\s*(\S+)\s*=\s*(.+)$")
_CALL_RE = re.compile(r"^(\w+)\((\S+)\)\s*=\s*(.+)$")
_RATIONAL_RE = re.compile(r"^-?\d+(?:/\d+)?$")
_NAME_RE = re.compile(r"^[A-Za-z0-9_'|]+$")


@dataclass
class KernelSpec:
    """Kernel data as written in a file, kept for saving."""

    extras: list = field(default_factory=list)          # (name, p, s)
    products: dict = field(default_factory=dict)        # (x, y) -> expr text
    pushes: dict = field(default_factory=dict)          # name -> expr text
    c1: str = "0"


def _rational(token: str, line: int, source: str) -> Fraction:
    token = token.strip()
    if not _RATIONAL_RE.match(token):
        raise ModelParseError(f"malformed rational {token!r}", line, source)
    num, _, den = token.partition("/")
    if den and int(den) == 0:
        raise ModelParseError(f"zero denominator in {token!r}", line, source)
    return Fraction(int(num), int(den or 1))


def _int(token: str, what: str, line: int, source: str) -> int:
    if not re.match(r"^-?\d+$", token):
        raise ModelParseError(f"malformed {what} {token!r}", line, source)
    return int(token)


class _NameSpace(TableAlgebra):
    """Names-only algebra for parsing combinations that are never multiplied."""

    def __init__(self, names):
        unit = next((i for i, n in enumerate(names) if n in ("1", "1|1")), -1)
        super().__init__(names, [0] * len(names), {}, unit=unit, name="names")

    def one(self):
        if self._unit < 0:
            raise KeyError("bare rationals need a unit element '1'")
        return super().one()

    def _mul(self, a, b):
        return {}


def _combo(text: str, algebra, line: int, source: str) -> dict:
    try:
        return dict(parse_expression(text, algebra).coeffs)
    except ExprError as exc:
        raise ModelParseError(f"{exc} in {text.strip()!r}", line, source) from None
    except (KeyError, ValueError) as exc:
        raise ModelParseError(str(exc), line, source) from None


def _collect(text: str, source: str):
    header: dict = {}
    sections: dict = {}
    current = None
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _SECTION_RE.match(line)
        if m:
            current = m.group(1)
            if current not in SECTIONS:
                raise ModelParseError(f"unknown section [{current}]", n, source)
            if current in sections:
                raise ModelParseError(f"duplicate section [{current}]", n, source)
            sections[current] = []
            continue
        if current is None:
            m = _HEADER_RE.match(line)
            if not m:
                raise ModelParseError(f"expected 'key = value', got {line!r}", n, source)
            key = m.group(1)
            if key not in ("g", "selfdual", "name"):
                raise ModelParseError(f"unknown header key {key!r}", n, source)
            header[key] = (m.group(2).strip(), n)
        else:
            sections[current].append((n, line))
    return header, sections


def _parse_basis(lines, source):
    labels = []
    for n, line in lines:
        parts = line.split()
        if len(parts) != 3 or not _NAME_RE.match(parts[0]):
            raise ModelParseError(f"expected 'name p s', got {line!r}", n, source)
        labels.append(BasisLabel(parts[0], _int(parts[1], "codimension", n, source),
                                 _int(parts[2], "weight", n, source)))
    return labels


def _index_of(names: dict, name: str, n: int, source: str) -> int:
    if name not in names:
        raise ModelParseError(f"unknown basis element {name!r}", n, source)
    return names[name]


def _parse_products(lines, names, algebra, source):
    table = {}
    for n, line in lines:
        m = _PRODUCT_RE.match(line)
        if not m:
            raise ModelParseError(f"expected 'a * b = combination', got {line!r}", n, source)
        a = _index_of(names, m.group(1), n, source)
        b = _index_of(names, m.group(2), n, source)
        if (a, b) in table:
            raise ModelParseError(f"product {m.group(1)} * {m.group(2)} given twice", n, source)
        table[a, b] = _combo(m.group(3), algebra, n, source)
    return table


def _parse_calls(lines, fn, names, algebra, source, scalar=False):
    out = {}
    for n, line in lines:
        m = _CALL_RE.match(line)
        if not m or m.group(1) != fn:
            raise ModelParseError(f"expected '{fn}(a) = ...', got {line!r}", n, source)
        a = _index_of(names, m.group(2), n, source)
        if a in out:
            raise ModelParseError(f"{fn}({m.group(2)}) given twice", n, source)
        out[a] = _rational(m.group(3), n, source) if scalar else _combo(m.group(3), algebra, n, source)
    return out


def _names_algebra(labels):
    return _NameSpace([l.name for l in labels])


def _build(g, labels, mult_lines, degree_lines, name, selfdual, source):
    names = {l.name: i for i, l in enumerate(labels)}
    space = _names_algebra(labels)
    mult = _parse_products(mult_lines, names, space, source)
    degree = _parse_calls(degree_lines, "deg", names, space, source, scalar=True)
    try:
        return BeauvilleAlgebra(g, labels, mult, degree, None, selfdual, name=name)
    except ModelError as exc:
        raise ModelParseError(str(exc), None, source) from None


def _fourier_rows(lines, fn, source_model, target_model, source):
    names = {n: i for i, n in enumerate(source_model.names)}
    rows = _parse_calls(lines, fn, names, _NameSpace(target_model.names), source)
    missing = [source_model.names[i] for i in range(source_model.dim) if i not in rows]
    if missing:
        raise ModelParseError(f"missing {fn}({missing[0]})", None, source)
    return [rows[i] for i in range(source_model.dim)]


def parse_model(text: str, *, force: bool = False, source: str = "", name: str | None = None):
    header, sections = _collect(text, source)
    if "g" not in header:
        raise ModelParseError("missing header 'g = <int>'", None, source)
    g = _int(header["g"][0], "dimension", header["g"][1], source)
    selfdual = True
    if "selfdual" in header:
        value, n = header["selfdual"]
        if value.lower() not in ("true", "false"):
            raise ModelParseError(f"selfdual must be true or false, got {value!r}", n, source)
        selfdual = value.lower() == "true"
    model_name = name or (header["name"][0] if "name" in header else (Path(source).stem or "model"))
    if "basis" not in sections:
        raise ModelParseError("missing [basis] section", None, source)

    B = _build(g, _parse_basis(sections["basis"], source), sections.get("mult", []),
               sections.get("degree", []), model_name, selfdual, source)
    D = B
    if "dual.basis" in sections:
        D = _build(g, _parse_basis(sections["dual.basis"], source), sections.get("dual.mult", []),
                   sections.get("dual.degree", []), model_name + "^", selfdual, source)
    elif any(s in sections for s in ("dual.mult", "dual.degree", "fourier_hat")):
        raise ModelParseError("dual sections given without [dual.basis]", None, source)

    if "fourier" in sections:
        B.fourier = _fourier_rows(sections["fourier"], "F", B, D, source)
        if D is not B:
            if "fourier_hat" not in sections:
                raise ModelParseError("distinct dual needs a [fourier_hat] section", None, source)
            B.attach_dual(D, _fourier_rows(sections["fourier_hat"], "Fhat", D, B, source))

    names = {n: i for i, n in enumerate(B.names)}
    if "star" in sections:
        B.star = _parse_products(sections["star"], names, _NameSpace(B.names), source)
    if "diagonal" in sections:
        B.diagonal = _parse_diagonal(sections["diagonal"], B, source)
    if "kernel" in sections:
        spec, kernel = _parse_kernel(sections["kernel"], B, source)
        B.kernel_spec = spec
        B._kernel = kernel

    if not force:
        report = validate(B)
        if not report.ok:
            raise ModelValidationError(model_name, report)
    return B


def _parse_diagonal(lines, B, source):
    pairs = [(i, j) for i in range(B.dim) for j in range(B.dim)]
    space = _NameSpace([f"{B.names[i]}|{B.names[j]}" for i, j in pairs])
    out = None
    for n, line in lines:
        m = _HEADER_RE.match(line)
        if not m or m.group(1) != "Delta":
            raise ModelParseError(f"expected 'Delta = ...', got {line!r}", n, source)
        if out is not None:
            raise ModelParseError("Delta given twice", n, source)
        out = {pairs[k]: c for k, c in _combo(m.group(2), space, n, source).items()}
    return out or {}


def _parse_kernel(lines, B, source):
    D = B.dual
    spec = KernelSpec()
    for n, line in lines:
        if line.startswith("extra "):
            parts = line.split()
            if len(parts) != 4 or not _NAME_RE.match(parts[1]) or "|" in parts[1]:
                raise ModelParseError(f"expected 'extra NAME p s', got {line!r}", n, source)
            spec.extras.append((parts[1], _int(parts[2], "codimension", n, source),
                                _int(parts[3], "weight", n, source)))
    extra_names = [e[0] for e in spec.extras]
    base = tensor_ambient(B.names, [B.parity(i) for i in B.keys()], B.mul_basis,
                          D.names, [D.parity(i) for i in D.keys()], D.mul_basis,
                          units=(B.unit_key, D.unit_key))
    offset = base.dim
    names = {nm: i for i, nm in enumerate(base.names + extra_names)}
    space = _NameSpace(base.names + extra_names)
    products, pushes, c1 = {}, {}, None
    raw_products = {}
    for n, line in lines:
        if line.startswith("extra "):
            continue
        m = _PRODUCT_RE.match(line)
        if m:
            x = _index_of(names, m.group(1), n, source)
            y = _index_of(names, m.group(2), n, source)
            if x < offset and y < offset:
                raise ModelParseError("products of tensor classes are fixed by the model", n, source)
            products[x, y] = _combo(m.group(3), space, n, source)
            raw_products[m.group(1), m.group(2)] = m.group(3).strip()
            continue
        m = _CALL_RE.match(line)
        if m and m.group(1) == "push":
            if m.group(2) not in extra_names:
                raise ModelParseError(f"push is only declared for extra classes, not {m.group(2)!r}",
                                      n, source)
            pushes[names[m.group(2)]] = _combo(m.group(3), _NameSpace(D.names), n, source)
            spec.pushes[m.group(2)] = m.group(3).strip()
            continue
        m = _HEADER_RE.match(line)
        if m and m.group(1) == "c1":
            c1 = _combo(m.group(2), space, n, source)
            spec.c1 = m.group(2).strip()
            continue
        raise ModelParseError(f"unrecognized kernel line {line!r}", n, source)
    if c1 is None:
        raise ModelParseError("kernel section needs 'c1 = ...'", None, source)
    spec.products = raw_products
    amb = tensor_ambient(B.names, [B.parity(i) for i in B.keys()], B.mul_basis,
                         D.names, [D.parity(i) for i in D.keys()], D.mul_basis,
                         extras=extra_names, extra_parities=[e[2] & 1 for e in spec.extras],
                         extra_products=products, units=(B.unit_key, D.unit_key),
                         name=f"{B.name}x{D.name}")
    n2 = D.dim
    pull = [{i * n2 + D.unit_key: Fraction(1)} for i in range(B.dim)]
    push_map = {}
    for i in range(B.dim):
        dv = B.degree_map.get(i)
        if dv:
            for j in range(n2):
                push_map[i * n2 + j] = {j: dv}
    push_map.update(pushes)
    return spec, TableKernel(amb, pull, push_map, c1)


def load_model(path, *, force: bool = False) -> BeauvilleAlgebra:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ModelParseError(f"cannot read model file: {exc.strerror}", None, str(path)) from None
    return parse_model(text, force=force, source=str(path))


def load_builtin_file(filename: str) -> BeauvilleAlgebra:
    text = resources.files("fmcob").joinpath("data", filename).read_text()
    return parse_model(text, source=filename)


# ---------------------------------------------------------------------------
# writing


def _combo_text(coeffs: dict, names: list[str]) -> str:
    space = _NameSpace(names)
    return format_element(Element(space, coeffs))


def _section_products(table, names, target_names):
    out = []
    for (a, b), v in sorted(table.items()):
        if v:
            out.append(f"{names[a]} * {names[b]} = {_combo_text(v, target_names)}")
    return out


def _model_block(B, prefix=""):
    lines = [f"[{prefix}basis]"]
    lines += [f"{l.name} {l.p} {l.s}" for l in B.labels]
    lines += ["", f"[{prefix}mult]"]
    lines += _section_products(B.table, B.names, B.names)
    lines += ["", f"[{prefix}degree]"]
    lines += [f"deg({B.names[i]}) = {format_rational(v)}" for i, v in sorted(B.degree_map.items())]
    return lines


def format_model(B: BeauvilleAlgebra) -> str:
    lines = [f"g = {B.g}", f"selfdual = {'true' if B.selfdual else 'false'}",
             f"name = {B.name}", ""]
    lines += _model_block(B)
    D = B.dual
    if B.fourier is not None:
        lines += ["", "[fourier]"]
        lines += [f"F({B.names[i]}) = {_combo_text(row, D.names)}" for i, row in enumerate(B.fourier)]
    if B.has_distinct_dual:
        lines += [""] + _model_block(D, "dual.")
        lines += ["", "[fourier_hat]"]
        lines += [f"Fhat({D.names[i]}) = {_combo_text(row, B.names)}"
                  for i, row in enumerate(B.fourier_hat)]
    if B.star:
        lines += ["", "[star]"] + _section_products(B.star, B.names, B.names)
    if B.diagonal:
        pair_names = [f"{a}|{b}" for a in B.names for b in B.names]
        coeffs = {i * B.dim + j: c for (i, j), c in B.diagonal.items()}
        lines += ["", "[diagonal]", f"Delta = {_combo_text(coeffs, pair_names)}"]
    spec = getattr(B, "kernel_spec", None)
    if spec is not None:
        lines += ["", "[kernel]"]
        lines += [f"extra {nm} {p} {s}" for nm, p, s in spec.extras]
        lines += [f"{x} * {y} = {v}" for (x, y), v in spec.products.items()]
        lines += [f"push({x}) = {v}" for x, v in spec.pushes.items()]
        lines += [f"c1 = {spec.c1}"]
    return "\n".join(lines) + "\n"


def save_model(B: BeauvilleAlgebra, path) -> None:
    Path(path).write_text(format_model(B))
