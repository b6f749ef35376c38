"""File formats: alist parity checks, dense 0/1 text, protograph text, and
code bundle directories.

All emitters produce canonical output that their parsers round-trip
bit-exactly. Parsers raise ParseError with a 1-based line (and column where
it makes sense) on malformed input.
"""

from __future__ import annotations

import importlib.resources
from pathlib import Path

import numpy as np

from .circulant import Protograph, RingElement
from .codes import CssCode, RotatedCode
from .errors import ParseError
from .gf2 import BinaryMatrix


def packaged_data_path(name: str) -> Path:
    """Path of a data file shipped with the package."""
    return Path(importlib.resources.files("biasqec") / "data" / name)


def resolve_input_path(name: str | Path) -> Path:
    """A user-supplied path, falling back to the packaged data directory."""
    p = Path(name)
    if p.exists():
        return p
    fallback = packaged_data_path(p.name)
    if fallback.exists():
        return fallback
    return p


def write_alist(path: str | Path, m: BinaryMatrix) -> None:
    """Write in alist format: cols rows, then max weights, per-column and
    per-row weights, then 1-based index lists padded with zeros."""
    dense = m.to_array()
    rows, cols = dense.shape
    col_idx = [list(np.nonzero(dense[:, j])[0] + 1) for j in range(cols)]
    row_idx = [list(np.nonzero(dense[i, :])[0] + 1) for i in range(rows)]
    max_col = max((len(c) for c in col_idx), default=0)
    max_row = max((len(r) for r in row_idx), default=0)
    lines = [
        f"{cols} {rows}",
        f"{max_col} {max_row}",
        " ".join(str(len(c)) for c in col_idx),
        " ".join(str(len(r)) for r in row_idx),
    ]
    # pad to at least one token so no index line is ever blank
    for c in col_idx:
        lines.append(" ".join(str(v) for v in c + [0] * (max(1, max_col) - len(c))))
    for r in row_idx:
        lines.append(" ".join(str(v) for v in r + [0] * (max(1, max_row) - len(r))))
    Path(path).write_text("\n".join(lines) + "\n")


def _int_tokens(text: str, line_no: int) -> list[int]:
    out = []
    for tok in text.split():
        try:
            out.append(int(tok))
        except ValueError:
            raise ParseError(f"expected an integer, got {tok!r}", line=line_no) from None
    return out


def read_alist(path: str | Path) -> BinaryMatrix:
    lines = Path(path).read_text().splitlines()
    stripped = [ln for ln in lines if ln.strip()]
    if len(stripped) < 4:
        raise ParseError("alist file has fewer than 4 lines", line=len(lines))
    head = _int_tokens(stripped[0], 1)
    if len(head) != 2:
        raise ParseError("first alist line must be 'cols rows'", line=1)
    cols, rows = head
    if cols < 0 or rows < 0:
        raise ParseError("alist dimensions must be non-negative", line=1)
    col_weights = _int_tokens(stripped[2], 3)
    if len(col_weights) != cols:
        raise ParseError(f"expected {cols} column weights, got {len(col_weights)}", line=3)
    row_weights = _int_tokens(stripped[3], 4)
    if len(row_weights) != rows:
        raise ParseError(f"expected {rows} row weights, got {len(row_weights)}", line=4)
    if len(stripped) < 4 + cols + rows:
        raise ParseError("alist file truncated", line=len(lines))
    dense = np.zeros((rows, cols), dtype=np.uint8)
    for j in range(cols):
        line_no = 5 + j
        entries = [v for v in _int_tokens(stripped[4 + j], line_no) if v != 0]
        if len(entries) != col_weights[j]:
            raise ParseError(
                f"column {j} lists {len(entries)} rows, weight says {col_weights[j]}",
                line=line_no,
            )
        for v in entries:
            if not 1 <= v <= rows:
                raise ParseError(f"row index {v} out of range", line=line_no)
            dense[v - 1, j] = 1
    # the row section is redundant; use it as a consistency check
    for i in range(rows):
        line_no = 5 + cols + i
        entries = {v for v in _int_tokens(stripped[4 + cols + i], line_no) if v != 0}
        if entries != set(np.nonzero(dense[i, :])[0] + 1):
            raise ParseError(f"row {i} list disagrees with column lists", line=line_no)
    return BinaryMatrix.from_array(dense)


def write_dense(path: str | Path, m: BinaryMatrix) -> None:
    dense = m.to_array()
    lines = [f"{m.rows} {m.cols}"]
    lines += ["".join(str(int(v)) for v in row) for row in dense]
    Path(path).write_text("\n".join(lines) + "\n")


def read_dense(path: str | Path) -> BinaryMatrix:
    lines = Path(path).read_text().splitlines()
    stripped = [ln for ln in lines if ln.strip()]
    if not stripped:
        raise ParseError("empty dense matrix file", line=1)
    head = _int_tokens(stripped[0], 1)
    if len(head) != 2:
        raise ParseError("first dense line must be 'rows cols'", line=1)
    rows, cols = head
    if len(stripped) != rows + 1:
        raise ParseError(f"expected {rows} rows, got {len(stripped) - 1}", line=len(lines))
    dense = np.zeros((rows, cols), dtype=np.uint8)
    for i in range(rows):
        row = stripped[1 + i].strip()
        if len(row) != cols:
            raise ParseError(f"row has {len(row)} digits, expected {cols}", line=2 + i)
        for j, ch in enumerate(row):
            if ch not in "01":
                raise ParseError(f"invalid digit {ch!r}", line=2 + i, column=j + 1)
            dense[i, j] = ch == "1"
    return BinaryMatrix.from_array(dense)


def write_protograph(path: str | Path, a: Protograph) -> None:
    Path(path).write_text(format_protograph(a))


def format_protograph(a: Protograph) -> str:
    lines = [f"L={a.L}"]
    for i in range(a.rows):
        parts = []
        for j in range(a.cols):
            e = a.entry(i, j)
            parts.append("0" if e.is_zero() else "(" + ",".join(str(s) for s in e.shifts) + ")")
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def parse_protograph(text: str) -> Protograph:
    lines = text.splitlines()
    rows: list[list[RingElement]] = []
    L: int | None = None
    for idx, raw in enumerate(lines):
        line_no = idx + 1
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if L is None:
            if not line.startswith("L="):
                raise ParseError("first line must be 'L=<int>'", line=line_no, column=1)
            try:
                L = int(line[2:])
            except ValueError:
                raise ParseError(f"bad lift size {line[2:]!r}", line=line_no, column=3) from None
            if L < 1:
                raise ParseError(f"lift size must be >= 1, got {L}", line=line_no, column=3)
            continue
        rows.append(_parse_proto_row(raw, L, line_no))
    if L is None:
        raise ParseError("missing 'L=<int>' header", line=max(1, len(lines)))
    if not rows:
        raise ParseError("protograph has no rows", line=len(lines))
    if len({len(r) for r in rows}) != 1:
        raise ParseError("rows have differing entry counts", line=len(lines))
    return Protograph(L, rows)


def _parse_proto_row(raw: str, L: int, line_no: int) -> list[RingElement]:
    entries: list[RingElement] = []
    pos = 0
    n = len(raw)
    while pos < n:
        if raw[pos].isspace():
            pos += 1
            continue
        start = pos
        if raw[pos] == "0":
            entries.append(RingElement.zero(L))
            pos += 1
            if pos < n and not raw[pos].isspace():
                raise ParseError("junk after zero entry", line=line_no, column=pos + 1)
        elif raw[pos] == "(":
            end = raw.find(")", pos)
            if end < 0:
                raise ParseError("unclosed '('", line=line_no, column=start + 1)
            body = raw[pos + 1 : end]
            try:
                shifts = [int(t) for t in body.split(",")] if body.strip() else []
            except ValueError:
                raise ParseError(
                    f"bad shift list {body!r}", line=line_no, column=start + 2
                ) from None
            if not shifts:
                raise ParseError("empty shift list; write 0 instead", line=line_no, column=start + 1)
            entries.append(RingElement(L, shifts))
            pos = end + 1
        else:
            raise ParseError(
                f"unexpected character {raw[pos]!r}", line=line_no, column=pos + 1
            )
    return entries


def read_protograph(path: str | Path) -> Protograph:
    return parse_protograph(Path(path).read_text())


def write_bundle(code: "CssCode | RotatedCode", directory: str | Path, extra: dict | None = None) -> None:
    """Serialize a code as a directory of alist/dense/manifest files."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    write_alist(d / "hx.alist", code.hx)
    write_alist(d / "hz.alist", code.hz)
    write_dense(d / "lx.txt", code.lx)
    write_dense(d / "lz.txt", code.lz)
    rotated = sorted(code.rotated) if isinstance(code, RotatedCode) else []
    manifest = {
        "name": code.name,
        "n": code.n,
        "k": code.k,
        "sector1_size": code.sector1_size,
        "rotated": "sector2" if rotated else "none",
    }
    if extra:
        manifest.update(extra)
    lines = [f"{key}={manifest[key]}" for key in manifest]
    (d / "manifest.txt").write_text("\n".join(lines) + "\n")


def read_bundle(directory: str | Path) -> "CssCode | RotatedCode":
    d = Path(directory)
    manifest: dict[str, str] = {}
    if not (d / "manifest.txt").is_file():
        raise ParseError(f"no manifest.txt in {d}")
    text = (d / "manifest.txt").read_text()
    for idx, raw in enumerate(text.splitlines()):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ParseError("manifest lines must be key=value", line=idx + 1)
        key, _, value = line.partition("=")
        manifest[key.strip()] = value.strip()
    for key in ("n", "k", "sector1_size", "rotated"):
        if key not in manifest:
            raise ParseError(f"manifest missing {key}")
    hx = read_alist(d / "hx.alist")
    hz = read_alist(d / "hz.alist")
    lx = read_dense(d / "lx.txt")
    lz = read_dense(d / "lz.txt")
    css = CssCode(
        hx=hx,
        hz=hz,
        n=int(manifest["n"]),
        k=int(manifest["k"]),
        lx=lx,
        lz=lz,
        sector1_size=int(manifest["sector1_size"]),
        name=manifest.get("name", d.name),
    )
    _validate_bundle(css)
    if manifest["rotated"] == "sector2":
        return RotatedCode(
            css=css,
            rotated=frozenset(range(css.sector1_size, css.n)),
            name=css.name,
        )
    if manifest["rotated"] != "none":
        raise ParseError(f"unknown rotated value {manifest['rotated']!r}")
    return css


def _validate_bundle(css: CssCode) -> None:
    from .errors import NotACssCodeError
    from .gf2 import matmul, rank

    if css.hx.cols != css.n or css.hz.cols != css.n:
        raise ParseError("check matrices disagree with manifest n")
    if not matmul(css.hx, css.hz.transpose()).is_zero():
        raise NotACssCodeError("bundle checks do not commute")
    if css.lx.rows != css.k or css.lz.rows != css.k:
        raise ParseError("logical row counts disagree with manifest k")
    if css.k:
        if not matmul(css.hz, css.lx.transpose()).is_zero():
            raise NotACssCodeError("lx rows are not in the kernel of hz")
        if not matmul(css.hx, css.lz.transpose()).is_zero():
            raise NotACssCodeError("lz rows are not in the kernel of hx")
        if rank(matmul(css.lx, css.lz.transpose())) != css.k:
            raise NotACssCodeError("bundle logical pairing is singular")
