"""Reading and writing complex, cover and point files."""
from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path

from .complexes import SimplicialComplex, closure, make_simplex
from .covers import Cover, FiniteMetricSpace


class FormatError(ValueError):
    """Input file could not be parsed."""


def _read_json(path: Path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON: {exc}") from exc


def _maximal_list(doc, where: str) -> list[list[str]]:
    if not isinstance(doc, list) or not all(isinstance(s, list) for s in doc):
        raise FormatError(f"{where}: expected a list of vertex lists")
    out = []
    for s in doc:
        if not s:
            continue
        if not all(isinstance(v, (str, int)) and not isinstance(v, bool) for v in s):
            raise FormatError(f"{where}: vertex labels must be strings or integers: {s}")
        try:
            out.append(list(make_simplex(s)))
        except ValueError as exc:
            raise FormatError(f"{where}: {exc}") from exc
    return out


def complex_from_doc(doc, where: str = "complex") -> tuple[str, SimplicialComplex]:
    if not isinstance(doc, dict) or "maximal_simplices" not in doc:
        raise FormatError(f"{where}: missing 'maximal_simplices'")
    return str(doc.get("name", "")), closure(_maximal_list(doc["maximal_simplices"], where))


def load_complex(path) -> tuple[str, SimplicialComplex]:
    path = Path(path)
    return complex_from_doc(_read_json(path), str(path))


def complex_to_doc(name: str, K: SimplicialComplex) -> dict:
    return {"name": name, "maximal_simplices": [list(s) for s in K.maximal_simplices]}


def load_cover(path) -> tuple[str, Cover]:
    """Parse a cover file. Raises :class:`FormatError` or ``InvalidCoverError``."""
    path = Path(path)
    doc = _read_json(path)
    if not isinstance(doc, dict) or "complex" not in doc or "parts" not in doc:
        raise FormatError(f"{path}: cover needs 'complex' and 'parts'")
    base = doc["complex"]
    if isinstance(base, str):
        _, K = load_complex(path.parent / base)
    else:
        _, K = complex_from_doc(base, f"{path}: complex")
    parts = doc["parts"]
    if not isinstance(parts, dict):
        raise FormatError(f"{path}: 'parts' must map labels to simplex lists")
    built = {str(label): closure(_maximal_list(m, f"{path}: part {label}")) for label, m in parts.items()}
    return str(doc.get("name", path.stem)), Cover(K, built)


_SPLIT = re.compile(r"[,\s]+")


def _number(tok: str) -> Fraction | None:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        return None


def load_points(path) -> FiniteMetricSpace:
    """Points as coordinate rows, or a labeled distance matrix.

    Coordinates: one point per line, numbers separated by commas or spaces;
    points are labeled ``0, 1, ...``. Matrix form starts with a header line
    of labels (at least one non-numeric, optionally after a corner cell),
    followed by one ``label d1 d2 ...`` line per point. Numbers
    may be integers, decimals or fractions like ``3/4``; ``#`` starts a
    comment.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    rows = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            rows.append([t for t in _SPLIT.split(line) if t])
    if not rows:
        return FiniteMetricSpace((), ())
    try:
        if all(_number(t) is not None for t in rows[0]):
            coords = []
            for r in rows:
                vals = [_number(t) for t in r]
                if any(v is None for v in vals):
                    raise FormatError(f"{path}: non-numeric coordinate in {r}")
                coords.append(vals)
            return FiniteMetricSpace.from_coordinates(coords)
        labels = rows[0]
        if len(labels) == len(rows):
            labels = labels[1:]  # corner placeholder cell
        if len(rows) - 1 != len(labels):
            raise FormatError(f"{path}: {len(labels)} labels but {len(rows) - 1} matrix rows")
        table = []
        for want, r in zip(labels, rows[1:]):
            if r[0] != want or len(r) != len(labels) + 1:
                raise FormatError(f"{path}: malformed matrix row {r}")
            vals = [_number(t) for t in r[1:]]
            if any(v is None for v in vals):
                raise FormatError(f"{path}: non-numeric distance in {r}")
            table.append(tuple(vals))
        return FiniteMetricSpace(tuple(labels), tuple(table))
    except FormatError:
        raise
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from exc
