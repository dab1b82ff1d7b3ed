"""
Family files for Container Lab.

A family file is plain text:

    # comment lines and trailing comments start with '#'
    n=7
    0
    7f
    ...

The first non-comment line is ``n=<int>``; each further line is one member
as lowercase hex of its bit vector (element i is bit i-1).  Families of
disjoint pairs write ``a,b`` per line.  Set-pair systems, whose order
matters, use the same layout with ``N=<int>`` as header and keep their
lines in file order.

Loading is strict: duplicates, masks outside [n], stray text and a missing
header all raise ``FamilyFormatError`` with the file and line number, so
save/load round-trips are bit-exact.
"""

from __future__ import annotations

import os
import re
from typing import Iterator, List, Optional, Tuple

from src.core.errors import ContainerLabError, FamilyFormatError
from src.core.lattice import MAX_GROUND, Family
from src.tools.constructions import SetPairFamily

_HEX = re.compile(r"[0-9a-f]+")


def _content_lines(text: str) -> Iterator[Tuple[int, str]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _read_header(lines: List[Tuple[int, str]], key: str, path: str) -> int:
    if not lines:
        raise FamilyFormatError(f"missing '{key}=<int>' header", path, 0)
    lineno, line = lines[0]
    name, sep, value = line.partition("=")
    if not sep or name.strip() != key or not value.strip().isdigit():
        raise FamilyFormatError(f"expected '{key}=<int>', got {line!r}", path, lineno)
    n = int(value.strip())
    if n > MAX_GROUND:
        raise FamilyFormatError(f"ground set {n} exceeds {MAX_GROUND}", path, lineno)
    return n


def _parse_mask(token: str, n: int, path: str, lineno: int) -> int:
    token = token.strip()
    if not _HEX.fullmatch(token):
        raise FamilyFormatError(f"not a lowercase hex mask: {token!r}", path, lineno)
    mask = int(token, 16)
    if mask >> n:
        raise FamilyFormatError(f"mask {token} has elements outside [{n}]", path, lineno)
    return mask


def _parse_members(lines, n: int, path: str, pairs: Optional[bool]):
    members, seen = [], set()
    for lineno, line in lines:
        is_pair = "," in line
        if pairs is None:
            pairs = is_pair
        elif pairs != is_pair:
            raise FamilyFormatError("mixes single masks and pairs", path, lineno)
        if is_pair:
            parts = line.split(",")
            if len(parts) != 2:
                raise FamilyFormatError(f"expected 'a,b', got {line!r}", path, lineno)
            item = tuple(_parse_mask(p, n, path, lineno) for p in parts)
        else:
            item = _parse_mask(line, n, path, lineno)
        if item in seen:
            raise FamilyFormatError(f"duplicate member {line!r}", path, lineno)
        seen.add(item)
        members.append(item)
    return members, bool(pairs)


# ---------------------------------------------------------------------------
# Families
# ---------------------------------------------------------------------------

def parse_family(text: str, path: str = "") -> Family:
    """Parse family text.  Raises FamilyFormatError."""
    lines = list(_content_lines(text))
    n = _read_header(lines, "n", path)
    members, pairs = _parse_members(lines[1:], n, path, None)
    try:
        return Family(n, members, pairs=pairs)
    except ContainerLabError as exc:
        raise FamilyFormatError(str(exc), path) from exc


def format_family(family: Family, comment: str = "") -> str:
    out = [f"# {line}" for line in comment.splitlines()]
    out.append(f"n={family.ground_n}")
    if family.is_pairs:
        out.extend(f"{a:x},{b:x}" for a, b in family)
    else:
        out.extend(f"{m:x}" for m in family)
    return "\n".join(out) + "\n"


def load_family(path: str) -> Family:
    """
    Load a family file.

    Raises:
        FileNotFoundError: missing file.
        FamilyFormatError: malformed contents.
    """
    with open(path, "r", encoding="utf-8") as fh:
        return parse_family(fh.read(), path)


def save_family(family: Family, path: str, comment: str = "") -> str:
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_family(family, comment))
    return path


# ---------------------------------------------------------------------------
# Ordered set-pair systems
# ---------------------------------------------------------------------------

def parse_set_pairs(text: str, path: str = "") -> SetPairFamily:
    lines = list(_content_lines(text))
    N = _read_header(lines, "N", path)
    members, _ = _parse_members(lines[1:], N, path, True)
    return SetPairFamily(N, members)


def format_set_pairs(family: SetPairFamily, comment: str = "") -> str:
    out = [f"# {line}" for line in comment.splitlines()]
    out.append(f"N={family.ground_n}")
    out.extend(f"{a:x},{b:x}" for a, b in family)
    return "\n".join(out) + "\n"


def load_set_pairs(path: str) -> SetPairFamily:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_set_pairs(fh.read(), path)


def save_set_pairs(family: SetPairFamily, path: str, comment: str = "") -> str:
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_set_pairs(family, comment))
    return path
