import re
from fractions import Fraction
from typing import Dict, List, Optional

from src.core.errors import ParameterError


# ---------------------------------------------------------------------------
# Parameter strings
# ---------------------------------------------------------------------------

_PARAM_RE = re.compile(r'^\s*([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(\S+?)\s*$')
_TOP_LEVEL_COMMA = re.compile(r",(?![^{]*\})")


def parse_params(text: str) -> Dict[str, str]:
    """
    Split a ``key=value`` list into a dict of raw strings.

    Examples:
        "n=4,k=2"       -> {"n": "4", "k": "2"}
        "n=4, R=0x3"    -> {"n": "4", "R": "0x3"}
        "n=4,R={1,2}"   -> {"n": "4", "R": "{1,2}"}
        ""              -> {}
    """
    out: Dict[str, str] = {}
    if not text or not text.strip():
        return out
    for chunk in _TOP_LEVEL_COMMA.split(text):
        m = _PARAM_RE.match(chunk)
        if not m:
            raise ParameterError(f"expected key=value, got {chunk.strip()!r}")
        key, value = m.group(1), m.group(2)
        if key in out:
            raise ParameterError(f"parameter {key!r} given twice")
        out[key] = value
    return out


def parse_int(text: str, name: str = "value") -> int:
    """Decimal or 0x-prefixed hexadecimal integer."""
    try:
        return int(str(text).strip(), 0)
    except ValueError:
        raise ParameterError(f"{name}: not an integer: {text!r}") from None


def parse_mask(text: str, name: str = "mask") -> int:
    """
    Parse a set given as hex/decimal bits or as 1-based elements.

    Examples:
        "0x3"     -> 3
        "{1,2}"   -> 3
        "{}"      -> 0
    """
    s = str(text).strip()
    if s.startswith("{") and s.endswith("}"):
        inner = s[1:-1].strip()
        mask = 0
        if inner:
            for part in inner.split(","):
                e = parse_int(part, name)
                if e < 1:
                    raise ParameterError(f"{name}: elements are 1-based, got {e}")
                mask |= 1 << (e - 1)
        return mask
    value = parse_int(s, name)
    if value < 0:
        raise ParameterError(f"{name}: negative mask {value}")
    return value


def parse_fraction(text, name: str = "value") -> Fraction:
    """
    Exact rational from "NUM/DEN", an integer, or a terminating decimal.

    Examples:
        "1/2" -> Fraction(1, 2)
        "0.25" -> Fraction(1, 4)
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise ParameterError(f"{name}: not a rational number: {text!r}") from None


def parse_int_list(text: Optional[str], name: str = "list") -> List[int]:
    if text is None or not str(text).strip():
        return []
    return [parse_int(p, name) for p in str(text).split(",")]


def parse_fraction_list(text: Optional[str], name: str = "list") -> List[Fraction]:
    if text is None or not str(text).strip():
        return []
    return [parse_fraction(p, name) for p in str(text).split(",")]


# ---------------------------------------------------------------------------
# Report formatting
# ---------------------------------------------------------------------------

def rational_to_dict(value) -> dict:
    """Exact rational as decimal strings plus a float approximation."""
    value = Fraction(value)
    return {
        "num": str(value.numerator),
        "den": str(value.denominator),
        "approx": float(value),
    }


def format_fraction(value) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
