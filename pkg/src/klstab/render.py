"""Text rendering shared by the library reprs and the CLI."""
from __future__ import annotations

from .symgroup import word_string


def render_coefficient(c) -> str:
    """Prefix for a basis element: '' for 1, '-' for -1, '(v^-1 + v) ' otherwise."""
    if c.is_constant():
        k = c.coeff(0)
        if k == 1:
            return ""
        if k == -1:
            return "-"
        return f"{k} "
    return f"({c}) "


def render_combination(terms: dict, symbol: str) -> str:
    """``^H_{s2*s1} + (v^-1 + v) ^H_{s1}``, terms ordered by (length, window)."""
    if not terms:
        return "0"
    parts = []
    for w in sorted(terms, key=lambda p: p.sort_key()):
        parts.append(f"{render_coefficient(terms[w])}{symbol}_{{{word_string(w)}}}")
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out
