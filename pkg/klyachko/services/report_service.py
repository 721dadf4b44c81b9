# klyachko/services/report_service.py
"""
Report Service - turns results into JSON-native trees and emits reports
as aligned text or stable JSON. Rationals are never floats: integral values
are integers, others "num/den" strings; integers beyond 2^53 are strings.
"""
import dataclasses
import json
import logging
from decimal import ROUND_HALF_EVEN, Context, Decimal, localcontext
from enum import Enum
from fractions import Fraction
from typing import Any, List

from ..models.schemas import Report
from .linalg import Subspace

logger = logging.getLogger(__name__)

JSON_SAFE_INT = 2 ** 53
DISPLAY_DIGITS = 6


def render_int(n: int):
    return str(n) if abs(n) >= JSON_SAFE_INT else n


def render_rational(x: Fraction):
    x = Fraction(x)
    if x.denominator == 1:
        return render_int(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def display_decimal(x) -> str:
    """6 significant digits, round half to even: 3/2 -> "1.50000" """
    x = Fraction(x)
    with localcontext(Context(prec=DISPLAY_DIGITS, rounding=ROUND_HALF_EVEN)):
        q = Decimal(x.numerator) / Decimal(x.denominator)
        if q == 0:
            return "0." + "0" * (DISPLAY_DIGITS - 1)
        q = q.quantize(Decimal(1).scaleb(q.adjusted() - DISPLAY_DIGITS + 1))
    return format(q, "f")


def render_key(key) -> str:
    if isinstance(key, tuple):
        return ",".join(str(render(k)) for k in key)
    return str(render(key))


def render(value: Any) -> Any:
    """Exact, JSON-native rendering of any result value"""
    if isinstance(value, Enum):
        return value.value
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, int):
        return render_int(value)
    if isinstance(value, Fraction):
        return render_rational(value)
    if isinstance(value, float):
        # only ever display values
        return display_decimal(Fraction(value))
    if isinstance(value, Subspace):
        return {"dim": value.dim, "basis": [render(v) for v in value.basis]}
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {f.name: render(getattr(value, f.name)) for f in dataclasses.fields(value)}
    if isinstance(value, dict):
        return {render_key(k): render(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [render(v) for v in value]
    if hasattr(value, "to_dict"):
        return render(value.to_dict())
    raise TypeError(f"cannot render {type(value).__name__}")


def _is_scalar(value: Any) -> bool:
    return value is None or isinstance(value, (bool, int, str))


def _cell(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, list):
        return "[" + ", ".join(_cell(v) for v in value) + "]"
    if isinstance(value, dict):
        return "{" + ", ".join(f"{k}: {_cell(v)}" for k, v in value.items()) + "}"
    return str(value)


def _is_table(value: Any) -> bool:
    return (
        isinstance(value, list) and len(value) > 0
        and all(isinstance(row, dict) for row in value)
        and all(list(row) == list(value[0]) for row in value)
    )


def _table_lines(rows: List[dict], indent: str) -> List[str]:
    headers = list(rows[0])
    cells = [[_cell(row[h]) for h in headers] for row in rows]
    widths = [max(len(h), *(len(c[i]) for c in cells)) for i, h in enumerate(headers)]
    lines = [indent + "  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip()]
    lines.append(indent + "  ".join("-" * w for w in widths))
    for row in cells:
        lines.append(indent + "  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    return lines


def _text_lines(value: Any, indent: str = "") -> List[str]:
    if isinstance(value, dict):
        lines = []
        width = max((len(k) for k, v in value.items() if _is_scalar(v) or _is_flat(v)), default=0)
        for key, item in value.items():
            if _is_scalar(item) or _is_flat(item):
                lines.append(f"{indent}{key.ljust(width)}  {_cell(item)}".rstrip())
            else:
                lines.append(f"{indent}{key}")
                lines.extend(_text_lines(item, indent + "  "))
        return lines
    if _is_table(value):
        return _table_lines(value, indent)
    if isinstance(value, list):
        if not value:
            return [f"{indent}(none)"]
        lines = []
        for item in value:
            if _is_scalar(item) or _is_flat(item):
                lines.append(f"{indent}- {_cell(item)}")
            else:
                lines.append(f"{indent}-")
                lines.extend(_text_lines(item, indent + "  "))
        return lines
    return [f"{indent}{_cell(value)}"]


def _is_flat(value: Any) -> bool:
    """Short lists of scalars print inline"""
    return isinstance(value, list) and all(_is_scalar(v) for v in value)


class ReportService:
    """Service for rendering and emitting command reports"""

    def build(self, command: str, params: dict, digest: str, results: dict = None,
              verdicts: list = None, warnings: list = None, error: dict = None) -> Report:
        return Report(
            command=command,
            params=render(params),
            input_digest=digest,
            results=render(results or {}),
            verdicts=render(verdicts or []),
            warnings=list(warnings or []),
            error=render(error) if error is not None else None,
        )

    def emit(self, report: Report, fmt: str = "text") -> str:
        """Report as text (aligned tables) or JSON (sorted keys); same input, same bytes"""
        data = report.model_dump()
        if fmt == "json":
            return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
        if fmt != "text":
            raise ValueError(f"unknown format {fmt!r}")
        sections = [
            ("command", data["command"]),
            ("input_digest", data["input_digest"]),
            ("params", data["params"]),
            ("results", data["results"]),
            ("verdicts", data["verdicts"]),
            ("warnings", data["warnings"]),
        ]
        if data["error"] is not None:
            sections.append(("error", data["error"]))
        lines: List[str] = []
        for name, value in sections:
            if _is_scalar(value):
                lines.append(f"{name}: {_cell(value)}")
            else:
                lines.append(f"{name}:")
                lines.extend(_text_lines(value, "  "))
        return "\n".join(lines) + "\n"


# Singleton instance
report_service = ReportService()
