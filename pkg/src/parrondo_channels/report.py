"""Tables and reproduction claims, rendered as Markdown, CSV or JSON."""

import attrs
import csv
import io
import json
import math
from enum import Enum
from typing import Any, Sequence

from .exceptions import ConfigurationError


class ClaimStatus(Enum):
    PASS = "pass"
    FAIL = "fail"
    FLAGGED = "flagged"
    INFORMATIONAL = "n/a"


class Relation(Enum):
    """How the Monte Carlo value is compared with the analytic one."""

    EQUAL = "equal"
    AT_MOST = "at_most"
    AT_LEAST = "at_least"
    POSITIVE = "positive"


@attrs.frozen
class Claim:
    name: str
    published: str | None
    analytic: float | None
    monte_carlo: float | None = None
    stderr: float | None = None
    relation: Relation = Relation.EQUAL
    flagged: bool = False
    sigmas: float = 3.0

    @property
    def published_agrees(self) -> bool | None:
        """Whether the analytic value reproduces the published one to its last printed digit."""
        if self.published is None or self.analytic is None:
            return None
        text = self.published.strip()
        if text.startswith(">"):
            return self.analytic > float(text[1:])
        decimals = len(text.split(".")[1]) if "." in text else 0
        return abs(self.analytic - float(text)) <= 10.0**-decimals + 1e-12

    @property
    def status(self) -> ClaimStatus:
        if self.flagged:
            return ClaimStatus.FLAGGED
        if self.monte_carlo is None:
            return ClaimStatus.INFORMATIONAL
        if self.analytic is None and self.relation is not Relation.POSITIVE:
            return ClaimStatus.INFORMATIONAL
        margin = self.sigmas * (self.stderr or 0.0)
        value, target = self.monte_carlo, self.analytic
        match self.relation:
            case Relation.EQUAL:
                ok = abs(value - target) <= margin
            case Relation.AT_MOST:
                ok = value - margin <= target
            case Relation.AT_LEAST:
                ok = value + margin >= target
            case Relation.POSITIVE:
                ok = value - margin > 0.0
        return ClaimStatus.PASS if ok else ClaimStatus.FAIL

    def row(self) -> tuple:
        agrees = self.published_agrees
        return (
            self.name,
            self.published,
            self.analytic,
            self.monte_carlo,
            self.stderr,
            self.relation.value,
            None if agrees is None else ("yes" if agrees else "no"),
            self.status.value,
        )


CLAIM_COLUMNS = ("claim", "published", "analytic", "monte_carlo", "stderr", "relation", "published_agrees", "status")


@attrs.frozen
class Table:
    title: str
    columns: tuple[str, ...] = attrs.field(converter=tuple)
    rows: tuple[tuple, ...] = attrs.field(converter=lambda rows: tuple(tuple(row) for row in rows))
    notes: tuple[str, ...] = attrs.field(default=(), converter=tuple)

    @classmethod
    def of_claims(cls, title: str, claims: Sequence[Claim], notes: Sequence[str] = ()) -> "Table":
        return cls(title, CLAIM_COLUMNS, [claim.row() for claim in claims], notes)

    def records(self) -> list[dict[str, Any]]:
        return [dict(zip(self.columns, (_plain(v) for v in row))) for row in self.rows]


def format_value(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isinf(value) or math.isnan(value):
            return str(value)
        return f"{value:.6g}"
    if isinstance(value, Enum):
        return str(value.value)
    return str(value)


def _plain(value: Any) -> Any:
    if isinstance(value, Enum):
        return value.value
    if hasattr(value, "item"):
        return value.item()
    return value


def render(tables: Sequence[Table], fmt: str) -> str:
    match fmt:
        case "md":
            return "\n".join(_markdown(table) for table in tables)
        case "csv":
            return "\n".join(_csv(table) for table in tables)
        case "json":
            payload = [
                {"title": t.title, "columns": list(t.columns), "rows": t.records(), "notes": list(t.notes)}
                for t in tables
            ]
            return json.dumps({"tables": payload}, indent=2, sort_keys=True) + "\n"
        case _:
            raise ConfigurationError(f"Unknown report format '{fmt}'. Valid options: md, csv, json")


def _markdown(table: Table) -> str:
    lines = [f"## {table.title}", ""]
    lines.append("| " + " | ".join(table.columns) + " |")
    lines.append("|" + "|".join("---" for _ in table.columns) + "|")
    for row in table.rows:
        lines.append("| " + " | ".join(format_value(v) for v in row) + " |")
    if table.notes:
        lines.append("")
        lines.extend(f"> {note}" for note in table.notes)
    lines.append("")
    return "\n".join(lines)


def _csv(table: Table) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    # comment lines bypass the writer and are never quoted
    buffer.write(f"# {table.title}\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([format_value(v) for v in row])
    for note in table.notes:
        buffer.write(f"# {note}\n")
    return buffer.getvalue()


def failed_claims(tables: Sequence[Table]) -> list[str]:
    """Names of claims whose status column reads 'fail'."""
    failed = []
    for table in tables:
        if table.columns == CLAIM_COLUMNS:
            failed.extend(row[0] for row in table.rows if row[-1] == ClaimStatus.FAIL.value)
    return failed
