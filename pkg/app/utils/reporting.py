import csv
import io
import json
from abc import ABC, abstractmethod
from typing import Any, Dict, List, Sequence, Type, Union

from pydantic import BaseModel
from rich.console import Console
from rich.table import Table

from app.schemas import Command, OutputFormat
from app.services.certify import certificate_text

Report = Union[BaseModel, Sequence[BaseModel]]


def _dump(model: BaseModel) -> Dict[str, Any]:
    return model.model_dump(mode="json", by_alias=True)


def _float(value: Any) -> str:
    return format(value, ".17g") if isinstance(value, float) else str(value)


class BaseRenderer(ABC):
    """Base class for report renderers."""

    @abstractmethod
    def render(self, report: Report, command: Command) -> str:
        """Render the report produced by `command` as text."""
        pass


class JsonRenderer(BaseRenderer):
    """Indented JSON; windows collapse to [lo, hi] pairs."""

    def render(self, report: Report, command: Command) -> str:
        if isinstance(report, BaseModel):
            payload: Any = _dump(report)
        elif command == Command.WINDOWS:
            payload = [[w.lo, w.hi] for w in report]
        else:
            payload = [_dump(r) for r in report]
        return json.dumps(payload, indent=2)


class CsvRenderer(BaseRenderer):
    """Flat CSV with 17 significant digits for floats."""

    SCAN_HEADER = ["alpha", "tau_re", "tau_im", "f", "class"]
    WINDOW_HEADER = ["lo", "hi"]

    def render(self, report: Report, command: Command) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")

        if command == Command.SEARCH:
            writer.writerow(["key", "value"])
            writer.writerow(["m", report.m])
            writer.writerow(["n_max", report.n_max])
            writer.writerow(["candidates_examined", report.candidates_examined])
            for key, count in report.rejections.items():
                writer.writerow([f"rejected_{key}", count])
            writer.writerow(["inconclusive", report.inconclusive])
            writer.writerow(["survivors", report.survivor_count])
        elif command == Command.CERTIFY:
            writer.writerow(["check", "outcome", "precision_bits"])
            for check in report.checks:
                writer.writerow([check.name, check.outcome.value, check.precision_bits or ""])
            writer.writerow(["verdict", report.verdict.value, ""])
        elif command == Command.NT:
            writer.writerow(["function", "argument", "value"])
            writer.writerow([report.function.value, report.argument, report.value])
        else:
            writer.writerow(self.WINDOW_HEADER if command == Command.WINDOWS else self.SCAN_HEADER)
            for row in report:
                writer.writerow([_float(v) for v in _dump(row).values()])
        return buffer.getvalue()


class TextRenderer(BaseRenderer):
    """Human-readable output; tables go through rich."""

    def _table(self, title: str, header: List[str], rows: List[List[str]]) -> str:
        table = Table(title=title)
        for name in header:
            table.add_column(name)
        for row in rows:
            table.add_row(*row)
        console = Console(file=io.StringIO(), width=120, color_system=None)
        console.print(table)
        return console.file.getvalue().rstrip("\n")

    def render(self, report: Report, command: Command) -> str:
        if command == Command.NT:
            return str(report.value)
        if command == Command.CERTIFY:
            return certificate_text(report)
        if command == Command.SEARCH:
            lines = [
                f"m = {report.m}, n <= {report.n_max}",
                f"candidates examined: {report.candidates_examined}",
            ]
            lines += [f"rejected ({key}): {count}" for key, count in report.rejections.items()]
            lines += [f"case {key}: {count}" for key, count in report.case_families.items()]
            lines.append(f"inconclusive: {report.inconclusive}")
            lines.append(f"survivors: {report.survivor_count}")
            lines += [f"  n={s.n} ({s.k1}, {s.k2}, {s.k3})" for s in report.survivors]
            return "\n".join(lines)

        rows = list(report)
        if not rows:
            return "(none)"
        if command == Command.WINDOWS:
            return self._table(
                "elliptic windows",
                CsvRenderer.WINDOW_HEADER,
                [[_float(w.lo), _float(w.hi)] for w in rows],
            )
        return self._table(
            "trace scan",
            CsvRenderer.SCAN_HEADER,
            [[_float(v) for v in _dump(r).values()] for r in rows],
        )


def get_renderer(output_format: Union[OutputFormat, str]) -> BaseRenderer:
    """Factory function to get renderer instance."""
    renderers: Dict[str, Type[BaseRenderer]] = {
        OutputFormat.JSON.value: JsonRenderer,
        OutputFormat.CSV.value: CsvRenderer,
        OutputFormat.TEXT.value: TextRenderer,
    }

    key = output_format.value if isinstance(output_format, OutputFormat) else output_format
    if key not in renderers:
        raise ValueError(f"Unsupported output format: {output_format}")

    return renderers[key]()
