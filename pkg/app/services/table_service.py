"""
表格渲染服务 - text / csv / latex / json

同一输入总是得到逐字节相同的输出：JSON 按键排序，表格行按固定顺序输出。
"""
import csv
import io
import json
import logging
from typing import Dict, List, Sequence, Tuple

from jinja2 import Environment, StrictUndefined
from pydantic import BaseModel

from app.core.utils import format_cell, format_positions
from app.schemas import CheckReport, PartitionTable, SeriesTable
from utils.exceptions import UsageError

logger = logging.getLogger(__name__)

_LATEX = Environment(
    block_start_string="<%",
    block_end_string="%>",
    variable_start_string="<<",
    variable_end_string=">>",
    comment_start_string="<#",
    comment_end_string="#>",
    trim_blocks=True,
    lstrip_blocks=True,
    keep_trailing_newline=True,
    undefined=StrictUndefined,
)

_TABULAR = _LATEX.from_string(
    r"""% << caption >>
\begin{tabular}{<< align >>}
\hline
<< header | join(" & ") >> \\
\hline
<% for row in rows %>
<< row | join(" & ") >> \\
<% endfor %>
\hline
\end{tabular}
"""
)


# ==================== 通用工具 ====================

def render_json(payload: BaseModel) -> str:
    return json.dumps(payload.model_dump(by_alias=True), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def render_csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def render_text(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    cells = [[format_cell(c) for c in header]] + [[format_cell(c) for c in row] for row in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(header))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(row, widths)).rstrip() for row in cells]
    return "\n".join(lines) + "\n"


def _latex_escape(value) -> str:
    text = format_cell(value)
    for char in ("&", "%", "#", "_"):
        text = text.replace(char, "\\" + char)
    return text


def render_latex(caption: str, header: Sequence[str], rows: Sequence[Sequence]) -> str:
    return _TABULAR.render(
        caption=caption,
        align="r" * len(header),
        header=[_latex_escape(h) for h in header],
        rows=[[_latex_escape(c) for c in row] for row in rows],
    )


# ==================== 级数表 ====================

def series_grid(table: SeriesTable) -> Tuple[List[str], List[List[int]]]:
    """(d × p) 表：行为次数 d，列为 perversity p"""
    coefficients: Dict[Tuple[int, int], int] = {(t.d, t.p): t.c for t in table.terms}
    top_d = max((t.d for t in table.terms), default=0)
    top_p = max((t.p for t in table.terms), default=0)
    header = ["d"] + [f"p={p}" for p in range(top_p + 1)]
    rows = [[d] + [coefficients.get((d, p), 0) for p in range(top_p + 1)] for d in range(top_d + 1)]
    return header, rows


def render_series(table: SeriesTable, fmt: str) -> str:
    if fmt == "json":
        return render_json(table)
    if fmt == "csv":
        return render_csv(["d", "p", "c"], [[t.d, t.p, t.c] for t in table.terms])
    header, rows = series_grid(table)
    if fmt == "latex":
        caption = f"{table.kind} {table.model} n={table.n}"
        betti = [["betti"] + [" ".join(str(b) for b in table.betti)] + [""] * (len(header) - 2)]
        return render_latex(caption, header, rows + betti)
    lefschetz = "symmetric" if table.lefschetz_symmetric else "broken at " + format_positions(table.lefschetz_mismatches)
    lines = [
        f"series: {table.kind}  model: {table.model}  n: {table.n}",
        render_text(header, rows).rstrip("\n"),
        "betti: " + " ".join(str(b) for b in table.betti),
        f"total: {table.total_dimension}",
        f"lefschetz: {lefschetz}",
    ]
    return "\n".join(lines) + "\n"


# ==================== 分拆表 ====================

_PARTITION_HEADER = ["partition", "length", "gcd", "torsion_count", "class_size", "kernel_dimension"]


def render_partitions(table: PartitionTable, fmt: str) -> str:
    if fmt == "json":
        return render_json(table)
    rows = [[getattr(row, name) for name in _PARTITION_HEADER] for row in table.rows]
    if fmt == "csv":
        return render_csv(_PARTITION_HEADER, rows)
    if fmt == "latex":
        return render_latex(f"partitions {table.model} n={table.n}", _PARTITION_HEADER, rows)
    return f"partitions: {table.model}  n: {table.n}  count: {table.count}\n" + render_text(_PARTITION_HEADER, rows)


# ==================== 检查报告 ====================

_VIOLATION_HEADER = ["alpha", "beta", "lambda", "sigma_tau", "p_alpha", "p_beta", "p_gamma"]


def _violation_rows(report: CheckReport) -> List[List]:
    rows = []
    for v in report.violations:
        data = v.model_dump(by_alias=True)
        rows.append([data[name] for name in _VIOLATION_HEADER])
    return rows


def render_report(report: CheckReport, fmt: str) -> str:
    if fmt == "json":
        return render_json(report)
    rows = _violation_rows(report)
    if fmt == "csv":
        return render_csv(_VIOLATION_HEADER, rows)
    if fmt == "latex":
        summary = [[report.check, report.model, report.n, report.mode, report.pairs_checked, report.violation_count]]
        return render_latex(
            f"check {report.check}",
            ["check", "model", "n", "mode", "pairs", "violations"],
            summary,
        )
    status = "PASS" if report.passed else "FAIL"
    lines = [
        f"check: {report.check}  model: {report.model}  n: {report.n}  mode: {report.mode}",
        f"pairs_checked: {report.pairs_checked}",
        f"violations: {report.violation_count}",
        f"status: {status}",
    ]
    if report.seed is not None:
        lines.append(f"seed: {report.seed}")
    if rows:
        lines.append(render_text(_VIOLATION_HEADER, rows).rstrip("\n"))
    return "\n".join(lines) + "\n"


def render(payload: BaseModel, fmt: str) -> str:
    """
    按载荷类型与格式选择渲染器

    Raises:
        UsageError: 未知格式或载荷
    """
    if fmt not in ("json", "csv", "latex", "text"):
        raise UsageError(f"unknown format {fmt!r}", "expected json, csv, latex or text")
    logger.debug("rendering %s as %s", type(payload).__name__, fmt)
    if isinstance(payload, SeriesTable):
        return render_series(payload, fmt)
    if isinstance(payload, PartitionTable):
        return render_partitions(payload, fmt)
    if isinstance(payload, CheckReport):
        return render_report(payload, fmt)
    raise UsageError(f"cannot render {type(payload).__name__}")
