"""
PDF export of experiment reports.

Renders the Markdown produced by report_builder with fpdf2: headings,
bullets, plain text and pipe tables (drawn as real tables).
"""
import re
from typing import Optional

from fpdf import FPDF

from app.utils.logger import logger

_BOLD = re.compile(r"\*\*(.+?)\*\*")
_ITALIC = re.compile(r"\*(.+?)\*")


def _sanitize_text(line: str) -> str:
    """Core PDF fonts are latin-1 only; drop markdown emphasis and other characters."""
    line = _ITALIC.sub(r"\1", _BOLD.sub(r"\1", line))
    return "".join(ch if 32 <= ord(ch) <= 126 else " " for ch in line)


def _table_cells(line: str) -> list[str]:
    return [cell.strip() for cell in line.strip().strip("|").split("|")]


def _is_rule(line: str) -> bool:
    return set(line.strip()) <= set("|-: ")


class ReportPDF(FPDF):
    """Simple PDF renderer for experiment reports."""

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.set_auto_page_break(auto=True, margin=15)
        self.set_margins(left=15, top=15, right=15)
        self.add_page()
        self.set_font("Helvetica", size=11)

    def add_table(self, rows: list[list[str]]):
        self.set_font("Helvetica", size=9)
        with self.table(text_align="RIGHT", first_row_as_headings=True) as table:
            for cells in rows:
                row = table.row()
                for cell in cells:
                    row.cell(_sanitize_text(cell))
        self.set_font("Helvetica", size=11)
        self.ln(2)

    def add_markdown(self, text: str):
        table: list[list[str]] = []
        for raw_line in text.splitlines():
            line = raw_line.rstrip()

            if line.startswith("|"):
                if not _is_rule(line):
                    table.append(_table_cells(line))
                continue
            if table:
                self.add_table(table)
                table = []

            line = _sanitize_text(line)
            if not line or line == "---":
                self.ln(4)
            elif line.startswith("# "):
                self.set_font("Helvetica", "B", 16)
                self.multi_cell(0, 8, line[2:].strip(), new_x="LMARGIN", new_y="NEXT")
                self.ln(2)
                self.set_font("Helvetica", size=11)
            elif line.startswith("## "):
                self.set_font("Helvetica", "B", 13)
                self.multi_cell(0, 7, line[3:].strip(), new_x="LMARGIN", new_y="NEXT")
                self.ln(2)
                self.set_font("Helvetica", size=11)
            else:
                self.multi_cell(0, 5, line, new_x="LMARGIN", new_y="NEXT")
        if table:
            self.add_table(table)


def markdown_to_pdf_bytes(markdown_text: str, title: Optional[str] = None) -> bytes:
    """Convert a report to PDF and return the PDF as bytes."""
    pdf = ReportPDF()
    if title:
        pdf.set_title(title)
    try:
        pdf.add_markdown(markdown_text)
    except Exception as e:
        logger.error(f"Error rendering PDF report: {e}", exc_info=True)
        raise
    return bytes(pdf.output())
