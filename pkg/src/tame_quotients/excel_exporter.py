"""
Excel export of sweep results.

Writes a workbook with a styled Summary sheet (one row per suite) and a
Failures sheet listing every recorded failed trial.
"""

import logging
from io import BytesIO
from pathlib import Path
from typing import Union

import pandas as pd
from openpyxl.styles import Alignment, Font, PatternFill

from .models import SweepReport
from .sweep import failures_frame, summary_frame

logger = logging.getLogger(__name__)


class ExcelExporter:
    """
    Handles Excel report generation for sweep reports.

    Creates a formatted workbook with a header style, pass/fail fills and
    fixed column widths.
    """

    # Styling constants
    HEADER_FILL = PatternFill(start_color="366092", end_color="366092", fill_type="solid")
    HEADER_FONT = Font(bold=True, color="FFFFFF", size=11)
    PASS_FILL = PatternFill(start_color="d4edda", end_color="d4edda", fill_type="solid")
    FAIL_FILL = PatternFill(start_color="f8d7da", end_color="f8d7da", fill_type="solid")
    COLUMN_WIDTH_LABEL = 20
    COLUMN_WIDTH_VALUE = 12
    COLUMN_WIDTH_TEXT = 80

    @staticmethod
    def create_report(report: SweepReport) -> BytesIO:
        """
        Generate the sweep workbook.

        Args:
            report: Completed sweep report

        Returns:
            BytesIO: Excel file as bytes buffer

        Example:
            >>> buffer = ExcelExporter.create_report(run_sweep(models=10))
            >>> Path("sweep.xlsx").write_bytes(buffer.getvalue())
        """
        logger.info(f"Generating Excel report for sweep seed {report.seed}")

        df_summary = summary_frame(report)
        df_failures = failures_frame(report)
        df_run = pd.DataFrame(
            [("Seed", report.seed), ("All passed", "yes" if report.all_passed else "no")],
            columns=["Parameter", "Value"],
        )

        output = BytesIO()
        with pd.ExcelWriter(output, engine="openpyxl") as writer:
            df_summary.to_excel(writer, index=False, sheet_name="Summary")
            df_failures.to_excel(writer, index=False, sheet_name="Failures")
            df_run.to_excel(writer, index=False, sheet_name="Details")

            workbook = writer.book
            ExcelExporter._apply_styling(workbook["Summary"], df_summary)
            ExcelExporter._mark_results(workbook["Summary"], df_summary)
            ExcelExporter._apply_styling(workbook["Failures"], df_failures)
            workbook["Failures"].column_dimensions["B"].width = ExcelExporter.COLUMN_WIDTH_TEXT
            ExcelExporter._apply_styling(workbook["Details"], df_run)

        output.seek(0)
        logger.info("Excel report generated successfully")
        return output

    @staticmethod
    def _apply_styling(worksheet, df: pd.DataFrame) -> None:
        """
        Apply header styling and column widths.

        Args:
            worksheet: openpyxl worksheet object
            df: DataFrame written to the sheet
        """
        for index, _ in enumerate(df.columns):
            letter = chr(ord("A") + index)
            width = ExcelExporter.COLUMN_WIDTH_LABEL if index == 0 else ExcelExporter.COLUMN_WIDTH_VALUE
            worksheet.column_dimensions[letter].width = width

        for cell in worksheet[1]:
            cell.fill = ExcelExporter.HEADER_FILL
            cell.font = ExcelExporter.HEADER_FONT
            cell.alignment = Alignment(horizontal="center", vertical="center")

        logger.debug("Styling applied to Excel worksheet")

    @staticmethod
    def _mark_results(worksheet, df: pd.DataFrame) -> None:
        """Fill each suite row green when every trial passed, red otherwise."""
        for row_idx, failed in enumerate(df["Failed"], start=2):
            fill = ExcelExporter.PASS_FILL if failed == 0 else ExcelExporter.FAIL_FILL
            for cell in worksheet[row_idx]:
                cell.fill = fill


def export_to_excel(report: SweepReport, path: Union[str, Path]) -> Path:
    """
    Write the sweep workbook to ``path``.

    Args:
        report: Sweep report
        path: Destination file

    Returns:
        Path: The written file
    """
    target = Path(path)
    target.write_bytes(ExcelExporter.create_report(report).getvalue())
    logger.info(f"Sweep workbook written to {target}")
    return target
