from datetime import datetime

from app.simulation.experiments import constant_force_experiment, run_time_dilation
from app.utils.file_utils import dilation_frame, force_frame
from app.utils.pdf_utils import markdown_to_pdf_bytes
from app.utils.report_builder import build_experiment_report, frame_to_markdown, summarize_errors


class TestBuildExperimentReport:
    def test_sections(self):
        frame = dilation_frame(run_time_dilation(0.5, 10, 7))
        report = build_experiment_report(
            "Time dilation", {"beta": 0.5, "tau_R": 10}, frame, generated_at=datetime(2025, 1, 2, 3, 4, 5)
        )
        assert report.startswith("# Time dilation\n")
        assert "*Generated on 2025-01-02 03:04:05*" in report
        assert "- **beta:** 0.5" in report
        assert "| 1 | 0.5 | 1.2 | 1.12 | 7.33 | 1.0 |" in report
        assert "- **max err%:** 7.33 (Tw=1)" in report

    def test_force_report_with_trace(self):
        rows, trace = constant_force_experiment(1, 1, 10, 8)
        report = build_experiment_report("Constant force", {"t_i": 1}, force_frame(rows), trace)
        assert "- **max v_err%:** 16.86 (Tw=1)" in report
        assert "- **max E_err%:** 2.1 (Tw=8)" in report
        assert "- **p0:** 8 carrier(s) realized, 0 dropped" in report
        assert "- **final lab node:** 88" in report


class TestHelpers:
    def test_markdown_table(self):
        frame = dilation_frame(run_time_dilation(0.0, 10, 1))
        assert frame_to_markdown(frame).splitlines()[:2] == ["| Tw | x | t | ta | err% | tp |", "|---|---|---|---|---|---|"]

    def test_no_error_columns(self):
        import pandas as pd

        assert summarize_errors(pd.DataFrame({"Tw": ["1"]})) == "(no error columns)"


class TestPdfExport:
    def test_renders_report(self):
        frame = dilation_frame(run_time_dilation(0.5, 10, 3))
        pdf = markdown_to_pdf_bytes(build_experiment_report("Time dilation", {"beta": 0.5}, frame), title="Time dilation")
        assert pdf.startswith(b"%PDF")
