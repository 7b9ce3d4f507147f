"""Config-driven experiment runner, reports and charts."""

from .chart import emit_chart, render_svg
from .config import ExperimentConfig, load_config
from .report import Summary, report, write_paired, write_summary
from .runner import (
    RECORDS_HEADER,
    TrialRecord,
    materialize_trial,
    read_records,
    records_to_csv,
    run_experiment,
    run_trial,
    write_records,
)

__all__ = [
    "ExperimentConfig",
    "RECORDS_HEADER",
    "Summary",
    "TrialRecord",
    "emit_chart",
    "load_config",
    "materialize_trial",
    "read_records",
    "records_to_csv",
    "render_svg",
    "report",
    "run_experiment",
    "run_trial",
    "write_paired",
    "write_records",
    "write_summary",
]
