"""
Instance files, run reports and the command implementations behind `vi`
"""

from src.cli.commands import (
    EXAMPLES,
    PROPERTIES,
    Overrides,
    cmd_canonicalize,
    cmd_check,
    cmd_export_gap_field,
    cmd_fixed_point,
    cmd_reproduce,
    cmd_solve,
    gap_field_frame,
)
from src.cli.instance_file import (
    InstanceFile,
    LoadedInstance,
    canonical_json,
    field_from_spec,
    instance_digest,
    load_instance,
    parse_instance_text,
    resolve_instance,
)
from src.cli.report import EXIT_ERROR, EXIT_NEGATIVE, EXIT_OK, RunReport, error_report

__all__ = [
    "EXAMPLES", "PROPERTIES", "Overrides", "cmd_canonicalize", "cmd_check", "cmd_export_gap_field",
    "cmd_fixed_point", "cmd_reproduce", "cmd_solve", "gap_field_frame",
    "InstanceFile", "LoadedInstance", "canonical_json", "field_from_spec", "instance_digest",
    "load_instance", "parse_instance_text", "resolve_instance",
    "EXIT_ERROR", "EXIT_NEGATIVE", "EXIT_OK", "RunReport", "error_report",
]
