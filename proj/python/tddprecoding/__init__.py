"""Multiuser TDD downlink precoding simulator."""

from ._core import (
    ConfigError,
    GzfPrecoder,
    RateReport,
    Scheme,
    SingularChannelError,
    SystemConfig,
    build_gzf,
    db_to_linear,
    draw_estimate,
    evaluate_scheme,
    evaluate_scheme_bound,
    linear_to_db,
    make_homogeneous,
    optimize_precoder_params,
    reproduce_table1,
    run_scenario,
    set_thread_count,
    validate_config,
)

__all__ = [
    "ConfigError",
    "GzfPrecoder",
    "RateReport",
    "Scheme",
    "SingularChannelError",
    "SystemConfig",
    "build_gzf",
    "db_to_linear",
    "draw_estimate",
    "evaluate_scheme",
    "evaluate_scheme_bound",
    "linear_to_db",
    "make_homogeneous",
    "optimize_precoder_params",
    "reproduce_table1",
    "run_scenario",
    "set_thread_count",
    "validate_config",
]
