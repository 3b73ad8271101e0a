"""Optimal multiple stopping for insurance claims (Python front end)."""

from ._mstop import (  # noqa: F401
    ConfigError,
    NumericalError,
    bessel_k,
    experiment,
    fit_expansion,
    ig_cdf,
    run_rule,
    threshold,
    value_table,
)
