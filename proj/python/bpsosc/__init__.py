"""Uncoupled BPS structures: oscillators, Stokes data, RH problems and large-N limits."""

import json as _json

from ._bpsosc import (
    DivergenceError,
    Error,
    SectorError,
    SimpleOscillator,
    ValidationError,
    __version__,
    bernoulli,
    binet_bridge,
    binet_term,
    gv_coefficients,
    log_barnes_g,
    log_gamma,
    log_lambda,
    log_upsilon,
    polylog_neg,
    psi_limit,
    resum_check,
    run,
    task_names,
)
from ._bpsosc import load_scenario as _load_scenario


def load_scenario(path):
    """Returns (hash, resolved scenario dict, list of applied defaults)."""
    digest, resolved, defaults = _load_scenario(str(path))
    return digest, _json.loads(resolved), defaults
