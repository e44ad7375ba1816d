# SPDX-License-Identifier: Apache-2.0
"""Capacity maximization for MIMO links with movable transmit and receive antennas."""

import json

import numpy as np

from ._core import (
    CSV_HEADER,
    ConfigError,
    Error,
    Scene,
    channel,
    circle_packing,
    metrics,
    random_scene,
    run_scheme,
    water_filled_capacity,
)
from . import _core

__all__ = [
    "CSV_HEADER",
    "ConfigError",
    "Error",
    "Scene",
    "channel",
    "circle_packing",
    "metrics",
    "optimize",
    "random_scene",
    "run_scheme",
    "sweep",
    "trace",
    "water_filled_capacity",
]


def optimize(scene, tx, rx, power, noise_power=1.0, mode="full", eps1=1e-3, eps2=1e-3,
             max_outer_iters=100, max_sca_iters=100):
    """Optimize antenna positions and the transmit covariance; returns the report as a dict."""
    report = json.loads(_core._optimize_json(
        scene, np.asarray(tx, dtype=float).reshape(-1, 2), np.asarray(rx, dtype=float).reshape(-1, 2),
        power, noise_power, mode, eps1, eps2, max_outer_iters, max_sca_iters))
    report["tx_layout"] = np.asarray(report["tx_layout"], dtype=float).reshape(-1, 2)
    report["rx_layout"] = np.asarray(report["rx_layout"], dtype=float).reshape(-1, 2)
    cov = np.asarray(report["covariance"], dtype=float)
    report["covariance"] = cov[..., 0] + 1j * cov[..., 1]
    return report


def sweep(**config):
    """Scheme comparison as CSV text. Keyword arguments follow the experiment config keys."""
    return _core._sweep_csv(json.dumps(config))


def trace(**config):
    """Mean capacity per outer iteration as CSV text."""
    return _core._trace_csv(json.dumps(config))
