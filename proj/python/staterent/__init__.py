# Copyright 2026 The staterent Authors
# SPDX-License-Identifier: Apache-2.0
"""Storage-rent simulator for trie-based blockchain state."""

import json as _json

from ._staterent import (
    ConfigError,
    RentComputation,
    RentParams,
    SnapshotError,
    StateTrie,
    StructureError,
    compute_rent,
    missing_key_penalty,
    one_year_rent,
    rent_due,
    run_scenario_json,
)


def run_scenario(yaml_text: str) -> dict:
    """Run a scenario config and return its metrics as a dict."""
    return _json.loads(run_scenario_json(yaml_text))


__all__ = [
    "ConfigError",
    "RentComputation",
    "RentParams",
    "SnapshotError",
    "StateTrie",
    "StructureError",
    "compute_rent",
    "missing_key_penalty",
    "one_year_rent",
    "rent_due",
    "run_scenario",
    "run_scenario_json",
]
