"""Python front end to the qssp C++ core.

Instances, assignments and hypergraphs cross the boundary as the same JSON
documents the ``qssp`` CLI reads and writes.
"""

from __future__ import annotations

import json
from os import PathLike
from typing import Any, Optional, Union

from . import _core
from ._core import ConfigError, IoError, ParseError, SolverRefusal

__all__ = [
    "ConfigError",
    "IoError",
    "ParseError",
    "SolverRefusal",
    "brute_force_3dm",
    "footprint_radius",
    "photon_number_dist",
    "reduce_3dm",
    "run_scenario",
    "solve",
]

Json = Union[str, dict]


def _dump(doc: Json) -> str:
    return doc if isinstance(doc, str) else json.dumps(doc)


def solve(instance: Json, solver: str = "greedy_backoff", seed: int = 0) -> dict[str, Any]:
    """Solve one slot; returns {"objective", "assignment": [...]}."""
    return json.loads(_core.solve(_dump(instance), solver, seed))


def reduce_3dm(hypergraph: Json) -> dict[str, Any]:
    """QSSP instance and hyperedge correspondence for a 3D-matching instance."""
    return json.loads(_core.reduce_3dm(_dump(hypergraph)))


def brute_force_3dm(hypergraph: Json) -> int:
    return _core.brute_force_3dm(_dump(hypergraph))


def run_scenario(
    config_path: Union[str, PathLike],
    solver: Optional[str] = None,
    out_dir: Union[str, PathLike, None] = None,
) -> dict[str, Any]:
    """Run a scenario, write its CSV tables and return a summary."""
    return json.loads(
        _core.run_scenario(str(config_path), solver, None if out_dir is None else str(out_dir))
    )


photon_number_dist = _core.photon_number_dist
footprint_radius = _core.footprint_radius
