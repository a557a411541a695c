"""Deterministic JSON certificates for the command-line checks.

A certificate is a plain JSON object with sorted keys: tool version, the
command and its inputs, one result block per check (status PASS, FAIL, or
UNDECIDED plus a structured payload), and the caveat list.  All rationals
are rendered ``a/b`` (or ``a``), all polynomials in the canonical term
order, and collections are sorted before rendering, so byte-identical runs
produce byte-identical certificates.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping

from . import __version__
from .annihilation import FiniteLieAlgebra
from .conformal import ConformalAlgebra
from .poly import Poly
from .serialize import poly_str, rat_str

PASS = "PASS"
FAIL = "FAIL"
UNDECIDED = "UNDECIDED"


@dataclass
class CheckResult:
    name: str
    status: str
    payload: dict[str, Any] = field(default_factory=dict)


@dataclass
class Certificate:
    command: str
    inputs: dict[str, Any]
    results: list[CheckResult] = field(default_factory=list)
    caveats: list[str] = field(default_factory=list)
    tool_version: str = __version__

    def add(self, name: str, status: str, payload: dict[str, Any] | None = None) -> None:
        self.results.append(CheckResult(name, status, payload or {}))

    @property
    def exit_code(self) -> int:
        return 1 if any(r.status == FAIL for r in self.results) else 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "tool": "confal",
            "tool_version": self.tool_version,
            "command": self.command,
            "inputs": self.inputs,
            "results": [
                {"name": r.name, "status": r.status, "payload": r.payload}
                for r in self.results
            ],
            "caveats": list(self.caveats),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def combo_payload(combo: Mapping[int, Poly], names: tuple[str, ...]) -> dict[str, str]:
    """Render a generator-indexed polynomial combination for a payload."""
    return {
        names[k]: poly_str(v)
        for k, v in sorted(combo.items())
        if not v.is_zero()
    }


def lincomb_payload(comb: Mapping[str, Fraction]) -> dict[str, str]:
    return {label: rat_str(c) for label, c in sorted(comb.items()) if c}


def conformal_table_hash(alg: ConformalAlgebra) -> str:
    data = {
        f"{i},{j}": {str(k): poly_str(v) for k, v in sorted(entry.items())}
        for (i, j), entry in sorted(alg.structure.items())
    }
    blob = json.dumps(data, sort_keys=True).encode("utf-8")
    return hashlib.sha256(blob).hexdigest()


def lie_table_hash(alg: FiniteLieAlgebra) -> str:
    data = {
        f"{x}|{y}": {label: rat_str(c) for label, c in sorted(entry.items())}
        for (x, y), entry in sorted(alg.table.items())
    }
    blob = json.dumps(data, sort_keys=True).encode("utf-8")
    return hashlib.sha256(blob).hexdigest()
