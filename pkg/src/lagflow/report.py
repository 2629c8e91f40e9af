"""Machine-readable experiment outcomes.

An :class:`ExperimentReport` is the one result type every suite and solver
experiment produces: an id, the seed, the parameters that shaped the run, a
flat metric map, and a pass flag that is a pure function of the metrics and
the thresholds table.  ``runtime_ms`` is informational and never serialized
into report rows, so identical (config, seed) runs serialize identically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping


@dataclass(frozen=True)
class ExperimentReport:
    experiment_id: str
    seed: int
    parameters: Mapping[str, object] = field(default_factory=dict)
    metrics: Mapping[str, float] = field(default_factory=dict)
    passed: bool = True
    runtime_ms: float = 0.0

    def rows(self) -> list[tuple[str, str, float, float | None, bool | None]]:
        """CSV rows: (experiment_id, metric, value, threshold, pass).

        Threshold/pass come from ``self.checks`` entries recorded in
        ``parameters['_checks']`` by the producing experiment; metrics without
        a check are informational (empty threshold and pass columns).
        """
        checks: Mapping[str, tuple[float, bool]] = self.parameters.get("_checks", {})  # type: ignore[assignment]
        out: list[tuple[str, str, float, float | None, bool | None]] = []
        for name, value in self.metrics.items():
            if name in checks:
                threshold, ok = checks[name]
                out.append((self.experiment_id, name, value, threshold, ok))
            else:
                out.append((self.experiment_id, name, value, None, None))
        out.append((self.experiment_id, "pass", 1.0 if self.passed else 0.0, 1.0, self.passed))
        return out


def make_report(
    experiment_id: str,
    seed: int,
    parameters: dict[str, object],
    metrics: dict[str, float],
    checks: dict[str, tuple[float, bool]],
    runtime_ms: float,
) -> ExperimentReport:
    """Assemble a report whose pass flag is the conjunction of its checks."""
    params = dict(parameters)
    params["_checks"] = dict(checks)
    passed = all(ok for _, ok in checks.values())
    return ExperimentReport(
        experiment_id=experiment_id,
        seed=seed,
        parameters=params,
        metrics=dict(metrics),
        passed=passed,
        runtime_ms=runtime_ms,
    )
