"""
Data models for verification reports.
Provides structured records of property checks and their serialization.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional
import json

import pandas as pd

@dataclass
class CheckRecord:
    """Result of one property check."""

    check_id: str
    anchor: str
    samples: int
    residual: float
    tolerance: float
    # "le": pass iff residual <= tolerance; "gt": pass iff residual > tolerance
    comparison: str = "le"
    note: Optional[str] = None

    @property
    def passed(self) -> bool:
        """Check if this check passed."""
        if self.comparison == "gt":
            return bool(self.residual > self.tolerance)
        return bool(self.residual <= self.tolerance)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "check_id": self.check_id,
            "anchor": self.anchor,
            "samples": self.samples,
            "residual": float(self.residual),
            "tolerance": float(self.tolerance),
            "comparison": self.comparison,
            "passed": self.passed,
            "note": self.note,
        }

@dataclass
class SuiteReport:
    """Outcome of a suite run: check records, optional value table, timing."""

    command: str
    config: Dict[str, Any]
    records: List[CheckRecord] = field(default_factory=list)
    rows: List[Dict[str, Any]] = field(default_factory=list)
    timing: Dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        """Check if all records passed."""
        return all(record.passed for record in self.records)

    @property
    def failed_checks(self) -> List[str]:
        return [record.check_id for record in self.records if not record.passed]

    def add(self, record: CheckRecord) -> CheckRecord:
        self.records.append(record)
        return record

    def body(self) -> Dict[str, Any]:
        """Everything except timing; identical across runs with the same seed."""
        return {
            "command": self.command,
            "config": self.config,
            "passed": self.passed,
            "checks": [record.to_dict() for record in self.records],
            "rows": self.rows,
        }

    def to_json(self, include_timing: bool = True) -> str:
        """Structured tree rendering."""
        data = self.body()
        if include_timing:
            data["timing"] = self.timing
        return json.dumps(data, indent=2)

    def to_frame(self) -> pd.DataFrame:
        """Check records as a flat table."""
        return pd.DataFrame([record.to_dict() for record in self.records])

    def to_table(self) -> str:
        """Comma-separated rendering: the check table, then the value table if any."""
        text = self.to_frame().to_csv(index=False)
        if self.rows:
            text += "\n" + pd.DataFrame(self.rows).to_csv(index=False)
        return text

    def render(self, output_format: str) -> str:
        return self.to_table() if output_format == "table" else self.to_json()
