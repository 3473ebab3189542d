"""
Benchmark records and their CSV/JSON report files.

The CSV holds only the columns that are reproducible run to run; wall
clock columns go to a `<out>.timings.csv` sidecar keyed by record index.
"""

import csv
import json
import logging
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import List, Optional

from django.core.serializers.json import DjangoJSONEncoder
from django.utils import timezone
from rest_framework import serializers

from apps.core.exceptions import UsageError

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
CSV = "csv"
JSON = "json"
REPORT_FORMATS = (CSV, JSON)

STATUS_OK = "ok"
STATUS_NON_CONVERGENCE = "non_convergence"

TIMING_FIELDS = (
    "qr_seconds",
    "chol_seconds",
    "combine_seconds",
    "eig_seconds",
    "total_seconds",
    "reference_seconds",
    "load_balance",
)


@dataclass
class BenchRecord:
    """
    One benchmark run. Fields that do not apply to a suite stay None.
    """

    suite: str
    matrix_id: str
    m: int
    n: int
    kappa: Optional[float]
    method: str
    r: int = 1
    nb: Optional[int] = None
    workers: Optional[int] = None
    passes: Optional[int] = None
    predicted_passes: Optional[int] = None
    bounds_source: str = ""
    res: Optional[float] = None
    orth_l: Optional[float] = None
    orth_r: Optional[float] = None
    min_eigenvalue: Optional[float] = None
    fallback_count: int = 0
    flops_mults: Optional[int] = None
    flops_adds: Optional[int] = None
    flops_reference: Optional[int] = None
    equivalence_error: Optional[float] = None
    status: str = STATUS_OK
    schema_version: int = SCHEMA_VERSION
    qr_seconds: float = 0.0
    chol_seconds: float = 0.0
    combine_seconds: float = 0.0
    eig_seconds: float = 0.0
    total_seconds: float = 0.0
    reference_seconds: float = 0.0
    load_balance: Optional[float] = None
    created_at: str = field(default_factory=lambda: timezone.now().isoformat())

    @classmethod
    def deterministic_fields(cls) -> List[str]:
        return [f.name for f in fields(cls) if f.name not in TIMING_FIELDS and f.name != "created_at"]

    def as_dict(self) -> dict:
        return asdict(self)


class BenchRecordSerializer(serializers.Serializer):
    """
    Validates a record before it is written or persisted.
    """

    suite = serializers.CharField()
    matrix_id = serializers.CharField()
    m = serializers.IntegerField(min_value=1)
    n = serializers.IntegerField(min_value=1)
    kappa = serializers.FloatField(min_value=1.0, allow_null=True)
    method = serializers.CharField()
    r = serializers.IntegerField(min_value=1, max_value=8)
    nb = serializers.IntegerField(min_value=1, allow_null=True)
    workers = serializers.IntegerField(min_value=1, allow_null=True)
    passes = serializers.IntegerField(min_value=0, allow_null=True)
    predicted_passes = serializers.IntegerField(min_value=0, allow_null=True)
    bounds_source = serializers.CharField(allow_blank=True)
    res = serializers.FloatField(min_value=0.0, allow_null=True)
    orth_l = serializers.FloatField(min_value=0.0, allow_null=True)
    orth_r = serializers.FloatField(min_value=0.0, allow_null=True)
    min_eigenvalue = serializers.FloatField(allow_null=True)
    fallback_count = serializers.IntegerField(min_value=0)
    flops_mults = serializers.IntegerField(min_value=0, allow_null=True)
    flops_adds = serializers.IntegerField(min_value=0, allow_null=True)
    flops_reference = serializers.IntegerField(min_value=0, allow_null=True)
    equivalence_error = serializers.FloatField(min_value=0.0, allow_null=True)
    status = serializers.ChoiceField(choices=[STATUS_OK, STATUS_NON_CONVERGENCE])
    schema_version = serializers.IntegerField()
    qr_seconds = serializers.FloatField(min_value=0.0)
    chol_seconds = serializers.FloatField(min_value=0.0)
    combine_seconds = serializers.FloatField(min_value=0.0)
    eig_seconds = serializers.FloatField(min_value=0.0)
    total_seconds = serializers.FloatField(min_value=0.0)
    reference_seconds = serializers.FloatField(min_value=0.0)
    load_balance = serializers.FloatField(min_value=0.0, allow_null=True)
    created_at = serializers.CharField()


@dataclass
class BenchReport:
    suite: str
    records: List[BenchRecord] = field(default_factory=list)

    def add(self, record: BenchRecord) -> BenchRecord:
        serializer = BenchRecordSerializer(data=record.as_dict())
        serializer.is_valid(raise_exception=True)
        self.records.append(record)
        return record

    def extend(self, records) -> None:
        for record in records:
            self.add(record)

    def as_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "suite": self.suite,
            "records": [record.as_dict() for record in self.records],
        }

    def write(self, path, fmt: str = CSV) -> List[Path]:
        """
        Write the report and return every file written.
        """
        if fmt not in REPORT_FORMATS:
            raise UsageError(f"Unknown report format {fmt!r}, expected one of {REPORT_FORMATS}.")
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        if fmt == JSON:
            written = [self._write_json(path)]
        else:
            written = [self._write_csv(path), self._write_timings(timings_path(path))]
        logger.info("Wrote %s report (%d records) to %s", self.suite, len(self.records), path)
        return written

    def _write_json(self, path: Path) -> Path:
        with path.open("w", encoding="utf-8") as handle:
            json.dump(self.as_dict(), handle, cls=DjangoJSONEncoder, indent=2)
            handle.write("\n")
        return path

    def _write_csv(self, path: Path) -> Path:
        columns = BenchRecord.deterministic_fields()
        with path.open("w", encoding="utf-8", newline="") as handle:
            writer = csv.DictWriter(handle, fieldnames=columns, lineterminator="\n")
            writer.writeheader()
            for record in self.records:
                data = record.as_dict()
                writer.writerow({column: _cell(data[column]) for column in columns})
        return path

    def _write_timings(self, path: Path) -> Path:
        columns = ["index", *TIMING_FIELDS, "created_at"]
        with path.open("w", encoding="utf-8", newline="") as handle:
            writer = csv.DictWriter(handle, fieldnames=columns, lineterminator="\n")
            writer.writeheader()
            for index, record in enumerate(self.records):
                data = record.as_dict()
                writer.writerow({"index": index, **{column: _cell(data[column]) for column in columns[1:]}})
        return path


def timings_path(path) -> Path:
    path = Path(path)
    return path.with_name(f"{path.name}.timings.csv")


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return value
