"""Check results, canonical JSON / CSV writers and golden-file comparison."""
import csv
import json
import os
from dataclasses import dataclass, field

from hopf_cohomology.exceptions import CheckFailure, GoldenMismatch

CSV_FIELDS = ("spec", "g", "h", "n", "degree", "dim")


@dataclass
class CheckResult:
    """Outcome of a structural check; falsy when the property failed, with the first witness."""

    name: str
    ok: bool = True
    witness: str = ""
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return bool(self.ok)

    @classmethod
    def failed(cls, name, witness, **details):
        return cls(name, False, witness, details)

    def raise_for_failure(self):
        if not self.ok:
            raise CheckFailure(self.name, self.witness)
        return self

    def to_json(self):
        data = {"check": self.name, "ok": bool(self.ok)}
        if self.witness:
            data["witness"] = self.witness
        if self.details:
            data["details"] = _jsonable(self.details)
        return data


def _jsonable(value):
    if hasattr(value, "to_json"):
        return value.to_json()
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def as_data(report):
    """JSON-ready form of a report object (anything with ``to_json``), a dict or a list."""
    return _jsonable(report)


def canonical_json(report):
    """Byte-stable serialisation: sorted keys, fixed separators, trailing newline."""
    return json.dumps(as_data(report), sort_keys=True, indent=2, separators=(",", ": "), ensure_ascii=False) + "\n"


def write_json(report, path):
    text = canonical_json(report)
    if path in (None, "-"):
        print(text, end="")
        return text
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)
    return text


def report_rows(report):
    """One flat row per cohomology entry."""
    data = as_data(report)
    for entry in data.get("entries", []):
        yield {
            "spec": data.get("spec", ""),
            "g": entry["g"],
            "h": entry["h"],
            "n": entry["n"],
            "degree": " ".join(str(d) for d in entry["degree"]),
            "dim": entry["dim"],
        }


def write_csv(report, path):
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=CSV_FIELDS, lineterminator="\n")
        writer.writeheader()
        for row in report_rows(report):
            writer.writerow(row)


def structural_diff(left, right, path="$"):
    """Paths (``$.entries[3].dim``) where two JSON values differ."""
    if isinstance(left, dict) and isinstance(right, dict):
        diffs = []
        for key in sorted(set(left) | set(right)):
            sub = f"{path}.{key}"
            if key not in left or key not in right:
                diffs.append(sub)
            else:
                diffs.extend(structural_diff(left[key], right[key], sub))
        return diffs
    if isinstance(left, list) and isinstance(right, list):
        diffs = []
        for i, (a, b) in enumerate(zip(left, right)):
            diffs.extend(structural_diff(a, b, f"{path}[{i}]"))
        for i in range(min(len(left), len(right)), max(len(left), len(right))):
            diffs.append(f"{path}[{i}]")
        return diffs
    return [] if left == right else [path]


def golden_compare(report, golden_path):
    """Diff of ``report`` against the canonical report stored at ``golden_path`` (empty when identical)."""
    with open(golden_path, "r", encoding="utf-8") as f:
        golden = json.load(f)
    current = json.loads(canonical_json(report))
    return structural_diff(golden, current)


def require_golden(report, golden_path):
    diff = golden_compare(report, golden_path)
    if diff:
        raise GoldenMismatch(diff)
    return diff
