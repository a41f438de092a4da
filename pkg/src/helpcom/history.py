"""Per-method change history mined from git, plus engagement summaries.

History comes from ``git log -L <start>,<end>:<file>`` run at the
repository root, with the line range taken from the current working-tree
snapshot. Commit identity is the ``commit`` header line; author identity
is the author email, lowercased. Merge commits count whenever the log
command emits them.
"""

from __future__ import annotations

import re
import statistics
import subprocess
from dataclasses import dataclass, asdict
from typing import Any, Callable, Iterable

from .config import RepoDescriptor
from .errors import HistoryError
from .extraction import MethodRecord

_COMMIT_RE = re.compile(r"^commit [0-9a-f]{7,40}", re.MULTILINE)
_AUTHOR_RE = re.compile(r"^Author:\s*(.*)$", re.MULTILINE)
_EMAIL_RE = re.compile(r"<([^>]*)>")

GitRunner = Callable[[list[str], str], subprocess.CompletedProcess]


def _run_git(args: list[str], cwd: str) -> subprocess.CompletedProcess:
    try:
        return subprocess.run(
            ["git", *args], cwd=cwd, capture_output=True, text=True, check=False
        )
    except FileNotFoundError as exc:
        raise HistoryError("git executable not found") from exc


@dataclass(frozen=True)
class HistoryRecord:
    method_id: str
    commit_count: int
    author_count: int

    def __post_init__(self) -> None:
        if self.commit_count < 1 or self.author_count < 1:
            raise ValueError("a tracked method has at least its creating commit")
        if self.author_count > self.commit_count:
            raise ValueError("author_count cannot exceed commit_count")

    def to_payload(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_payload(cls, payload: dict[str, Any]) -> "HistoryRecord":
        return cls(**payload)


def method_history(
    repo: RepoDescriptor, method: MethodRecord, runner: GitRunner = _run_git
) -> HistoryRecord:
    """Commit and distinct-author counts for one method's line range."""
    spec = f"{method.start_line},{method.end_line}:{method.file}"
    result = runner(["log", "-L", spec], str(repo.root_path))
    if result.returncode != 0:
        raise HistoryError(
            f"git log -L failed for {method.file}:{method.start_line}-"
            f"{method.end_line}: {result.stderr.strip()}"
        )
    commits = len(_COMMIT_RE.findall(result.stdout))
    authors = set()
    for raw in _AUTHOR_RE.findall(result.stdout):
        match = _EMAIL_RE.search(raw)
        authors.add((match.group(1) if match else raw).strip().lower())
    if commits == 0:
        raise HistoryError(
            f"no history for {method.file}:{method.start_line}-{method.end_line}; "
            "is the file tracked?"
        )
    return HistoryRecord(
        method_id=method.method_id, commit_count=commits, author_count=len(authors)
    )


@dataclass(frozen=True)
class DescriptiveStats:
    n: int
    mean: float
    min: float
    q1: float
    median: float
    q3: float
    max: float


def engagement_summary(
    records: Iterable[HistoryRecord], which: str = "commits"
) -> DescriptiveStats:
    """Mean and quartiles of commit or author counts.

    Quartiles use linear interpolation between order statistics at
    positions p * (n - 1); a single record yields a degenerate summary.
    """
    if which == "commits":
        values = [r.commit_count for r in records]
    elif which == "authors":
        values = [r.author_count for r in records]
    else:
        raise ValueError(f"unknown field {which!r}")
    if not values:
        raise ValueError("no history records")
    if len(values) == 1:
        v = float(values[0])
        return DescriptiveStats(n=1, mean=v, min=v, q1=v, median=v, q3=v, max=v)
    q1, median, q3 = statistics.quantiles(values, n=4, method="inclusive")
    return DescriptiveStats(
        n=len(values),
        mean=statistics.fmean(values),
        min=float(min(values)),
        q1=q1,
        median=median,
        q3=q3,
        max=float(max(values)),
    )


def commit_share(
    dep_records: Iterable[HistoryRecord], indep_records: Iterable[HistoryRecord]
) -> tuple[float, float]:
    """Percentage of total commit mass per dependency class."""
    dep_total = sum(r.commit_count for r in dep_records)
    indep_total = sum(r.commit_count for r in indep_records)
    total = dep_total + indep_total
    if total == 0:
        raise ValueError("no commits to apportion")
    pct_dep = round(100.0 * dep_total / total, 2)
    return pct_dep, round(100.0 - pct_dep, 2)
