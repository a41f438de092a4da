"""Helper-method resolution, dependency classification, and chains.

Invocations resolve against a repository-wide index keyed by (name,
parameter count). A call with no indexed match is treated as a built-in or
library call and excluded; a call whose only match is the caller itself is
a self-recursive call and excluded. When several methods share a
signature, a candidate in the caller's own file wins; failing that, the
edge is recorded as ambiguous with all candidates, chains traverse the
first candidate by (file, start_line), and the chain is flagged.

A method is dependent when it has at least one helper edge (resolved, or
ambiguous with its deterministic primary candidate); otherwise it is
independent. Chains are breadth-first closures over those edges: the
immediate mode stops at depth 1, the full mode continues until no new
helper is found, so cycles terminate via the visited set.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, asdict
from typing import Any, Iterable

from .extraction import InvocationRecord, MethodRecord

RESOLVED = "resolved"
UNRESOLVED = "unresolved"
AMBIGUOUS = "ambiguous"
SELF_CALL = "self_call"

DEPENDENT = "dependent"
INDEPENDENT = "independent"

IMMEDIATE = "immediate"
FULL = "full"


@dataclass
class MethodIndex:
    by_signature: dict[tuple[str, int], list[str]] = field(default_factory=dict)
    by_id: dict[str, MethodRecord] = field(default_factory=dict)

    def position(self, method_id: str) -> tuple[str, int]:
        record = self.by_id[method_id]
        return (record.file, record.start_line)


def build_index(methods: Iterable[MethodRecord]) -> MethodIndex:
    index = MethodIndex()
    for record in methods:
        if record.method_id in index.by_id:
            raise ValueError(f"duplicate method_id {record.method_id}")
        index.by_id[record.method_id] = record
        index.by_signature.setdefault((record.name, record.param_count), []).append(
            record.method_id
        )
    return index


@dataclass(frozen=True)
class Resolution:
    invocation: InvocationRecord
    status: str
    target_id: str | None = None
    candidate_ids: tuple[str, ...] = ()

    def primary_target(self) -> str | None:
        """The followed edge: the resolved target, or the deterministic
        first candidate of an ambiguous edge."""
        if self.status == RESOLVED:
            return self.target_id
        if self.status == AMBIGUOUS:
            return self.candidate_ids[0]
        return None

    def to_payload(self) -> dict[str, Any]:
        return {
            "invocation": self.invocation.to_payload(),
            "status": self.status,
            "target_id": self.target_id,
            "candidate_ids": list(self.candidate_ids),
        }

    @classmethod
    def from_payload(cls, payload: dict[str, Any]) -> "Resolution":
        return cls(
            invocation=InvocationRecord.from_payload(payload["invocation"]),
            status=payload["status"],
            target_id=payload.get("target_id"),
            candidate_ids=tuple(payload.get("candidate_ids") or ()),
        )


def resolve_invocation(index: MethodIndex, inv: InvocationRecord) -> Resolution:
    caller = index.by_id.get(inv.caller_id)
    if caller is None:
        raise ValueError(f"unknown caller_id {inv.caller_id}")

    all_candidates = index.by_signature.get((inv.callee_name, inv.arg_count), [])
    others = [c for c in all_candidates if c != inv.caller_id]
    if not all_candidates:
        return Resolution(inv, UNRESOLVED)
    if not others:
        return Resolution(inv, SELF_CALL)
    if len(others) == 1:
        return Resolution(inv, RESOLVED, target_id=others[0])

    same_file = [c for c in others if index.by_id[c].file == caller.file]
    if len(same_file) == 1:
        return Resolution(inv, RESOLVED, target_id=same_file[0])
    pool = same_file if same_file else others
    ordered = tuple(sorted(pool, key=index.position))
    return Resolution(inv, AMBIGUOUS, candidate_ids=ordered)


def classify(index: MethodIndex, resolutions: Iterable[Resolution]) -> dict[str, str]:
    """Label every indexed method dependent or independent."""
    labels = {method_id: INDEPENDENT for method_id in index.by_id}
    for res in resolutions:
        if res.primary_target() is not None:
            labels[res.invocation.caller_id] = DEPENDENT
    return labels


@dataclass(frozen=True)
class ChainEntry:
    helper_id: str
    depth: int
    parent_id: str


@dataclass(frozen=True)
class HelperChain:
    root_id: str
    mode: str
    entries: tuple[ChainEntry, ...]
    max_depth: int
    has_ambiguity: bool = False

    def helper_ids(self) -> tuple[str, ...]:
        return tuple(e.helper_id for e in self.entries)

    def to_payload(self) -> dict[str, Any]:
        return {
            "root_id": self.root_id,
            "mode": self.mode,
            "entries": [asdict(e) for e in self.entries],
            "max_depth": self.max_depth,
            "has_ambiguity": self.has_ambiguity,
        }

    @classmethod
    def from_payload(cls, payload: dict[str, Any]) -> "HelperChain":
        return cls(
            root_id=payload["root_id"],
            mode=payload["mode"],
            entries=tuple(ChainEntry(**e) for e in payload["entries"]),
            max_depth=payload["max_depth"],
            has_ambiguity=payload.get("has_ambiguity", False),
        )


def group_by_caller(resolutions: Iterable[Resolution]) -> dict[str, list[Resolution]]:
    grouped: dict[str, list[Resolution]] = {}
    for res in resolutions:
        grouped.setdefault(res.invocation.caller_id, []).append(res)
    for edges in grouped.values():
        edges.sort(key=lambda r: r.invocation.site_line)
    return grouped


def helper_closure(
    index: MethodIndex,
    resolutions_by_caller: dict[str, list[Resolution]],
    root_id: str,
    mode: str,
) -> HelperChain:
    """Breadth-first helper closure of a dependent method.

    Entries are ordered by (depth, first encounter); the root never
    appears among them, and each helper appears once at its minimal depth.
    """
    if mode not in (IMMEDIATE, FULL):
        raise ValueError(f"unknown chain mode {mode!r}")
    if root_id not in index.by_id:
        raise ValueError(f"unknown root {root_id}")

    entries: list[ChainEntry] = []
    seen = {root_id}
    has_ambiguity = False
    queue: deque[tuple[str, int]] = deque([(root_id, 0)])
    while queue:
        current, depth = queue.popleft()
        if mode == IMMEDIATE and depth >= 1:
            continue
        for res in resolutions_by_caller.get(current, []):
            target = res.primary_target()
            if target is None:
                continue
            if res.status == AMBIGUOUS:
                has_ambiguity = True
            if target in seen:
                continue
            seen.add(target)
            entries.append(ChainEntry(helper_id=target, depth=depth + 1, parent_id=current))
            queue.append((target, depth + 1))

    if not entries:
        raise ValueError(f"method {root_id} is independent; no chain to build")
    return HelperChain(
        root_id=root_id,
        mode=mode,
        entries=tuple(entries),
        max_depth=max(e.depth for e in entries),
        has_ambiguity=has_ambiguity,
    )


@dataclass(frozen=True)
class DependencyStats:
    n_dependent: int
    n_independent: int
    pct_dependent: float
    pct_independent: float


def dependency_stats(labels: dict[str, str]) -> DependencyStats:
    """Counts and complementary percentages, reconciled to sum 100.00."""
    if not labels:
        raise ValueError("no classified methods")
    n_dep = sum(1 for v in labels.values() if v == DEPENDENT)
    n_indep = len(labels) - n_dep
    pct_dep = round(100.0 * n_dep / len(labels), 2)
    return DependencyStats(
        n_dependent=n_dep,
        n_independent=n_indep,
        pct_dependent=pct_dep,
        pct_independent=round(100.0 - pct_dep, 2),
    )
