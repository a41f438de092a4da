"""Record types produced by source-file extraction."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, asdict
from typing import Any, Optional


def make_method_id(repo: str, path: str, name: str, param_count: int, start_line: int) -> str:
    """Stable content-derived id, unique within a repository snapshot."""
    key = "\x1f".join((repo, path, name, str(param_count), str(start_line)))
    return hashlib.sha256(key.encode("utf-8")).hexdigest()[:20]


@dataclass(frozen=True)
class SourceFileRef:
    """A discovered source file, hashed at extraction time."""

    repo: str
    path: str
    content_hash: str

    def to_payload(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_payload(cls, payload: dict[str, Any]) -> "SourceFileRef":
        return cls(**payload)


@dataclass
class MethodRecord:
    """One extracted method declaration.

    body_text is the exact text of the lines start_line..end_line, so
    slicing the file by that range reproduces it verbatim. side is stamped
    later by the alignment-threshold filter stage and is absent until then;
    selected marks membership in the evaluation set, which the filter and
    sample stages narrow without deleting records.
    """

    method_id: str
    repo: str
    file: str
    name: str
    param_count: int
    start_line: int
    end_line: int
    body_text: str
    language: str
    doc_comment: Optional[str] = None
    side: Optional[float] = None
    selected: bool = True

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("method name must be non-empty")
        if self.start_line < 1 or self.end_line < self.start_line:
            raise ValueError(
                f"invalid line range {self.start_line}..{self.end_line} for {self.name}"
            )
        if not self.body_text:
            raise ValueError(f"empty body_text for {self.name}")

    def to_payload(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_payload(cls, payload: dict[str, Any]) -> "MethodRecord":
        return cls(**payload)


@dataclass(frozen=True)
class InvocationRecord:
    """A call site inside a method body: simple callee name plus arity."""

    caller_id: str
    callee_name: str
    arg_count: int
    site_line: int

    def __post_init__(self) -> None:
        if self.arg_count < 0:
            raise ValueError("arg_count must be >= 0")
        if self.site_line < 1:
            raise ValueError("site_line must be >= 1")

    def to_payload(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_payload(cls, payload: dict[str, Any]) -> "InvocationRecord":
        return cls(**payload)
