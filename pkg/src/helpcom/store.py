"""Line-delimited record persistence, dataset filters, and sampling.

Every pipeline stage communicates through `<run_id>/<kind>.jsonl` files of
one-document-per-line envelopes with stable key order, plus a single
`manifest.json` carrying run identity, timestamps, and per-stage counts.
Timestamps live only in the manifest so the record files themselves are
byte-reproducible across runs.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field, asdict
from pathlib import Path
from typing import Any, Callable, Iterable, Mapping, Sequence

from .errors import StoreError
from .extraction import InvocationRecord, MethodRecord
from .graph import HelperChain, Resolution
from .history import HistoryRecord
from .metrics import ScoreCard
from .prompts import GeneratedComment

KIND_METHOD = "method"
KIND_INVOCATION = "invocation"
KIND_RESOLUTION = "resolution"
KIND_CHAIN = "chain"
KIND_HISTORY = "history"
KIND_GENERATED_COMMENT = "generated_comment"
KIND_SCORECARD = "scorecard"
KIND_RUN_MANIFEST = "run_manifest"

# kind -> (current schema version, payload codec)
_CODECS: dict[str, tuple[int, Callable[[dict], Any]]] = {
    KIND_METHOD: (1, MethodRecord.from_payload),
    KIND_INVOCATION: (1, InvocationRecord.from_payload),
    KIND_RESOLUTION: (1, Resolution.from_payload),
    KIND_CHAIN: (1, HelperChain.from_payload),
    KIND_HISTORY: (1, HistoryRecord.from_payload),
    KIND_GENERATED_COMMENT: (1, GeneratedComment.from_payload),
    KIND_SCORECARD: (1, ScoreCard.from_payload),
}

_KIND_BY_TYPE = {
    MethodRecord: KIND_METHOD,
    InvocationRecord: KIND_INVOCATION,
    Resolution: KIND_RESOLUTION,
    HelperChain: KIND_CHAIN,
    HistoryRecord: KIND_HISTORY,
    GeneratedComment: KIND_GENERATED_COMMENT,
    ScoreCard: KIND_SCORECARD,
}


@dataclass(frozen=True)
class RecordEnvelope:
    kind: str
    schema_version: int
    payload: dict[str, Any]

    def decode(self) -> Any:
        return _CODECS[self.kind][1](self.payload)


def envelope(record: Any) -> RecordEnvelope:
    kind = _KIND_BY_TYPE.get(type(record))
    if kind is None:
        raise StoreError(f"no record kind for {type(record).__name__}")
    return RecordEnvelope(
        kind=kind, schema_version=_CODECS[kind][0], payload=record.to_payload()
    )


def _validate(env: RecordEnvelope, where: str) -> None:
    codec = _CODECS.get(env.kind)
    if codec is None:
        raise StoreError(f"{where}: unknown record kind {env.kind!r}")
    if env.schema_version != codec[0]:
        raise StoreError(
            f"{where}: schema_version {env.schema_version} for kind "
            f"{env.kind!r}; this build reads version {codec[0]}"
        )
    try:
        codec[1](dict(env.payload))
    except (TypeError, ValueError, KeyError) as exc:
        raise StoreError(f"{where}: invalid {env.kind} payload: {exc}") from exc


def write_records(path: str | Path, records: Sequence[Any]) -> int:
    """Write envelopes one per line, validating everything before any byte
    is written and replacing the file atomically."""
    path = Path(path)
    envelopes = []
    for i, record in enumerate(records):
        env = record if isinstance(record, RecordEnvelope) else envelope(record)
        _validate(env, f"record {i}")
        envelopes.append(env)

    lines = [
        json.dumps(
            {"kind": e.kind, "schema_version": e.schema_version, "payload": e.payload},
            sort_keys=True,
            ensure_ascii=False,
            separators=(",", ":"),
        )
        for e in envelopes
    ]
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            for line in lines:
                handle.write(line)
                handle.write("\n")
        os.replace(tmp_name, path)
    except OSError as exc:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise StoreError(f"cannot write {path}: {exc}") from exc
    return len(envelopes)


def read_records(path: str | Path, kind: str | None = None) -> list[RecordEnvelope]:
    """Parse every line, failing fast with the offending line number."""
    path = Path(path)
    if not path.is_file():
        raise StoreError(f"record file not found: {path}")
    out = []
    with path.open("r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                doc = json.loads(line)
                env = RecordEnvelope(
                    kind=doc["kind"],
                    schema_version=doc["schema_version"],
                    payload=doc["payload"],
                )
            except (ValueError, KeyError, TypeError) as exc:
                raise StoreError(f"{path}:{lineno}: malformed record line: {exc}") from exc
            _validate(env, f"{path}:{lineno}")
            if kind is None or env.kind == kind:
                out.append(env)
    return out


def load_records(path: str | Path, kind: str) -> list[Any]:
    return [env.decode() for env in read_records(path, kind)]


def filter_commented(methods: Iterable[MethodRecord]) -> list[MethodRecord]:
    """Methods carrying a non-empty developer-written comment."""
    return [m for m in methods if m.doc_comment and m.doc_comment.strip()]


def filter_by_alignment(records: Sequence[Any], threshold: float) -> list[Any]:
    """Records whose alignment score meets the threshold (inclusive)."""
    for record in records:
        if getattr(record, "side", None) is None:
            raise StoreError(
                f"record {getattr(record, 'method_id', record)!r} has no alignment score"
            )
    return [r for r in records if r.side >= threshold]


class SplitMix64:
    """Tiny, portable, well-documented PRNG for reproducible sampling.

    The 64-bit SplitMix generator: state advances by the golden-ratio
    increment and the output is a bijective finalizer of the state, so a
    seed fully determines the stream regardless of platform.
    """

    _MASK = (1 << 64) - 1

    def __init__(self, seed: int):
        self._state = seed & self._MASK

    def next64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & self._MASK
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & self._MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & self._MASK
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound) via rejection sampling."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            value = self.next64()
            if value < limit:
                return value % bound


def stratified_sample(
    records: Sequence[Any],
    class_of: Mapping[str, str],
    n_per_class: int,
    seed: int,
) -> list[Any]:
    """Exactly n_per_class records from each class, without replacement.

    Selection is a partial Fisher-Yates shuffle driven by SplitMix64, one
    independent pass per class in sorted class order, so a fixed seed
    reproduces the same subset on any platform. Output preserves the input
    order of the surviving records.
    """
    buckets: dict[str, list[int]] = {}
    for idx, record in enumerate(records):
        label = class_of.get(record.method_id)
        if label is None:
            raise StoreError(f"record {record.method_id} has no class label")
        buckets.setdefault(label, []).append(idx)

    chosen: set[int] = set()
    rng = SplitMix64(seed)
    for label in sorted(buckets):
        indices = buckets[label]
        if len(indices) < n_per_class:
            raise StoreError(
                f"class {label!r} has {len(indices)} records; "
                f"cannot sample {n_per_class}"
            )
        pool = list(indices)
        for i in range(n_per_class):
            j = i + rng.below(len(pool) - i)
            pool[i], pool[j] = pool[j], pool[i]
            chosen.add(pool[i])
    return [records[i] for i in sorted(chosen)]


@dataclass
class RunManifest:
    """Reproducibility record: identity, configuration digest, timestamps,
    and per-stage counts."""

    run_id: str
    config_digest: str = ""
    tool_version: str = ""
    created_at: str = ""
    updated_at: str = ""
    counts: dict[str, int] = field(default_factory=dict)
    stages: dict[str, str] = field(default_factory=dict)  # stage -> timestamp

    def validate_counts(self) -> None:
        for key, value in self.counts.items():
            if value < 0:
                raise StoreError(f"manifest count {key} is negative")
        methods = self.counts.get("methods")
        dep = self.counts.get("dependent")
        indep = self.counts.get("independent")
        if None not in (methods, dep, indep) and dep + indep != methods:
            raise StoreError(
                f"manifest counts inconsistent: {dep} + {indep} != {methods}"
            )

    def save(self, path: str | Path) -> None:
        self.validate_counts()
        Path(path).write_text(
            json.dumps(asdict(self), sort_keys=True, indent=2) + "\n",
            encoding="utf-8",
        )

    @classmethod
    def load(cls, path: str | Path) -> "RunManifest":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, ValueError) as exc:
            raise StoreError(f"cannot load manifest {path}: {exc}") from exc
        return cls(**data)
