import json

import pytest

from helpcom.errors import StoreError
from helpcom.extraction import MethodRecord
from helpcom.graph import ChainEntry, HelperChain
from helpcom.history import HistoryRecord
from helpcom.prompts import GeneratedComment
from helpcom.store import (
    KIND_METHOD,
    RecordEnvelope,
    RunManifest,
    SplitMix64,
    envelope,
    filter_by_alignment,
    filter_commented,
    load_records,
    read_records,
    stratified_sample,
    write_records,
)


def method(name, doc=None, side=None, start=1):
    return MethodRecord(
        method_id=f"id-{name}",
        repo="r",
        file="F.java",
        name=name,
        param_count=0,
        start_line=start,
        end_line=start + 1,
        body_text="{}",
        language="java",
        doc_comment=doc,
        side=side,
    )


class TestRoundTrip:
    def test_methods_round_trip(self, tmp_path):
        records = [method("a", doc="does a"), method("b"), method("c", side=0.5)]
        path = tmp_path / "method.jsonl"
        assert write_records(path, records) == 3
        assert path.read_text().count("\n") == 3
        assert load_records(path, KIND_METHOD) == records

    def test_mixed_kinds_round_trip_and_filter(self, tmp_path):
        chain = HelperChain(
            root_id="id-a",
            mode="full",
            entries=(ChainEntry("id-b", 1, "id-a"),),
            max_depth=1,
        )
        history = HistoryRecord(method_id="id-a", commit_count=3, author_count=2)
        comment = GeneratedComment(
            method_id="id-a", strategy="baseline", provider_model="mock",
            text="does things", prompt_digest="00", temperature=0.2,
        )
        path = tmp_path / "mixed.jsonl"
        write_records(path, [chain, history, comment, method("a")])
        assert len(read_records(path)) == 4
        assert load_records(path, KIND_METHOD) == [method("a")]

    def test_empty_list_empty_file(self, tmp_path):
        path = tmp_path / "empty.jsonl"
        assert write_records(path, []) == 0
        assert path.read_text() == ""
        assert read_records(path) == []

    def test_stable_key_order(self, tmp_path):
        path = tmp_path / "m.jsonl"
        write_records(path, [method("a")])
        doc = json.loads(path.read_text())
        assert list(doc) == sorted(doc)
        assert list(doc["payload"]) == sorted(doc["payload"])

    def test_invalid_schema_version_blocks_whole_write(self, tmp_path):
        good = envelope(method("a"))
        bad = RecordEnvelope(kind=KIND_METHOD, schema_version=99, payload=good.payload)
        path = tmp_path / "m.jsonl"
        with pytest.raises(StoreError, match="schema_version"):
            write_records(path, [good, bad])
        assert not path.exists()

    def test_corrupt_middle_line_named(self, tmp_path):
        path = tmp_path / "m.jsonl"
        write_records(path, [method("a"), method("b"), method("c")])
        lines = path.read_text().split("\n")
        lines[1] = '{"kind": "method", broken'
        path.write_text("\n".join(lines))
        with pytest.raises(StoreError, match=r":2:"):
            read_records(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(StoreError, match="not found"):
            read_records(tmp_path / "absent.jsonl")

    def test_atomic_rewrite_no_partial_content(self, tmp_path):
        path = tmp_path / "m.jsonl"
        write_records(path, [method("a")])
        write_records(path, [method("b"), method("c")])
        names = [r.name for r in load_records(path, KIND_METHOD)]
        assert names == ["b", "c"]


class TestFilters:
    def test_filter_commented(self):
        commented = method("a", doc="keep me")
        bare = method("b")
        blank = method("c", doc="   ")
        assert filter_commented([commented, bare, blank]) == [commented]

    def test_filter_commented_edge_cases(self):
        assert filter_commented([]) == []
        methods = [method("a", doc="x"), method("b", doc="y")]
        assert filter_commented(methods) == methods

    def test_alignment_threshold_inclusive(self):
        records = [method("a", side=0.79), method("b", side=0.80), method("c", side=0.90)]
        kept = filter_by_alignment(records, 0.8)
        assert [r.name for r in kept] == ["b", "c"]

    def test_alignment_extremes(self):
        records = [method("a", side=0.1), method("b", side=0.9)]
        assert filter_by_alignment(records, -1.0) == records
        assert filter_by_alignment(records, 1.0001) == []

    def test_missing_side_rejected(self):
        with pytest.raises(StoreError, match="alignment score"):
            filter_by_alignment([method("a")], 0.5)

    def test_filters_idempotent_and_commute(self):
        records = [
            method("a", doc="x", side=0.9),
            method("b", doc=None, side=0.95),
            method("c", doc="y", side=0.1),
        ]
        once = filter_by_alignment(records, 0.5)
        assert filter_by_alignment(once, 0.5) == once
        ab = filter_by_alignment(filter_commented(records), 0.5)
        ba = filter_commented(filter_by_alignment(records, 0.5))
        assert ab == ba


class TestStratifiedSample:
    def _population(self, n_dep=20, n_indep=15):
        records, classes = [], {}
        for i in range(n_dep):
            m = method(f"dep{i}", start=i + 1)
            records.append(m)
            classes[m.method_id] = "dependent"
        for i in range(n_indep):
            m = method(f"ind{i}", start=100 + i)
            records.append(m)
            classes[m.method_id] = "independent"
        return records, classes

    def test_quota_met_exactly(self):
        records, classes = self._population()
        sample = stratified_sample(records, classes, 7, seed=11)
        assert len(sample) == 14
        labels = [classes[m.method_id] for m in sample]
        assert labels.count("dependent") == 7
        assert labels.count("independent") == 7

    def test_whole_class_when_quota_equals_size(self):
        records, classes = self._population(n_dep=5, n_indep=5)
        sample = stratified_sample(records, classes, 5, seed=1)
        assert len(sample) == 10

    def test_same_seed_same_subset(self):
        records, classes = self._population()
        a = stratified_sample(records, classes, 6, seed=42)
        b = stratified_sample(records, classes, 6, seed=42)
        assert a == b

    def test_different_seed_usually_differs(self):
        records, classes = self._population()
        a = stratified_sample(records, classes, 6, seed=1)
        b = stratified_sample(records, classes, 6, seed=2)
        assert a != b

    def test_no_duplicates(self):
        records, classes = self._population()
        sample = stratified_sample(records, classes, 10, seed=3)
        ids = [m.method_id for m in sample]
        assert len(ids) == len(set(ids))

    def test_class_too_small_rejected(self):
        records, classes = self._population(n_dep=3)
        with pytest.raises(StoreError, match="cannot sample"):
            stratified_sample(records, classes, 4, seed=0)


class TestSplitMix64:
    def test_known_stream_is_stable(self):
        rng = SplitMix64(0)
        first = [rng.next64() for _ in range(3)]
        rng2 = SplitMix64(0)
        assert [rng2.next64() for _ in range(3)] == first

    def test_below_bounds(self):
        rng = SplitMix64(123)
        draws = [rng.below(10) for _ in range(1000)]
        assert set(draws) <= set(range(10))
        assert len(set(draws)) == 10  # all residues reached


class TestManifest:
    def test_save_load_round_trip(self, tmp_path):
        manifest = RunManifest(
            run_id="r1", config_digest="abc", tool_version="0.1.0",
            created_at="t0", updated_at="t1",
            counts={"methods": 5, "dependent": 3, "independent": 2},
            stages={"extract": "t1"},
        )
        path = tmp_path / "manifest.json"
        manifest.save(path)
        assert RunManifest.load(path) == manifest

    def test_inconsistent_counts_rejected(self, tmp_path):
        manifest = RunManifest(
            run_id="r1",
            counts={"methods": 5, "dependent": 3, "independent": 3},
        )
        with pytest.raises(StoreError, match="inconsistent"):
            manifest.save(tmp_path / "m.json")
