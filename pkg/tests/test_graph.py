import pytest

from conftest import method_key
from helpcom.extraction import InvocationRecord, MethodRecord
from helpcom.graph import (
    AMBIGUOUS,
    DEPENDENT,
    FULL,
    IMMEDIATE,
    INDEPENDENT,
    RESOLVED,
    SELF_CALL,
    UNRESOLVED,
    build_index,
    classify,
    dependency_stats,
    group_by_caller,
    helper_closure,
    resolve_invocation,
)


def method(name, params=0, file="F.java", start=1, repo="r"):
    return MethodRecord(
        method_id=f"{file}:{name}/{params}@{start}",
        repo=repo,
        file=file,
        name=name,
        param_count=params,
        start_line=start,
        end_line=start + 2,
        body_text="{}",
        language="java",
    )


def call(caller, callee, args=0, line=2):
    return InvocationRecord(
        caller_id=caller.method_id, callee_name=callee, arg_count=args, site_line=line
    )


class TestIndex:
    def test_two_distinct_signatures(self):
        index = build_index([method("foo", 1), method("bar", 0, start=5)])
        assert len(index.by_signature) == 2
        assert all(len(v) == 1 for v in index.by_signature.values())

    def test_overloads_get_distinct_keys(self):
        index = build_index([method("foo", 1), method("foo", 2, start=5)])
        assert ("foo", 1) in index.by_signature
        assert ("foo", 2) in index.by_signature

    def test_same_signature_two_files_shares_key(self):
        a = method("foo", 1, file="A.java")
        b = method("foo", 1, file="B.java")
        index = build_index([a, b])
        assert index.by_signature[("foo", 1)] == [a.method_id, b.method_id]

    def test_duplicate_id_rejected(self):
        m = method("foo", 1)
        with pytest.raises(ValueError, match="duplicate"):
            build_index([m, m])


class TestResolve:
    def test_sole_non_caller_candidate_resolves(self):
        caller, helper = method("f", 0), method("helper", 1, start=10)
        index = build_index([caller, helper])
        res = resolve_invocation(index, call(caller, "helper", 1))
        assert res.status == RESOLVED
        assert res.target_id == helper.method_id

    def test_library_call_unresolved(self):
        caller = method("f", 0)
        index = build_index([caller])
        res = resolve_invocation(index, call(caller, "println", 1))
        assert res.status == UNRESOLVED
        assert res.primary_target() is None

    def test_pure_recursion_is_self_call(self):
        fib = method("fib", 1)
        index = build_index([fib])
        res = resolve_invocation(index, call(fib, "fib", 1))
        assert res.status == SELF_CALL

    def test_same_file_candidate_preferred(self):
        caller = method("f", 0, file="A.java", start=1)
        near = method("t", 1, file="A.java", start=10)
        far = method("t", 1, file="B.java", start=10)
        index = build_index([caller, near, far])
        res = resolve_invocation(index, call(caller, "t", 1))
        assert res.status == RESOLVED
        assert res.target_id == near.method_id

    def test_cross_file_tie_is_ambiguous_with_sorted_candidates(self):
        caller = method("f", 0, file="C.java")
        b = method("t", 1, file="B.java", start=5)
        a = method("t", 1, file="A.java", start=9)
        index = build_index([caller, b, a])
        res = resolve_invocation(index, call(caller, "t", 1))
        assert res.status == AMBIGUOUS
        assert res.candidate_ids == (a.method_id, b.method_id)
        assert res.primary_target() == a.method_id

    def test_unknown_caller_rejected(self):
        index = build_index([method("f", 0)])
        bad = InvocationRecord(caller_id="ghost", callee_name="x", arg_count=0, site_line=1)
        with pytest.raises(ValueError, match="unknown caller"):
            resolve_invocation(index, bad)


class TestClassify:
    def test_no_invocations_independent(self):
        index = build_index([method("f", 0)])
        assert classify(index, []) == {method("f", 0).method_id: INDEPENDENT}

    def test_only_library_call_independent(self):
        caller = method("f", 0)
        index = build_index([caller])
        res = resolve_invocation(index, call(caller, "println", 1))
        assert classify(index, [res])[caller.method_id] == INDEPENDENT

    def test_resolved_call_dependent(self):
        caller, helper = method("f", 0), method("h", 0, start=9)
        index = build_index([caller, helper])
        res = resolve_invocation(index, call(caller, "h", 0))
        labels = classify(index, [res])
        assert labels[caller.method_id] == DEPENDENT
        assert labels[helper.method_id] == INDEPENDENT

    def test_only_self_calls_independent(self):
        rec = method("f", 1)
        index = build_index([rec])
        res = resolve_invocation(index, call(rec, "f", 1))
        assert classify(index, [res])[rec.method_id] == INDEPENDENT


class TestClosure:
    def _three_chain(self):
        m1, m2, m3 = (
            method("m1", 0, start=1),
            method("m2", 0, start=10),
            method("m3", 0, start=20),
        )
        index = build_index([m1, m2, m3])
        resolutions = [
            resolve_invocation(index, call(m1, "m2", 0, line=2)),
            resolve_invocation(index, call(m2, "m3", 0, line=11)),
        ]
        return index, group_by_caller(resolutions), m1, m2, m3

    def test_immediate_stops_at_depth_one(self):
        index, grouped, m1, m2, _ = self._three_chain()
        chain = helper_closure(index, grouped, m1.method_id, IMMEDIATE)
        assert chain.helper_ids() == (m2.method_id,)
        assert chain.max_depth == 1

    def test_full_reaches_depth_two(self):
        index, grouped, m1, m2, m3 = self._three_chain()
        chain = helper_closure(index, grouped, m1.method_id, FULL)
        assert [(e.helper_id, e.depth) for e in chain.entries] == [
            (m2.method_id, 1),
            (m3.method_id, 2),
        ]
        assert chain.max_depth == 2

    def test_cycle_terminates_without_root(self):
        a, b = method("a", 0, start=1), method("b", 0, start=10)
        index = build_index([a, b])
        grouped = group_by_caller([
            resolve_invocation(index, call(a, "b", 0, line=2)),
            resolve_invocation(index, call(b, "a", 0, line=11)),
        ])
        chain = helper_closure(index, grouped, a.method_id, FULL)
        assert chain.helper_ids() == (b.method_id,)

    def test_independent_root_rejected(self):
        index = build_index([method("f", 0)])
        with pytest.raises(ValueError, match="independent"):
            helper_closure(index, {}, method("f", 0).method_id, FULL)

    def test_immediate_subset_of_full(self, javarepo_extracted):
        methods, invocations = javarepo_extracted
        index = build_index(methods)
        resolutions = [resolve_invocation(index, inv) for inv in invocations]
        grouped = group_by_caller(resolutions)
        labels = classify(index, resolutions)
        for method_id, label in labels.items():
            if label != DEPENDENT:
                continue
            imm = helper_closure(index, grouped, method_id, IMMEDIATE)
            full = helper_closure(index, grouped, method_id, FULL)
            assert set(imm.helper_ids()) <= set(full.helper_ids())
            assert len(full.entries) <= len(methods) - 1

    def test_classify_consistent_with_closure(self, javarepo_extracted):
        methods, invocations = javarepo_extracted
        index = build_index(methods)
        resolutions = [resolve_invocation(index, inv) for inv in invocations]
        grouped = group_by_caller(resolutions)
        labels = classify(index, resolutions)
        for method_id, label in labels.items():
            if label == DEPENDENT:
                assert helper_closure(index, grouped, method_id, IMMEDIATE).entries
            else:
                with pytest.raises(ValueError):
                    helper_closure(index, grouped, method_id, IMMEDIATE)


class TestDependencyStats:
    def test_paper_scale_split(self):
        labels = {}
        labels.update({f"d{i}": DEPENDENT for i in range(448572)})
        labels.update({f"i{i}": INDEPENDENT for i in range(199197)})
        stats = dependency_stats(labels)
        assert (stats.pct_dependent, stats.pct_independent) == (69.25, 30.75)

    def test_degenerate_and_simple_splits(self):
        stats = dependency_stats({"a": DEPENDENT})
        assert (stats.pct_dependent, stats.pct_independent) == (100.0, 0.0)
        stats = dependency_stats(
            {"a": DEPENDENT, "b": INDEPENDENT, "c": INDEPENDENT, "d": INDEPENDENT}
        )
        assert (stats.pct_dependent, stats.pct_independent) == (25.0, 75.0)

    def test_percentages_reconcile(self):
        labels = {f"m{i}": DEPENDENT if i % 3 else INDEPENDENT for i in range(1000)}
        stats = dependency_stats(labels)
        assert round(stats.pct_dependent + stats.pct_independent, 2) == 100.0

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            dependency_stats({})


def test_fixture_ambiguity_flags(javarepo_extracted, javarepo_truth):
    methods, invocations = javarepo_extracted
    index = build_index(methods)
    resolutions = [resolve_invocation(index, inv) for inv in invocations]
    grouped = group_by_caller(resolutions)
    by_key = {method_key(m): m for m in methods}
    g1 = by_key["Gamma.java:g1/0"]
    chain = helper_closure(index, grouped, g1.method_id, FULL)
    assert chain.has_ambiguity
    assert method_key(index.by_id[chain.entries[0].helper_id]) == "Alpha.java:dup/1"
    g2 = by_key["Gamma.java:g2/0"]
    assert helper_closure(index, grouped, g2.method_id, IMMEDIATE).has_ambiguity is False
    assert helper_closure(index, grouped, g2.method_id, FULL).has_ambiguity is True
