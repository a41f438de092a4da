from pathlib import Path

import pytest

from helpcom.errors import ExtractionError
from helpcom.extraction import (
    SourceFileRef,
    decode_source,
    extract_doc_comment,
    extract_file,
    extract_invocations,
    extract_methods,
)

REF = SourceFileRef(repo="r", path="T.java", content_hash="0")


def java(content: str):
    return extract_file(REF, content, "java")


class TestJavaMethods:
    def test_two_methods_with_positions(self):
        src = (
            "class T {\n"
            "    // filler\n"
            "    int foo(int a) {\n"
            "        return a;\n"
            "    }\n"
            "\n"
            "    void bar() {\n"
            "        return;\n"
            "    }\n"
            "}\n"
        )
        methods, _ = java(src)
        assert [(m.name, m.param_count, m.start_line, m.end_line) for m in methods] == [
            ("foo", 1, 3, 5),
            ("bar", 0, 7, 9),
        ]

    def test_empty_file_and_methodless_class(self):
        assert java("")[0] == []
        assert java("class Empty { int field = 3; }")[0] == []

    def test_constructors_excluded(self):
        src = "class T {\n  T(int x) { helper(x); }\n  void real() {}\n}\n"
        methods, invocations = java(src)
        assert [m.name for m in methods] == ["real"]
        assert invocations == []

    def test_body_roundtrip_slicing(self):
        src = Path(__file__).parent.joinpath(
            "fixtures/javarepo/src/com/example/Alpha.java"
        ).read_text()
        methods, _ = java(src)
        lines = src.split("\n")
        for m in methods:
            assert m.body_text == "\n".join(lines[m.start_line - 1 : m.end_line])

    def test_extraction_is_pure(self):
        src = "class T { void a() { b(); } void b() {} }"
        first = java(src)
        second = java(src)
        assert first == second

    def test_overloads_distinct(self):
        src = "class T { int f(int a) { return a; } int f(int a, int b) { return a; } }"
        methods, _ = java(src)
        assert [(m.name, m.param_count) for m in methods] == [("f", 1), ("f", 2)]

    def test_interface_and_abstract_methods(self):
        src = "interface I {\n  int size();\n  default int twice() { return size() * 2; }\n}\n"
        methods, invocations = java(src)
        assert [(m.name, m.end_line) for m in methods] == [("size", 2), ("twice", 3)]
        assert [(i.callee_name, i.arg_count) for i in invocations] == [("size", 0)]

    def test_generic_parameters_not_split_on_commas(self):
        src = "class T { void f(java.util.Map<String, Integer> m, int n) {} }"
        methods, _ = java(src)
        assert methods[0].param_count == 2

    def test_broken_region_does_not_abort_file(self):
        src = (
            "class T {\n"
            "    void fine() { a(); }\n"
            "    void broken( { this is not java\n"
            "    }\n"
            "    void alsoFine() { b(); }\n"
            "}\n"
        )
        methods, _ = java(src)
        names = [m.name for m in methods]
        assert "fine" in names and "alsoFine" in names

    def test_annotations_included_in_span(self):
        src = "class T {\n    @Override\n    @Deprecated\n    void f() {\n    }\n}\n"
        methods, _ = java(src)
        assert (methods[0].start_line, methods[0].end_line) == (2, 5)


class TestJavaDocComments:
    def test_block_comment_directly_above(self):
        src = "class T {\n    /** Returns sum. */\n    int add(int a, int b) { return a + b; }\n}\n"
        methods, _ = java(src)
        assert methods[0].doc_comment == "Returns sum."

    def test_no_comment_absent(self):
        methods, _ = java("class T { void f() {} }")
        assert methods[0].doc_comment is None

    def test_line_comment_does_not_qualify(self):
        src = "class T {\n    // note\n    void f() {}\n}\n"
        methods, _ = java(src)
        assert methods[0].doc_comment is None

    def test_blank_line_breaks_adjacency(self):
        src = "class T {\n    /** docs */\n\n    void f() {}\n}\n"
        methods, _ = java(src)
        assert methods[0].doc_comment is None

    def test_multiline_decoration_stripped(self):
        src = (
            "class T {\n"
            "    /**\n"
            "     * Adds numbers.\n"
            "     * @param a left\n"
            "     */\n"
            "    int f(int a) { return a; }\n"
            "}\n"
        )
        methods, _ = java(src)
        assert methods[0].doc_comment == "Adds numbers.\n@param a left"

    def test_standalone_op_matches_inline_result(self):
        src = "class T {\n    /* plain block */\n    void f() {}\n}\n"
        methods, _ = java(src)
        assert extract_doc_comment(src, methods[0]) == "plain block"
        assert methods[0].doc_comment == "plain block"


class TestJavaInvocations:
    def test_single_call(self):
        src = "class T { void f() { helper(x); } }"
        _, invocations = java(src)
        assert [(i.callee_name, i.arg_count) for i in invocations] == [("helper", 1)]

    def test_no_calls(self):
        assert java("class T { void f() { int x = 1; } }")[1] == []

    def test_three_calls_in_order(self):
        src = "class T { void f() {\n a();\n b(1, 2);\n a();\n } }"
        _, invocations = java(src)
        assert [(i.callee_name, i.arg_count) for i in invocations] == [
            ("a", 0), ("b", 2), ("a", 0),
        ]

    def test_qualified_calls_use_simple_name(self):
        src = "class T { void f() { obj.helper(x); Other.stat(); this.own(1, 2); } }"
        _, invocations = java(src)
        assert [(i.callee_name, i.arg_count) for i in invocations] == [
            ("helper", 1), ("stat", 0), ("own", 2),
        ]

    def test_creation_and_method_refs_excluded(self):
        src = "class T { void f() { new Foo(1); new a.b.Bar(2, 3); Runnable r = this::f; } }"
        _, invocations = java(src)
        assert invocations == []

    def test_lambda_and_anonymous_class_bodies_included(self):
        src = (
            "class T {\n"
            "  void f() {\n"
            "    list.forEach(x -> use(x));\n"
            "    Runnable r = new Runnable() { public void run() { deep(); } };\n"
            "  }\n"
            "}\n"
        )
        methods, invocations = java(src)
        f_id = next(m.method_id for m in methods if m.name == "f")
        f_calls = [i.callee_name for i in invocations if i.caller_id == f_id]
        assert f_calls == ["forEach", "use", "deep"]

    def test_site_lines_within_caller_span(self, javarepo_extracted):
        methods, invocations = javarepo_extracted
        by_id = {m.method_id: m for m in methods}
        for inv in invocations:
            caller = by_id[inv.caller_id]
            assert caller.start_line <= inv.site_line <= caller.end_line

    def test_standalone_op_filters_by_method(self):
        src = "class T { void f() { a(); } void g() { b(); } }"
        methods, _ = java(src)
        f = next(m for m in methods if m.name == "f")
        assert [i.callee_name for i in extract_invocations(f, src)] == ["a"]


class TestPython:
    def test_methods_params_and_docstring(self):
        src = (
            "class S:\n"
            "    def close(self, force=False):\n"
            '        """Close it."""\n'
            "        self.drain(force)\n"
            "\n"
            "def drain(force):\n"
            "    pass\n"
        )
        ref = SourceFileRef(repo="r", path="s.py", content_hash="0")
        methods, invocations = extract_file(ref, src, "python")
        assert [(m.name, m.param_count) for m in methods] == [("close", 1), ("drain", 1)]
        assert methods[0].doc_comment == "Close it."
        assert [(i.callee_name, i.arg_count) for i in invocations] == [("drain", 1)]

    def test_init_excluded(self):
        src = "class S:\n    def __init__(self):\n        pass\n    def f(self):\n        pass\n"
        ref = SourceFileRef(repo="r", path="s.py", content_hash="0")
        methods, _ = extract_file(ref, src, "python")
        assert [m.name for m in methods] == ["f"]

    def test_syntax_error_region_recovered(self):
        src = "def ok(x):\n    return x\n\ndef broken(:\n    pass\n\ndef ok2(y):\n    return y\n"
        ref = SourceFileRef(repo="r", path="s.py", content_hash="0")
        methods, _ = extract_file(ref, src, "python")
        assert [m.name for m in methods] == ["ok", "ok2"]

    def test_nested_function_calls_attributed_to_both(self):
        src = (
            "def outer():\n"
            "    def inner():\n"
            "        leaf()\n"
            "    inner()\n"
        )
        ref = SourceFileRef(repo="r", path="s.py", content_hash="0")
        methods, invocations = extract_file(ref, src, "python")
        outer_id = next(m.method_id for m in methods if m.name == "outer")
        inner_id = next(m.method_id for m in methods if m.name == "inner")
        outer_calls = [i.callee_name for i in invocations if i.caller_id == outer_id]
        inner_calls = [i.callee_name for i in invocations if i.caller_id == inner_id]
        assert outer_calls == ["leaf", "inner"]
        assert inner_calls == ["leaf"]


class TestPhp:
    SRC = (
        "<?php\n"
        "class R {\n"
        "    /** Runs it. */\n"
        "    public function run($mode) {\n"
        "        $this->prep($mode);\n"
        "        helper(1, 2);\n"
        "        $fn = function ($x) { inner($x); };\n"
        "    }\n"
        "    private function prep($m) { return $m; }\n"
        "    public function __construct() { boot(); }\n"
        "}\n"
        "function helper($a, $b) { return $a + $b; }\n"
    )

    def test_methods_and_free_functions(self):
        ref = SourceFileRef(repo="r", path="r.php", content_hash="0")
        methods, _ = extract_file(ref, self.SRC, "php")
        assert [(m.name, m.param_count) for m in methods] == [
            ("run", 1), ("prep", 1), ("helper", 2),
        ]
        assert methods[0].doc_comment == "Runs it."

    def test_constructor_excluded_and_closure_attributed(self):
        ref = SourceFileRef(repo="r", path="r.php", content_hash="0")
        methods, invocations = extract_file(ref, self.SRC, "php")
        run_id = next(m.method_id for m in methods if m.name == "run")
        run_calls = [i.callee_name for i in invocations if i.caller_id == run_id]
        assert run_calls == ["prep", "helper", "inner"]
        assert all(i.callee_name != "boot" for i in invocations)


def test_unknown_language_raises():
    with pytest.raises(ExtractionError, match="grammar"):
        extract_methods(REF, "x", "fortran")


def test_undecodable_bytes_raise():
    with pytest.raises(ExtractionError, match="UTF-8"):
        decode_source(b"\xff\xfe\x00junk\xff", "bad.java")


def test_method_ids_unique_across_fixture(javarepo_extracted):
    methods, _ = javarepo_extracted
    ids = [m.method_id for m in methods]
    assert len(ids) == len(set(ids))
