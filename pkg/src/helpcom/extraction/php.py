"""PHP method, function-call, and doc-comment extraction.

Named function declarations (class methods and free functions) become
method records; ``__construct`` is excluded as a constructor and anonymous
closures are not recorded, though calls inside them still attribute to the
enclosing named function. Call sites cover ``helper(...)``,
``$this->helper(...)``, and ``Clazz::helper(...)``; dynamic calls through
variables are unresolvable under name+arity matching and are skipped.
Text outside ``<?php ... ?>`` regions is masked before lexing.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ctok import Token, php_code_regions, tokenize
from .java import attach_doc_comment, _match
from .records import InvocationRecord, MethodRecord, SourceFileRef, make_method_id

_MODIFIERS = frozenset({
    "public", "private", "protected", "static", "abstract", "final", "readonly",
})
_TYPE_KEYWORDS = frozenset({"class", "trait", "interface", "enum"})
_CALL_KEYWORDS = frozenset({
    "if", "elseif", "for", "foreach", "while", "switch", "catch", "match",
    "function", "fn", "array", "list", "isset", "unset", "empty", "echo",
    "print", "exit", "die", "declare", "use", "new", "clone", "return",
    "throw", "yield", "include", "include_once", "require", "require_once",
})


def _mask_non_php(src: str) -> str:
    masked = []
    last = 0
    for start, end in php_code_regions(src):
        masked.append(_blank(src[last:start]))
        masked.append(src[start:end])
        last = end
    masked.append(_blank(src[last:]))
    return "".join(masked)


def _blank(text: str) -> str:
    return "".join("\n" if ch == "\n" else " " for ch in text)


@dataclass
class _Frame:
    kind: str  # file | type | method | other


@dataclass
class _RawMethod:
    name: str
    param_count: int
    start_tok: Token
    end_line: int


def _count_params(code: list[Token], open_idx: int, close_idx: int) -> int:
    if close_idx <= open_idx + 1:
        return 0
    commas = 0
    depth = 0
    for j in range(open_idx + 1, close_idx):
        t = code[j].text
        if t in "([{":
            depth += 1
        elif t in ")]}":
            depth = max(0, depth - 1)
        elif t == "," and depth == 0:
            commas += 1
    return commas + 1


def parse_php(content: str):
    masked = _mask_non_php(content)
    tokens = tokenize(masked, "php")
    comments = [t for t in tokens if t.kind == "comment_block"]
    code = [t for t in tokens if not t.kind.startswith("comment")]

    frames = [_Frame("file")]
    method_stack: list[int] = []
    armed: dict[int, tuple] = {}
    raw_methods: list[_RawMethod] = []
    calls: list[tuple[int, str, int, int, int]] = []

    def arm_body_brace(from_idx: int, directive: tuple) -> None:
        depth = 0
        for j in range(from_idx, len(code)):
            t = code[j].text
            if t == "(":
                depth += 1
            elif t == ")":
                depth = max(0, depth - 1)
            elif t == "{" and depth == 0:
                armed.setdefault(j, directive)
                return
            elif t == ";" and depth == 0:
                return

    def handle_function(i: int) -> None:
        j = i + 1
        if j < len(code) and code[j].text == "&":
            j += 1
        if j >= len(code) or code[j].kind != "id" or code[j + 1 : j + 2] == []:
            arm_body_brace(i + 1, ("other",))  # anonymous closure
            return
        name_tok = code[j]
        if name_tok.text.startswith("$") or code[j + 1].text != "(":
            arm_body_brace(i + 1, ("other",))
            return
        close = _match(code, j + 1, "(", ")")
        start = i
        while start > 0 and code[start - 1].kind == "id" and code[start - 1].text in _MODIFIERS:
            start -= 1
        if name_tok.text == "__construct":
            arm_body_brace(close + 1, ("other",))
            return
        k = close + 1
        depth = 0
        end_line = code[close].line
        while k < len(code):
            t = code[k].text
            if t == "(":
                depth += 1
            elif t == ")":
                depth = max(0, depth - 1)
            elif t == "{" and depth == 0:
                body_close = _match(code, k, "{", "}")
                end_line = code[body_close].end_line
                armed.setdefault(k, ("method", len(raw_methods)))
                break
            elif t == ";" and depth == 0:
                end_line = code[k].line  # abstract or interface method
                break
            k += 1
        raw_methods.append(
            _RawMethod(
                name=name_tok.text,
                param_count=_count_params(code, j + 1, close),
                start_tok=code[start],
                end_line=end_line,
            )
        )

    i = 0
    while i < len(code):
        t = code[i]
        if t.text == "{":
            directive = armed.pop(i, None)
            if directive is None:
                frames.append(_Frame("other"))
            else:
                frames.append(_Frame(directive[0]))
                if directive[0] == "method":
                    method_stack.append(directive[1])
        elif t.text == "}":
            if len(frames) > 1:
                closed = frames.pop()
                if closed.kind == "method" and method_stack:
                    method_stack.pop()
        elif t.kind == "id" and t.text in _TYPE_KEYWORDS:
            prev = code[i - 1] if i > 0 else None
            nxt = code[i + 1] if i + 1 < len(code) else None
            if (prev is None or prev.text not in ("->", "::", "new")) and (
                nxt is not None and nxt.kind == "id"
            ):
                arm_body_brace(i + 1, ("type",))
        elif t.kind == "id" and t.text == "function":
            handle_function(i)
        elif t.kind == "id" and i + 1 < len(code) and code[i + 1].text == "(":
            prev = code[i - 1] if i > 0 else None
            declared_by_ref = (
                prev is not None
                and prev.text == "&"
                and i >= 2
                and code[i - 2].text == "function"
            )
            if (
                t.text not in _CALL_KEYWORDS
                and not t.text.startswith("$")
                and not declared_by_ref
                and (prev is None or prev.text not in ("function", "new", "fn"))
            ):
                if not (prev is not None and prev.text == "\\" and _is_new_chain(code, i)):
                    close = _match(code, i + 1, "(", ")")
                    argc = _count_args(code, i + 1, close)
                    for m_idx in method_stack:
                        calls.append((m_idx, t.text, argc, t.line, t.col))
        i += 1

    return raw_methods, calls, comments, masked


def _is_new_chain(code: list[Token], i: int) -> bool:
    head = i
    while head >= 2 and code[head - 1].text == "\\" and code[head - 2].kind == "id":
        head -= 2
    if head >= 1 and code[head - 1].text == "\\":
        head -= 1
    return head >= 1 and code[head - 1].text == "new"


def _count_args(code: list[Token], open_idx: int, close_idx: int) -> int:
    if close_idx <= open_idx + 1:
        return 0
    commas = 0
    depth = 0
    for j in range(open_idx + 1, close_idx):
        t = code[j].text
        if t in "([{":
            depth += 1
        elif t in ")]}":
            depth = max(0, depth - 1)
        elif t == "," and depth == 0:
            commas += 1
    return commas + 1


def extract_php(
    ref: SourceFileRef, content: str
) -> tuple[list[MethodRecord], list[InvocationRecord]]:
    raw_methods, calls, comments, masked = parse_php(content)
    lines = content.split("\n")
    methods: list[MethodRecord] = []
    for raw in raw_methods:
        start = raw.start_tok.line
        methods.append(
            MethodRecord(
                method_id=make_method_id(ref.repo, ref.path, raw.name, raw.param_count, start),
                repo=ref.repo,
                file=ref.path,
                name=raw.name,
                param_count=raw.param_count,
                start_line=start,
                end_line=raw.end_line,
                body_text="\n".join(lines[start - 1 : raw.end_line]),
                language="php",
                doc_comment=attach_doc_comment(masked, comments, raw.start_tok.offset),
            )
        )
    invocations = [
        InvocationRecord(
            caller_id=methods[m_idx].method_id,
            callee_name=callee,
            arg_count=argc,
            site_line=line,
        )
        for m_idx, callee, argc, line, _col in sorted(calls, key=lambda c: (c[0], c[3], c[4]))
    ]
    return methods, invocations
