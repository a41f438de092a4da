"""Java method, invocation, and doc-comment extraction.

A context-tracking scan over the lexer's token stream recognizes the same
constructs a grammar-backed parser would label method_declaration,
method_invocation, and block_comment. The scan never raises on malformed
input: brace tracking simply continues, so a syntax error in one region
does not abort extraction of well-formed regions elsewhere in the file.

Known heuristic limits, acceptable for name+arity call matching: argument
lists mixing a top-level comma with a bare ``<`` comparison can miscount
arguments, and methods declared in enum-constant bodies without argument
lists are not recorded.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .ctok import Token, tokenize
from .records import InvocationRecord, MethodRecord, SourceFileRef, make_method_id

MODIFIERS = frozenset({
    "public", "private", "protected", "static", "final", "abstract",
    "synchronized", "native", "strictfp", "default", "transient",
    "volatile", "sealed",
})
TYPE_KEYWORDS = frozenset({"class", "interface", "enum", "record"})
STMT_KEYWORDS = frozenset({
    "if", "for", "while", "switch", "catch", "return", "throw", "assert",
    "do", "else", "try", "finally", "new", "this", "super", "case",
    "instanceof", "yield", "break", "continue",
})
# identifiers that cannot be the tail of a return type
_NON_TYPE_IDS = MODIFIERS | TYPE_KEYWORDS | {
    "new", "throws", "extends", "implements", "permits",
}


@dataclass
class _Frame:
    kind: str  # file | type | method | other
    type_name: str = ""
    member_start: int = 0
    in_initializer: bool = False


@dataclass
class _RawMethod:
    name: str
    param_count: int
    start_tok: Token
    end_line: int
    decl_offset: int


@dataclass
class ParsedFile:
    methods: list[_RawMethod] = field(default_factory=list)
    # (method index, callee, arg_count, line, col)
    calls: list[tuple[int, str, int, int, int]] = field(default_factory=list)
    block_comments: list[Token] = field(default_factory=list)


def _match(code: list[Token], i: int, opener: str, closer: str) -> int:
    """Index of the token closing the bracket at i; last index if unbalanced."""
    depth = 0
    for j in range(i, len(code)):
        t = code[j].text
        if t == opener:
            depth += 1
        elif t == closer:
            depth -= 1
            if depth == 0:
                return j
    return len(code) - 1


_ISLAND_OK = frozenset({".", ",", "?", "&", "[", "]", "<", ">"})


def _angle_island(code: list[Token], i: int) -> int | None:
    """Matching '>' for a '<' opening a type-argument list, else None."""
    if i == 0 or code[i - 1].kind != "id":
        return None
    depth = 0
    for j in range(i, min(i + 120, len(code))):
        t = code[j]
        if t.text == "<":
            depth += 1
        elif t.text == ">":
            depth -= 1
            if depth == 0:
                return j
        elif t.kind not in ("id", "number") and t.text not in _ISLAND_OK:
            return None
    return None


def _count_params(code: list[Token], open_idx: int, close_idx: int) -> int:
    if close_idx <= open_idx + 1:
        return 0
    commas = 0
    paren = angle = 0
    for j in range(open_idx + 1, close_idx):
        t = code[j].text
        if t == "(":
            paren += 1
        elif t == ")":
            paren -= 1
        elif t == "<":
            angle += 1
        elif t == ">":
            angle = max(0, angle - 1)
        elif t == "," and paren == 0 and angle == 0:
            commas += 1
    return commas + 1


def _count_args(code: list[Token], open_idx: int, close_idx: int) -> int:
    if close_idx <= open_idx + 1:
        return 0
    commas = 0
    depth = 0
    j = open_idx + 1
    while j < close_idx:
        t = code[j].text
        if t in "([{":
            depth += 1
        elif t in ")]}":
            depth = max(0, depth - 1)
        elif t == "<":
            end = _angle_island(code, j)
            if end is not None and end < close_idx:
                j = end + 1
                continue
        elif t == "," and depth == 0:
            commas += 1
        j += 1
    return commas + 1


def parse_java(content: str) -> ParsedFile:
    tokens = tokenize(content, "java")
    out = ParsedFile()
    out.block_comments = [t for t in tokens if t.kind == "comment_block"]
    code = [t for t in tokens if not t.kind.startswith("comment")]

    frames = [_Frame("file")]
    method_stack: list[int] = []
    armed: dict[int, tuple] = {}
    paren_depth = 0

    def arm_type_decl(i: int) -> None:
        # i at class/interface/enum/record keyword; body '{' gets armed
        name = code[i + 1].text
        j = i + 2
        while j < len(code):
            t = code[j].text
            if t == "{":
                armed.setdefault(j, ("type", name))
                return
            if t == ";":
                return
            if t == "(":
                j = _match(code, j, "(", ")")
            elif t == "<":
                end = _angle_island(code, j)
                if end is None:
                    return
                j = end
            j += 1

    def arm_anonymous_class(i: int) -> None:
        # i at 'new'; arm the '{' of `new Qualified.Name(...) {`
        j = i + 1
        if j >= len(code) or code[j].kind != "id":
            return
        while j + 2 < len(code) and code[j + 1].text == "." and code[j + 2].kind == "id":
            j += 2
        j += 1
        if j < len(code) and code[j].text == "<":
            end = _angle_island(code, j)
            if end is None:
                return
            j = end + 1
        if j >= len(code) or code[j].text != "(":
            return
        k = _match(code, j, "(", ")")
        if k + 1 < len(code) and code[k + 1].text == "{":
            armed.setdefault(k + 1, ("type", "<anonymous>"))

    i = 0
    while i < len(code):
        t = code[i]
        frame = frames[-1]

        if t.text == "(":
            paren_depth += 1
        elif t.text == ")":
            paren_depth = max(0, paren_depth - 1)
        elif t.text == "{":
            directive = armed.pop(i, None)
            if directive is None:
                frames.append(_Frame("other"))
            elif directive[0] == "type":
                frames.append(_Frame("type", type_name=directive[1], member_start=i + 1))
            elif directive[0] == "method":
                frames.append(_Frame("method"))
                method_stack.append(directive[1])
            else:  # constructor body
                frames.append(_Frame("other"))
        elif t.text == "}":
            if len(frames) > 1:
                closed = frames.pop()
                if closed.kind == "method" and method_stack:
                    method_stack.pop()
            if frames[-1].kind == "type":
                frames[-1].member_start = i + 1
                frames[-1].in_initializer = False
        elif t.text == ";" and frame.kind == "type" and paren_depth == 0:
            frame.member_start = i + 1
            frame.in_initializer = False
        elif t.text == "=" and frame.kind == "type" and paren_depth == 0:
            frame.in_initializer = True
        elif t.text in TYPE_KEYWORDS and t.kind == "id":
            prev = code[i - 1] if i > 0 else None
            if (prev is None or prev.text != ".") and i + 1 < len(code) and code[i + 1].kind == "id":
                arm_type_decl(i)
        elif t.text == "new":
            arm_anonymous_class(i)

        if t.kind == "id" and i + 1 < len(code) and code[i + 1].text == "(":
            handled = False
            if frame.kind == "type" and not frame.in_initializer:
                handled = _handle_member_candidate(
                    code, i, frame, armed, out
                )
            if not handled:
                _handle_call_candidate(code, i, method_stack, out)

        i += 1

    return out


def _handle_member_candidate(code, i, frame, armed, out) -> bool:
    """Classify `Ident (` at class-member level; True when consumed."""
    close = _match(code, i + 1, "(", ")")
    after = close + 1
    if after < len(code) and code[after].text == "throws":
        after += 1
        while after < len(code) and (
            code[after].kind == "id" or code[after].text in (".", ",")
        ):
            after += 1
    if after >= len(code) or code[after].text not in ("{", ";"):
        return False  # enum constant argument list or stray expression

    prev = code[i - 1] if i > 0 else None
    type_like = prev is not None and (
        (prev.kind == "id" and prev.text not in _NON_TYPE_IDS)
        or prev.text in (">", "]")
    )
    if type_like and code[i].text == frame.type_name and prev.text == ">":
        type_like = False  # `<T> TypeName(...)` is a generic constructor
    has_body = code[after].text == "{"

    if type_like:
        start_tok = code[frame.member_start] if frame.member_start < len(code) else code[i]
        if has_body:
            body_close = _match(code, after, "{", "}")
            end_line = code[body_close].end_line
        else:
            end_line = code[after].line
        out.methods.append(
            _RawMethod(
                name=code[i].text,
                param_count=_count_params(code, i + 1, close),
                start_tok=start_tok,
                end_line=end_line,
                decl_offset=start_tok.offset,
            )
        )
        if has_body:
            armed.setdefault(after, ("method", len(out.methods) - 1))
        return True
    if has_body:
        if code[i].text == frame.type_name:
            armed.setdefault(after, ("ctor",))
        else:
            # enum constant carrying a class body
            armed.setdefault(after, ("type", "<anonymous>"))
        return True
    return True  # `Name(args);` without a return type: enum constant, skip


def _handle_call_candidate(code, i, method_stack, out) -> None:
    t = code[i]
    if t.text in STMT_KEYWORDS:
        return
    prev = code[i - 1] if i > 0 else None
    if prev is not None and (prev.text in ("new", "record", "@")):
        return
    # qualified creation: `new a.b.Foo(`
    if prev is not None and prev.text == ".":
        head = i
        while head >= 2 and code[head - 1].text == "." and code[head - 2].kind == "id":
            head -= 2
        if head >= 1 and code[head - 1].text == "new":
            return
    close = _match(code, i + 1, "(", ")")
    arg_count = _count_args(code, i + 1, close)
    for m_idx in method_stack:
        out.calls.append((m_idx, t.text, arg_count, t.line, t.col))


def strip_block_comment(text: str) -> str:
    """Remove /* */ delimiters and leading per-line '*' decoration."""
    body = text
    if body.startswith("/*"):
        body = body[2:]
    if body.endswith("*/"):
        body = body[:-2]
    lines = []
    for line in body.split("\n"):
        s = line.strip()
        while s.startswith("*"):
            s = s[1:]
        lines.append(s.strip())
    while lines and not lines[0]:
        lines.pop(0)
    while lines and not lines[-1]:
        lines.pop()
    return "\n".join(lines)


def attach_doc_comment(content: str, comments: list[Token], decl_offset: int) -> str | None:
    """Block comment adjacent to a declaration: only whitespace between its
    end and the declaration start, with no blank line."""
    best = None
    for c in comments:
        if c.end_offset <= decl_offset:
            best = c
        else:
            break
    if best is None:
        return None
    gap = content[best.end_offset : decl_offset]
    if gap.strip() or gap.count("\n") > 1:
        return None
    stripped = strip_block_comment(best.text)
    return stripped if stripped else None


def extract_java(ref: SourceFileRef, content: str) -> tuple[list[MethodRecord], list[InvocationRecord]]:
    parsed = parse_java(content)
    lines = content.split("\n")
    methods: list[MethodRecord] = []
    for raw in parsed.methods:
        start = raw.start_tok.line
        body = "\n".join(lines[start - 1 : raw.end_line])
        methods.append(
            MethodRecord(
                method_id=make_method_id(ref.repo, ref.path, raw.name, raw.param_count, start),
                repo=ref.repo,
                file=ref.path,
                name=raw.name,
                param_count=raw.param_count,
                start_line=start,
                end_line=raw.end_line,
                body_text=body,
                language="java",
                doc_comment=attach_doc_comment(content, parsed.block_comments, raw.decl_offset),
            )
        )
    invocations = [
        InvocationRecord(
            caller_id=methods[m_idx].method_id,
            callee_name=callee,
            arg_count=argc,
            site_line=line,
        )
        for m_idx, callee, argc, line, _col in sorted(
            parsed.calls, key=lambda c: (c[0], c[3], c[4])
        )
    ]
    return methods, invocations
