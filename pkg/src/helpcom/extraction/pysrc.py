"""Python method and call extraction via the standard-library parser.

Function definitions anywhere in the file (module level, class bodies,
nested) become method records; ``__init__`` is excluded as a constructor.
The leading ``self``/``cls`` parameter of a method declared directly in a
class body does not count toward the arity, so definitions line up with
``obj.helper(x)`` call sites under name+arity matching. The docstring
plays the role of the method-level comment.

Error tolerance: when the whole file fails to parse, top-level segments
are re-parsed independently so one malformed region does not abort
extraction of the rest.
"""

from __future__ import annotations

import ast

from .records import InvocationRecord, MethodRecord, SourceFileRef, make_method_id

_FUNC_NODES = (ast.FunctionDef, ast.AsyncFunctionDef)


def _parse_tolerant(content: str) -> list[ast.Module]:
    try:
        return [ast.parse(content)]
    except SyntaxError:
        pass
    trees = []
    for seg_text, offset in _top_level_segments(content):
        try:
            tree = ast.parse(seg_text)
        except SyntaxError:
            continue
        ast.increment_lineno(tree, offset)
        trees.append(tree)
    return trees


def _top_level_segments(content: str) -> list[tuple[str, int]]:
    """Split into top-level statement groups on unindented starts.

    Bracket depth and triple-quoted strings are tracked just enough to
    avoid splitting inside a continuation.
    """
    lines = content.split("\n")
    starts = []
    depth = 0
    in_triple: str | None = None
    continued = False
    _ANCHORS = ("def ", "async def ", "class ", "@", "import ", "from ")
    for idx, line in enumerate(lines):
        stripped = line.strip()
        at_margin = bool(line) and not line[0].isspace() and stripped and not stripped.startswith("#")
        # a definition keyword at the margin restarts tracking: an open
        # bracket left dangling by a malformed region must not swallow
        # everything after it
        if at_margin and in_triple is None and line.startswith(_ANCHORS):
            depth = 0
            continued = False
        if depth == 0 and in_triple is None and not continued and at_margin:
            starts.append(idx)
        j = 0
        while j < len(line):
            ch = line[j]
            if in_triple:
                if line.startswith(in_triple, j):
                    in_triple = None
                    j += 3
                    continue
                j += 1
                continue
            if ch == "#":
                break
            if line.startswith(('"""', "'''"), j):
                in_triple = line[j : j + 3]
                j += 3
                continue
            if ch in "\"'":
                # single-line string: skip to closing quote
                k = j + 1
                while k < len(line):
                    if line[k] == "\\":
                        k += 2
                        continue
                    if line[k] == ch:
                        break
                    k += 1
                j = k + 1
                continue
            if ch in "([{":
                depth += 1
            elif ch in ")]}":
                depth = max(0, depth - 1)
            j += 1
        continued = line.rstrip().endswith("\\") and in_triple is None

    segments = []
    for n, start in enumerate(starts):
        end = starts[n + 1] if n + 1 < len(starts) else len(lines)
        segments.append(("\n".join(lines[start:end]), start))
    return segments


def _param_count(node: ast.AST, in_class: bool) -> int:
    args = node.args
    names = [a.arg for a in args.posonlyargs + args.args]
    count = len(names) + len(args.kwonlyargs)
    if in_class and names and names[0] in ("self", "cls"):
        count -= 1
    return count


def _collect_functions(tree: ast.Module):
    """Yield (node, declared_directly_in_class) in source order."""
    found = []

    def visit(node: ast.AST, in_class: bool) -> None:
        for child in ast.iter_child_nodes(node):
            if isinstance(child, _FUNC_NODES):
                found.append((child, in_class))
                visit(child, False)
            elif isinstance(child, ast.ClassDef):
                visit(child, True)
            else:
                visit(child, in_class)

    visit(tree, False)
    found.sort(key=lambda pair: (pair[0].lineno, pair[0].col_offset))
    return found


def _call_name(call: ast.Call) -> str | None:
    func = call.func
    if isinstance(func, ast.Name):
        return func.id
    if isinstance(func, ast.Attribute):
        return func.attr
    return None


def extract_python(
    ref: SourceFileRef, content: str
) -> tuple[list[MethodRecord], list[InvocationRecord]]:
    lines = content.split("\n")
    methods: list[MethodRecord] = []
    invocations: list[InvocationRecord] = []

    for tree in _parse_tolerant(content):
        for node, in_class in _collect_functions(tree):
            if node.name == "__init__":
                continue
            start, end = node.lineno, node.end_lineno or node.lineno
            params = _param_count(node, in_class)
            record = MethodRecord(
                method_id=make_method_id(ref.repo, ref.path, node.name, params, start),
                repo=ref.repo,
                file=ref.path,
                name=node.name,
                param_count=params,
                start_line=start,
                end_line=end,
                body_text="\n".join(lines[start - 1 : end]),
                language="python",
                doc_comment=ast.get_docstring(node, clean=True) or None,
            )
            methods.append(record)
            calls = []
            for sub in ast.walk(node):
                if isinstance(sub, ast.Call):
                    name = _call_name(sub)
                    if name is not None:
                        argc = len(sub.args) + len(sub.keywords)
                        calls.append((sub.lineno, sub.col_offset, name, argc))
            for line, _col, name, argc in sorted(calls):
                invocations.append(
                    InvocationRecord(
                        caller_id=record.method_id,
                        callee_name=name,
                        arg_count=argc,
                        site_line=line,
                    )
                )

    methods.sort(key=lambda m: m.start_line)
    return methods, invocations
