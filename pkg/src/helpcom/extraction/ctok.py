"""Lossy, error-tolerant lexer for brace-structured languages (Java, PHP).

Produces a flat token stream with positions. Comments are emitted as
tokens so doc-comment adjacency can be checked; strings and character
literals are opaque single tokens so braces inside them never disturb
nesting. The lexer never fails: unterminated constructs run to EOF.
"""

from __future__ import annotations

from dataclasses import dataclass

_MULTI_PUNCT = ("::", "->", "=>", "...")

_ID_START = frozenset(
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_$"
)
_ID_CONT = _ID_START | frozenset("0123456789")


@dataclass(frozen=True)
class Token:
    kind: str  # id | punct | string | number | comment_block | comment_line
    text: str
    line: int  # 1-based
    col: int  # 0-based
    end_line: int
    offset: int  # byte offset of first char
    end_offset: int  # offset one past last char


class _Cursor:
    def __init__(self, src: str):
        self.src = src
        self.i = 0
        self.line = 1
        self.col = 0

    def eof(self) -> bool:
        return self.i >= len(self.src)

    def peek(self, ahead: int = 0) -> str:
        j = self.i + ahead
        return self.src[j] if j < len(self.src) else ""

    def advance(self, n: int = 1) -> None:
        for _ in range(n):
            if self.eof():
                return
            if self.src[self.i] == "\n":
                self.line += 1
                self.col = 0
            else:
                self.col += 1
            self.i += 1


def _scan_until(cur: _Cursor, terminator: str, escapes: bool) -> None:
    while not cur.eof():
        ch = cur.peek()
        if escapes and ch == "\\":
            cur.advance(2)
            continue
        if cur.src.startswith(terminator, cur.i):
            cur.advance(len(terminator))
            return
        cur.advance()


def tokenize(src: str, language: str = "java") -> list[Token]:
    php = language == "php"
    cur = _Cursor(src)
    tokens: list[Token] = []

    def emit(kind: str, start_i: int, start_line: int, start_col: int) -> None:
        tokens.append(
            Token(
                kind=kind,
                text=src[start_i : cur.i],
                line=start_line,
                col=start_col,
                end_line=cur.line,
                offset=start_i,
                end_offset=cur.i,
            )
        )

    while not cur.eof():
        ch = cur.peek()
        start_i, start_line, start_col = cur.i, cur.line, cur.col

        if ch in " \t\r\n":
            cur.advance()
            continue

        if ch == "/" and cur.peek(1) == "/":
            _scan_line_comment(cur)
            emit("comment_line", start_i, start_line, start_col)
            continue
        if php and ch == "#" and cur.peek(1) != "[":
            _scan_line_comment(cur)
            emit("comment_line", start_i, start_line, start_col)
            continue
        if ch == "/" and cur.peek(1) == "*":
            cur.advance(2)
            _scan_until(cur, "*/", escapes=False)
            emit("comment_block", start_i, start_line, start_col)
            continue

        if ch == '"':
            if not php and cur.peek(1) == '"' and cur.peek(2) == '"':
                cur.advance(3)  # Java text block
                _scan_until(cur, '"""', escapes=True)
            else:
                cur.advance()
                _scan_until(cur, '"', escapes=True)
            emit("string", start_i, start_line, start_col)
            continue
        if ch == "'":
            cur.advance()
            _scan_until(cur, "'", escapes=True)
            emit("string", start_i, start_line, start_col)
            continue
        if php and ch == "<" and cur.peek(1) == "<" and cur.peek(2) == "<":
            _scan_heredoc(cur)
            emit("string", start_i, start_line, start_col)
            continue

        if ch in _ID_START:
            cur.advance()
            while not cur.eof() and cur.peek() in _ID_CONT:
                cur.advance()
            emit("id", start_i, start_line, start_col)
            continue
        if ch.isdigit():
            cur.advance()
            while not cur.eof() and (cur.peek() in _ID_CONT or cur.peek() == "."):
                cur.advance()
            emit("number", start_i, start_line, start_col)
            continue

        for op in _MULTI_PUNCT:
            if src.startswith(op, cur.i):
                # "..." only for Java varargs; PHP has no such operator
                if op == "..." and php:
                    continue
                cur.advance(len(op))
                emit("punct", start_i, start_line, start_col)
                break
        else:
            cur.advance()
            emit("punct", start_i, start_line, start_col)

    return tokens


def _scan_line_comment(cur: _Cursor) -> None:
    while not cur.eof() and cur.peek() != "\n":
        cur.advance()


def _scan_heredoc(cur: _Cursor) -> None:
    cur.advance(3)
    while not cur.eof() and cur.peek() in " \t":
        cur.advance()
    quote = cur.peek() if cur.peek() in "\"'" else ""
    if quote:
        cur.advance()
    label_start = cur.i
    while not cur.eof() and cur.peek() in _ID_CONT:
        cur.advance()
    label = cur.src[label_start : cur.i]
    if quote and cur.peek() == quote:
        cur.advance()
    if not label:
        return
    # consume lines until one whose first non-blank token is the label
    while not cur.eof():
        while not cur.eof() and cur.peek() != "\n":
            cur.advance()
        cur.advance()  # newline
        j = cur.i
        while j < len(cur.src) and cur.src[j] in " \t":
            j += 1
        if cur.src.startswith(label, j):
            cur.advance(j - cur.i + len(label))
            return


def php_code_regions(src: str) -> list[tuple[int, int]]:
    """Spans of PHP code between open/close tags; whole file if no tag."""
    if "<?" not in src:
        return [(0, len(src))]
    regions = []
    i = 0
    while True:
        start = src.find("<?", i)
        if start == -1:
            break
        body = start + 2
        if src.startswith("php", body):
            body += 3
        elif src.startswith("=", body):
            body += 1
        end = src.find("?>", body)
        if end == -1:
            regions.append((body, len(src)))
            break
        regions.append((body, end))
        i = end + 2
    return regions
