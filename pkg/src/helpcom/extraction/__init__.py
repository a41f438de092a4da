"""Source-file extraction: methods, invocations, and doc comments.

Each language profile recognizes the constructs named below; the node
names document what each extractor reports, mirroring the vocabulary of
grammar-backed parsers so downstream stages stay language-agnostic.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ExtractionError
from .java import extract_java
from .php import extract_php
from .pysrc import extract_python
from .records import InvocationRecord, MethodRecord, SourceFileRef, make_method_id

__all__ = [
    "GRAMMAR_PROFILES",
    "GrammarProfile",
    "InvocationRecord",
    "MethodRecord",
    "SourceFileRef",
    "extract_doc_comment",
    "extract_file",
    "extract_invocations",
    "extract_methods",
    "make_method_id",
]


@dataclass(frozen=True)
class GrammarProfile:
    language: str
    extensions: tuple[str, ...]
    declaration_node: str
    invocation_node: str
    comment_node: str


GRAMMAR_PROFILES: dict[str, GrammarProfile] = {
    "java": GrammarProfile(
        language="java",
        extensions=(".java",),
        declaration_node="method_declaration",
        invocation_node="method_invocation",
        comment_node="block_comment",
    ),
    "python": GrammarProfile(
        language="python",
        extensions=(".py",),
        declaration_node="function_definition",
        invocation_node="call",
        comment_node="docstring",
    ),
    "php": GrammarProfile(
        language="php",
        extensions=(".php",),
        declaration_node="method_declaration/function_definition",
        invocation_node="member_call_expression/function_call_expression",
        comment_node="comment (block form)",
    ),
}

_EXTRACTORS = {
    "java": extract_java,
    "python": extract_python,
    "php": extract_php,
}


def extract_file(
    ref: SourceFileRef, content: str, language: str
) -> tuple[list[MethodRecord], list[InvocationRecord]]:
    """One-pass extraction of all method and invocation records in a file."""
    extractor = _EXTRACTORS.get(language)
    if extractor is None:
        raise ExtractionError(f"no grammar profile for language {language!r}")
    return extractor(ref, content)


def extract_methods(
    ref: SourceFileRef, content: str, language: str
) -> list[MethodRecord]:
    """Method declarations in source order, constructors excluded."""
    return extract_file(ref, content, language)[0]


def extract_invocations(method: MethodRecord, content: str) -> list[InvocationRecord]:
    """Call sites within one method's body, ordered by site then column."""
    ref = SourceFileRef(repo=method.repo, path=method.file, content_hash="")
    _methods, invocations = extract_file(ref, content, method.language)
    return [inv for inv in invocations if inv.caller_id == method.method_id]


def extract_doc_comment(content: str, method: MethodRecord) -> str | None:
    """The comment immediately preceding the method, delimiters stripped."""
    ref = SourceFileRef(repo=method.repo, path=method.file, content_hash="")
    for candidate in extract_file(ref, content, method.language)[0]:
        if candidate.method_id == method.method_id:
            return candidate.doc_comment
    return None


def decode_source(data: bytes, path: str) -> str:
    """Decode file bytes as UTF-8; undecodable files are extraction errors."""
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ExtractionError(f"{path}: not decodable as UTF-8 text") from exc
