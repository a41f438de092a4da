from __future__ import annotations

import json
import os
import subprocess
from pathlib import Path

import pytest

from helpcom.config import RepoDescriptor, discover_source_files
from helpcom.extraction import decode_source, extract_file

FIXTURES = Path(__file__).parent / "fixtures"
JAVAREPO = FIXTURES / "javarepo"


@pytest.fixture(scope="session")
def javarepo() -> RepoDescriptor:
    return RepoDescriptor(name="javarepo", root_path=JAVAREPO, language="java")


@pytest.fixture(scope="session")
def javarepo_truth() -> dict:
    return json.loads((FIXTURES / "javarepo_truth.json").read_text())


@pytest.fixture(scope="session")
def javarepo_extracted(javarepo):
    """(methods, invocations) for the whole fixture repository."""
    methods, invocations = [], []
    for ref in discover_source_files(javarepo):
        content = decode_source((JAVAREPO / ref.path).read_bytes(), ref.path)
        file_methods, file_invocations = extract_file(ref, content, "java")
        methods.extend(file_methods)
        invocations.extend(file_invocations)
    return methods, invocations


def method_key(method) -> str:
    """file-basename:name/arity, the ground-truth key format."""
    return f"{Path(method.file).name}:{method.name}/{method.param_count}"


def _git(repo: Path, *args: str, author: tuple[str, str] | None = None) -> None:
    env = dict(os.environ)
    if author:
        name, email = author
        env.update(
            GIT_AUTHOR_NAME=name, GIT_AUTHOR_EMAIL=email,
            GIT_COMMITTER_NAME=name, GIT_COMMITTER_EMAIL=email,
        )
    subprocess.run(
        ["git", *args], cwd=repo, env=env, check=True, capture_output=True
    )


HIST_V1 = """public class Hist {
    int a() {
        return 1;
    }

    int b() {
        return 2;
    }

    int c() {
        return 3;
    }

    int d() {
        return 4;
    }
}
"""

# edits keep every method at its original line range
HIST_V2 = HIST_V1.replace("return 1;", "return 10;")
HIST_V3 = HIST_V2.replace("return 2;", "return 20;")

AUTHOR_X = ("Author X", "x@example.com")
AUTHOR_Y = ("Author Y", "y@example.com")


@pytest.fixture()
def git_repo(tmp_path) -> Path:
    """Three-commit repository: X creates Hist.java, X edits a(), Y edits b()."""
    repo = tmp_path / "histrepo"
    repo.mkdir()
    _git(repo, "init", "-q", "-b", "main")
    target = repo / "Hist.java"

    target.write_text(HIST_V1)
    _git(repo, "add", "Hist.java")
    _git(repo, "commit", "-q", "-m", "create methods", author=AUTHOR_X)

    target.write_text(HIST_V2)
    _git(repo, "commit", "-q", "-am", "tune a", author=AUTHOR_X)

    target.write_text(HIST_V3)
    _git(repo, "commit", "-q", "-am", "tune b", author=AUTHOR_Y)
    return repo


@pytest.fixture()
def write_config(tmp_path):
    """Factory writing a minimal YAML config pointing at given repos."""

    def _write(repos: list[RepoDescriptor], **extra) -> Path:
        lines = ["repos:"]
        for repo in repos:
            lines += [
                f"  - name: {repo.name}",
                f"    root: {repo.root_path}",
                f"    language: {repo.language}",
            ]
        lines += [
            "storage:",
            f"  root: {tmp_path / 'runs'}",
        ]
        for block in extra.values():
            lines.append(block)
        path = tmp_path / "config.yaml"
        path.write_text("\n".join(lines) + "\n")
        return path

    return _write
