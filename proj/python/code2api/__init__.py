"""Turn Q&A code snippets into reusable methods.

Thin wrappers over the native core. Structured results are plain dicts.
"""

from __future__ import annotations

import json
import os
from typing import Any, Optional

from . import _core
from ._core import CompileError, ExtractError, IngestError, OverBudget, ParseError

__version__ = _core.__version__

__all__ = [
    "CompileError",
    "ExtractError",
    "IngestError",
    "OverBudget",
    "ParseError",
    "compare",
    "compile_source",
    "extract_api",
    "format_percent",
    "ingest",
    "parse_post_url",
    "parse_signature",
    "render_prompt",
    "run_benchmark",
]

PathLike = os.PathLike | str


def _path(p: Optional[PathLike]) -> Optional[str]:
    return None if p is None else os.fspath(p)


def render_prompt(context: dict, *, use_cot: bool = True, use_few_shot: bool = True,
                  budget: int = 3396) -> dict:
    """Prompt text and its parts for one snippet context."""
    return json.loads(_core.render_prompt(json.dumps(context), use_cot, use_few_shot, budget))


def extract_api(raw_text: str, language: str = "java", answer_id: int = 0) -> dict:
    """Parse a model reply into the generated method and its source."""
    return json.loads(_core.extract_api(raw_text, language, answer_id))


def parse_signature(source: str, language: str = "java") -> dict:
    return json.loads(_core.parse_signature(source, language))


def compare(truth: str, generated: str, language: str = "java", answer_id: int = 0) -> dict:
    """Parameter, return and implementation verdicts for two method sources."""
    return json.loads(_core.compare(truth, generated, language, answer_id))


def compile_source(source: str, language: str = "java", answer_id: int = 0,
                   toolchains: Optional[PathLike] = None) -> dict:
    return json.loads(_core.compile_source(source, language, answer_id, _path(toolchains)))


def ingest(dump: PathLike, language: str = "java", *, min_score: int = 2, top: int = 20000,
           require_accepted: bool = True, out: Optional[PathLike] = None) -> dict:
    return json.loads(_core.ingest(os.fspath(dump), language, min_score, top, require_accepted,
                                   _path(out)))


def run_benchmark(corpus: PathLike, out_dir: PathLike, *, fixtures: Optional[PathLike] = None,
                  truth: Optional[PathLike] = None, manual: Optional[PathLike] = None,
                  language: str = "java", use_cot: bool = True, use_few_shot: bool = True,
                  compile_check: bool = False, workers: int = 4,
                  use_cache: bool = True) -> dict[str, Any]:
    """Run the mock-backed benchmark; per-item records land in out_dir/records.jsonl."""
    return json.loads(_core.run_benchmark(os.fspath(corpus), os.fspath(out_dir), _path(fixtures),
                                          _path(truth), _path(manual), language, use_cot,
                                          use_few_shot, compile_check, workers, use_cache))


def parse_post_url(url: str) -> Optional[dict]:
    text = _core.parse_post_url(url)
    return None if text is None else json.loads(text)


format_percent = _core.format_percent
