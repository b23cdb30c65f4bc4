"""Shared scaffolding for the demo scripts.

Each demo works inside a throwaway directory whose config points at the
bundled fixture corpus and knowledge files, so running a demo never touches
the repository itself.
"""

from __future__ import annotations

import json
import shutil
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "fixtures"


def make_workspace(corpus: str = "corpus-eval",
                   copy_corpus: bool = False) -> tuple[Path, Path]:
    """Create a temp workspace; returns (workspace_dir, config_path).

    With ``copy_corpus`` the fixture corpus is copied in, so demos that add
    documents mutate only their own copy.
    """
    work = Path(tempfile.mkdtemp(prefix="ontosearch-demo-"))
    corpus_dir = FIXTURES / corpus
    if copy_corpus:
        corpus_dir = work / "corpus"
        shutil.copytree(FIXTURES / corpus, corpus_dir)
    config = {
        "corpus_dir": str(corpus_dir),
        "ontology_file": str(FIXTURES / "kb/ontology.json"),
        "thesaurus_file": str(FIXTURES / "kb/thesaurus.json"),
        "mapping_file": str(FIXTURES / "kb/mapping.json"),
        "lexicon_file": str(FIXTURES / "lexicon/entries.jsonl"),
        "lemma_exceptions_file": str(FIXTURES / "lexicon/lemma-exceptions.txt"),
        "stopwords_file": str(FIXTURES / "lexicon/stopwords.txt"),
        "abbreviations_file": str(FIXTURES / "lexicon/abbreviations.txt"),
        "patterns_file": str(FIXTURES / "lexicon/patterns.txt"),
        "snapshot_file": str(work / "var/index.snapshot"),
        "candidates_file": str(work / "var/candidates.json"),
        "min_candidate_frequency": 2,
    }
    config_path = work / "config.json"
    config_path.write_text(json.dumps(config, indent=2), encoding="utf-8")
    return work, config_path


def banner(title: str) -> None:
    print(f"\n=== {title} " + "=" * max(0, 66 - len(title)))
