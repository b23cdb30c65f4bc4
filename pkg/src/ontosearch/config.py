"""Engine configuration: one JSON file, overridable from the environment.

Paths in the file are resolved relative to the file's own directory, so a
fixture tree can be moved or copied wholesale.  Any field can be overridden
with ``ONTOSEARCH_<FIELD>`` (upper-cased), which is how tests and containers
point one config at scratch locations.
"""

from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass
from pathlib import Path

from .errors import IoFailure

ENV_PREFIX = "ONTOSEARCH_"


@dataclass
class EngineConfig:
    corpus_dir: str = "corpus"
    ontology_file: str = "kb/ontology.json"
    thesaurus_file: str = "kb/thesaurus.json"
    mapping_file: str = "kb/mapping.json"
    lexicon_file: str = "lexicon/entries.jsonl"
    lemma_exceptions_file: str = "lexicon/lemma-exceptions.txt"
    stopwords_file: str = "lexicon/stopwords.txt"
    abbreviations_file: str = "lexicon/abbreviations.txt"
    patterns_file: str = "lexicon/patterns.txt"
    snapshot_file: str = "var/index.snapshot"
    candidates_file: str = "var/candidates.json"
    min_candidate_frequency: int = 2

    _PATH_FIELDS = ("corpus_dir", "ontology_file", "thesaurus_file",
                    "mapping_file", "lexicon_file", "lemma_exceptions_file",
                    "stopwords_file", "abbreviations_file", "patterns_file",
                    "snapshot_file", "candidates_file")

    def resolve(self, base: Path) -> "EngineConfig":
        values = dataclasses.asdict(self)
        for name in self._PATH_FIELDS:
            values[name] = str((base / values[name]).resolve())
        return EngineConfig(**values)


def load_config(path: str | Path) -> EngineConfig:
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise IoFailure(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise IoFailure(f"config {path} is not valid JSON: {exc}") from exc

    known = {f.name for f in dataclasses.fields(EngineConfig)}
    unknown = set(raw) - known
    if unknown:
        raise IoFailure(f"config {path} has unknown keys: {sorted(unknown)}")
    config = EngineConfig(**raw)

    for field_ in dataclasses.fields(EngineConfig):
        env_value = os.environ.get(ENV_PREFIX + field_.name.upper())
        if env_value is not None:
            if field_.type == "int" or isinstance(getattr(config, field_.name), int):
                setattr(config, field_.name, int(env_value))
            else:
                setattr(config, field_.name, env_value)
    return config.resolve(path.parent.resolve())
