"""Ontology-driven literature search for desk-scale corpora.

Layers, bottom up: corpus ingestion (`corpus`), rule-based text analysis
(`nlp`), the ontology/thesaurus knowledge model (`knowledge`), the persistent
index cache (`store`) and TF-IDF indexer (`indexer`), Boolean and conceptual
search (`query`, `search`), vocabulary enrichment (`enrichment`), and the
retrieval evaluation harness (`evalharness`).  `engine` ties them together
behind one facade used by both the command line and the HTTP service.
"""

__version__ = "1.0.0"
