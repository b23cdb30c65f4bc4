"""Keyword search versus concept search on the same corpus.

The literal keyword ``copd`` only finds documents that spell the word out.
The concept reference ``concept:COPD`` expands through the ontology (its
subclasses) and the thesaurus (mapped concepts and their narrower terms),
so documents about emphysema or chronic bronchitis surface too — without
the query author enumerating any of that vocabulary.

Equivalent CLI session:

    ontosearch --config config.json search "copd"
    ontosearch --config config.json search "concept:COPD"
    ontosearch --config config.json search "concept:COPD AND NOT emphysema"
"""

from _workspace import banner, make_workspace

from ontosearch.engine import Engine


def show(outcome: dict) -> None:
    print(f"  query: {outcome['query']}   ({outcome['total']} results)")
    for entity, info in outcome.get("expansion", {}).items():
        print(f"  expanded {entity}: {', '.join(info['entities'])}")
    for row in outcome["results"]:
        entities = ",".join(row["matched_entities"]) or "-"
        print(f"    {row['doc_id']}  score={row['score']:.4f}  "
              f"[{entities}]  {row['title']}")
        print(f"       ...{row['snippet']}...")


def main() -> None:
    _, config_path = make_workspace()
    engine = Engine.from_config_file(config_path)
    engine.index_corpus()

    banner("Keyword query: copd")
    show(engine.search("copd"))

    banner("Concept query: concept:COPD")
    show(engine.search("concept:COPD"))

    banner("Boolean composition: concept:COPD AND NOT emphysema")
    show(engine.search("concept:COPD AND NOT emphysema"))


if __name__ == "__main__":
    main()
