"""One concept, four languages, identical results.

The thesaurus carries preferred labels in English, Italian, Spanish, and
Portuguese.  Free-text search recognizes a label in any of those languages,
resolves it to the concept behind it, and runs the same conceptual query —
so the result list does not depend on the language the query was typed in.

Equivalent CLI session:

    ontosearch --config config.json search --text --language it "bronchite cronica"
"""

from _workspace import banner, make_workspace

from ontosearch.engine import Engine


def main() -> None:
    _, config_path = make_workspace()
    engine = Engine.from_config_file(config_path)
    engine.index_corpus()

    concept = engine.kb.concepts["M1"]
    banner("Concept M1 preferred labels")
    for language in ("en", "it", "es", "pt"):
        print(f"  {language}: {concept.pref_label[language]}")

    reference = None
    for language in ("en", "it", "es", "pt"):
        label = concept.pref_label[language]
        banner(f"Free text [{language}]: {label}")
        outcome = engine.search_text(label, language=language)
        recognized = ", ".join(c["entity_id"] for c in outcome["concepts"])
        print(f"  recognized concepts: {recognized or '-'}")
        ranked = [(r["doc_id"], round(r["score"], 6))
                  for r in outcome["results"]]
        print(f"  results: {ranked}")
        if reference is None:
            reference = ranked
        else:
            assert ranked == reference, "languages disagree!"
    print("\nall four languages returned the identical ranked list")


if __name__ == "__main__":
    main()
