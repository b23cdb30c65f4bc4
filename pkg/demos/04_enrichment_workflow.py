"""Vocabulary enrichment: from corpus phrases to curated suggestions.

The enrichment pass collects repeated noun phrases the knowledge base does
not know yet, scores them on eight evidence criteria, and guesses where
each would attach in the ontology.  A curator then walks candidates through
a small review workflow; accepted ones export as ready-to-merge suggestions.

Equivalent CLI session:

    ontosearch --config config.json enrich
    ontosearch --config config.json candidates
    ontosearch --config config.json candidate set-state cand-inhaler-device to_validate
    ontosearch --config config.json candidate set-state cand-inhaler-device accepted
    ontosearch --config config.json export-suggestions --out suggestions.json
"""

from _workspace import banner, make_workspace

from ontosearch.engine import Engine


def main() -> None:
    work, config_path = make_workspace()
    engine = Engine.from_config_file(config_path)
    engine.index_corpus()

    banner("Run enrichment")
    outcome = engine.run_enrichment()
    print(f"  {outcome['candidates']} candidate(s), {outcome['new']} new")

    banner("Top five candidates")
    for cand in engine.list_candidates()[:5]:
        evidence = [name for name, value in
                    cand["breakdown"]["components"].items() if value > 0]
        print(f"  {cand['id']:<24} score={cand['score']:.4f} "
              f"freq={cand['frequency']}")
        print(f"      evidence: {', '.join(evidence)}")
        for parent in cand["parents"]:
            mark = "=>" if parent["resolved"] else "?>"
            print(f"      {mark} {parent['parent']} via {parent['detector']} "
                  f"({parent['evidence']})")

    banner("Review the best candidate")
    best = engine.list_candidates()[0]["id"]
    for state, note in (("to_validate", "queued for review"),
                        ("accepted", "clear subclass of Device")):
        cand = engine.set_candidate_state(best, state, note)
        print(f"  {best} -> {cand['state']}  ({note})")

    banner("Export accepted suggestions")
    export = engine.export_suggestions()
    path = work / "suggestions.json"
    path.write_text(__import__("json").dumps(export, indent=2),
                    encoding="utf-8")
    for suggestion in export["suggestions"]:
        broader = [p["parent"] for p in suggestion["suggested_broader"]
                   if p["resolved"]]
        print(f"  {suggestion['candidate_id']}: prefLabel "
              f"{suggestion['pref_label']}, broader {broader}")
    print(f"  written to {path}")


if __name__ == "__main__":
    main()
