"""From raw files to a searchable index.

Walks the first mile of the pipeline: normalize raw text and HTML into
corpus records, index everything, then show what the index knows and that
a second indexing pass is a no-op (the snapshot carries the state).

Equivalent CLI session:

    ontosearch --config config.json ingest notes.txt bulletin.html
    ontosearch --config config.json index
    ontosearch --config config.json stats
"""

from _workspace import banner, make_workspace

from ontosearch.corpus import ingest_document, write_record
from ontosearch.engine import Engine


def main() -> None:
    work, config_path = make_workspace(corpus="corpus-mini", copy_corpus=True)
    print(f"workspace: {work}")

    banner("Ingest raw files")
    raw_note = b"COPD flares kept three patients in the ward overnight.\n"
    raw_html = (b"<html><head><title>Clinic bulletin</title></head><body>"
                b"<h1>Clinic bulletin</h1><p>Spirometry screening resumes "
                b"on Monday for the respiratory cohort.</p></body></html>")
    corpus_dir = work / "corpus"
    for raw, fmt, title in ((raw_note, "plain", "ward-note"),
                            (raw_html, "html", "clinic-bulletin")):
        doc = ingest_document(raw, fmt, {"title": title, "language": "en"})
        write_record(doc, corpus_dir / f"{doc.id}.rec")
        print(f"  {fmt:<6} -> {doc.id}  title={doc.title!r}")
        print(f"           text: {doc.text[:70]!r}")

    banner("Index the corpus")
    engine = Engine.from_config_file(config_path)
    outcome = engine.index_corpus()
    print(f"  added={outcome['added']} removed={outcome['removed']} "
          f"updated={outcome['updated']} rebuilt={outcome['rebuilt']}")

    banner("Index statistics")
    for key, value in engine.stats().items():
        print(f"  {key}: {value}")

    banner("Indexing again changes nothing")
    again = Engine.from_config_file(config_path).index_corpus()
    print(f"  added={again['added']} removed={again['removed']} "
          f"updated={again['updated']} rebuilt={again['rebuilt']}")


if __name__ == "__main__":
    main()
