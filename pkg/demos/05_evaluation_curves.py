"""Measuring retrieval quality against relevance judgments.

Two judgment files over the same corpus share relevance labels but phrase
the queries differently: one as literal keyword queries, one as concept
references.  The harness scores both, compares them per query, and writes
the precision/recall trade-off at every result-list depth to CSV.

Equivalent CLI session:

    ontosearch --config config.json eval judgments/conceptual.tsv \
        --compare judgments/baseline.tsv --curve curve.csv
"""

from _workspace import FIXTURES, banner, make_workspace

from ontosearch.engine import Engine
from ontosearch.evalharness import compare, write_curve_csv


def report_lines(report) -> None:
    for qid in sorted(report.outcomes):
        out = report.outcomes[qid]
        print(f"    {qid}: P {out.measure.precision:.4f}  "
              f"R {out.measure.recall:.4f}  F {out.f_score:.4f}  "
              f"retrieved {out.retrieved}")
    print(f"    macro: P {report.macro_precision:.4f}  "
          f"R {report.macro_recall:.4f}  F {report.macro_f:.4f}")


def main() -> None:
    work, config_path = make_workspace()
    engine = Engine.from_config_file(config_path)
    engine.index_corpus()

    conceptual_path = FIXTURES / "judgments/conceptual.tsv"
    baseline_path = FIXTURES / "judgments/baseline.tsv"

    banner("Concept queries")
    conceptual = engine.evaluate_file(conceptual_path)
    report_lines(conceptual)

    banner("Keyword baseline")
    baseline = engine.evaluate_file(baseline_path)
    report_lines(baseline)

    banner("Per-query F delta (concept minus keyword)")
    for row in compare(conceptual, baseline):
        verdict = "tie" if abs(row.delta) < 1e-12 else "concept wins"
        print(f"    {row.query_id}: {row.f_a:.4f} vs {row.f_b:.4f}  "
              f"delta {row.delta:+.4f}  ({verdict})")

    banner("Truncation curve")
    points = engine.curve_file(conceptual_path)
    csv_path = work / "curve.csv"
    write_curve_csv(points, csv_path)
    print(f"  {len(points)} points written to {csv_path}")
    for line in csv_path.read_text(encoding="utf-8").splitlines()[:8]:
        print(f"    {line}")


if __name__ == "__main__":
    main()
