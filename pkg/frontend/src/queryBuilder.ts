/** Boolean query builder: a clause list the UI edits chip by chip.
 *
 * The builder's one hard promise: every string it renders parses on the
 * server.  It keeps that promise by construction — chips are validated on
 * entry, keywords are normalized away from the operator words, multi-word
 * phrases render quoted, and operators only ever join two valid clauses.
 */

export type Chip =
  | { kind: "concept"; id: string; label?: string }
  | { kind: "keyword"; text: string };

export interface Clause {
  chip: Chip;
  negated: boolean;
}

export type Operator = "AND" | "OR";

export interface QueryDraft {
  clauses: Clause[];
  /** operators[i] joins clauses[i] and clauses[i+1]; always clauses.length - 1 */
  operators: Operator[];
}

const CONCEPT_ID = /^[A-Za-z][A-Za-z0-9_-]*$/;
// letters/digits words separated by single spaces; no quotes, parens,
// colons, or anything else the query grammar gives meaning to
const KEYWORD = /^[\p{L}\p{N}]+(?: [\p{L}\p{N}]+)*$/u;

export function emptyDraft(): QueryDraft {
  return { clauses: [], operators: [] };
}

/** Normalize free keyboard input into a keyword chip, or explain why not.
 *
 * Lowercasing is not cosmetic: it keeps user text from colliding with the
 * uppercase operator words AND/OR/NOT.
 */
export function makeKeywordChip(text: string): Chip | { error: string } {
  const normalized = text.trim().replace(/\s+/g, " ").toLowerCase();
  if (!normalized) {
    return { error: "keyword is empty" };
  }
  if (!KEYWORD.test(normalized)) {
    return { error: "keywords may only contain letters, digits, and spaces" };
  }
  return { kind: "keyword", text: normalized };
}

export function makeConceptChip(id: string, label?: string): Chip | { error: string } {
  if (!CONCEPT_ID.test(id)) {
    return { error: `not a valid entity id: ${JSON.stringify(id)}` };
  }
  return { kind: "concept", id, label };
}

export function isChip(value: Chip | { error: string }): value is Chip {
  return !("error" in value);
}

export function addClause(draft: QueryDraft, chip: Chip,
                          operator: Operator = "AND",
                          negated = false): QueryDraft {
  const clauses = [...draft.clauses, { chip, negated }];
  const operators = draft.clauses.length > 0
    ? [...draft.operators, operator]
    : [...draft.operators];
  return { clauses, operators };
}

export function removeClause(draft: QueryDraft, index: number): QueryDraft {
  if (index < 0 || index >= draft.clauses.length) {
    return draft;
  }
  const clauses = draft.clauses.filter((_, i) => i !== index);
  // dropping a clause drops the operator that joined it to its predecessor
  // (or, for the first clause, the one that joined it to its successor)
  const operatorIndex = index === 0 ? 0 : index - 1;
  const operators = draft.operators.filter((_, i) => i !== operatorIndex);
  return { clauses, operators };
}

export function toggleNegated(draft: QueryDraft, index: number): QueryDraft {
  const clauses = draft.clauses.map((clause, i) =>
    i === index ? { ...clause, negated: !clause.negated } : clause);
  return { clauses, operators: [...draft.operators] };
}

export function setOperator(draft: QueryDraft, index: number,
                            operator: Operator): QueryDraft {
  const operators = draft.operators.map((op, i) => (i === index ? operator : op));
  return { clauses: [...draft.clauses], operators };
}

export function canRender(draft: QueryDraft): boolean {
  return draft.clauses.length > 0 &&
    draft.operators.length === draft.clauses.length - 1;
}

function chipText(chip: Chip): string {
  if (chip.kind === "concept") {
    return `concept:${chip.id}`;
  }
  // multi-word phrases must be quoted to stay one term; single bare words
  // are already lowercase so they can never read as an operator
  return chip.text.includes(" ") ? `"${chip.text}"` : chip.text;
}

/** The rendered query string; only call when canRender(draft). */
export function renderQuery(draft: QueryDraft): string {
  if (!canRender(draft)) {
    throw new Error("draft is not renderable");
  }
  const parts: string[] = [];
  draft.clauses.forEach((clause, i) => {
    if (i > 0) {
      parts.push(draft.operators[i - 1]!);
    }
    parts.push((clause.negated ? "NOT " : "") + chipText(clause.chip));
  });
  return parts.join(" ");
}

/** Human-facing chip caption. */
export function chipLabel(chip: Chip): string {
  if (chip.kind === "concept") {
    return chip.label ? `${chip.label} [${chip.id}]` : chip.id;
  }
  return chip.text;
}
