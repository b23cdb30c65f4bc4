/** Presentation models for search output: ranked rows, expansion traces,
 * the OR-fallback notice, and caret rendering for server-reported syntax
 * errors.  Pure data-in data-out so it tests without a DOM.
 */

import type { SearchResponse, TextSearchResponse } from "./api.js";

export interface DisplayRow {
  docId: string;
  score: string;
  title: string;
  date: string;
  language: string;
  snippet: string;
  matchedEntities: string[];
}

export interface TraceLine {
  root: string;
  entity: string;
  step: string;
}

export interface ResultsModel {
  queryEcho: string;
  total: number;
  rows: DisplayRow[];
  traces: TraceLine[];
  orFallback: boolean;
  recognizedConcepts: string[];
  keywords: string[];
}

export function formatScore(score: number): string {
  return score.toFixed(4);
}

export function toModel(response: SearchResponse | TextSearchResponse): ResultsModel {
  const rows = response.results.map((row) => ({
    docId: row.doc_id,
    score: formatScore(row.score),
    title: row.title,
    date: row.date,
    language: row.language,
    snippet: row.snippet,
    matchedEntities: row.matched_entities,
  }));
  const traces: TraceLine[] = [];
  for (const [root, expansion] of Object.entries(response.expansion)) {
    for (const [entity, step] of Object.entries(expansion.trace)) {
      traces.push({ root, entity, step });
    }
  }
  const text = response as Partial<TextSearchResponse>;
  return {
    queryEcho: response.query,
    total: response.total,
    rows,
    traces,
    orFallback: text.or_fallback ?? false,
    recognizedConcepts: (text.concepts ?? []).map((c) => c.entity_id),
    keywords: text.keywords ?? [],
  };
}

export function traceCaption(line: TraceLine): string {
  return line.step === "self"
    ? `${line.entity} (the query entity)`
    : `${line.entity} (${line.step} of ${line.root})`;
}

/** Two lines: the query, and a caret under the offending position. */
export function renderCaret(query: string, position: number): string {
  const clamped = Math.max(0, Math.min(position, query.length));
  return `${query}\n${" ".repeat(clamped)}^`;
}

/** Pull the caret position out of a SyntaxError payload, if it has one. */
export function syntaxPosition(detail: unknown): number | null {
  if (detail && typeof detail === "object" && "position" in detail) {
    const value = (detail as { position: unknown }).position;
    if (typeof value === "number" && Number.isInteger(value)) {
      return value;
    }
  }
  return null;
}
