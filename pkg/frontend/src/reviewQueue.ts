/** Enrichment review queue: the workflow's legal transitions (mirroring the
 * server's table), row sorting, and optimistic state changes that reconcile
 * with the server response — rolling back with a notice on a 409 conflict.
 */

import { ApiError, type ApiClient, type Candidate, type CandidateState } from "./api.js";

/** Must match the server's workflow table exactly; the suite checks it. */
export const TRANSITIONS: Record<CandidateState, readonly CandidateState[]> = {
  new: ["to_validate", "postponed", "rejected"],
  to_validate: ["accepted", "rejected", "postponed"],
  postponed: ["to_validate", "rejected"],
  accepted: [],
  rejected: [],
};

export const ALL_STATES: readonly CandidateState[] =
  ["new", "to_validate", "postponed", "accepted", "rejected"];

/** The actions to render for a row — exactly the legal transitions. */
export function actionsFor(state: CandidateState): readonly CandidateState[] {
  return TRANSITIONS[state] ?? [];
}

export interface QueueRow {
  candidate: Candidate;
  /** set while an optimistic update awaits the server */
  pending: { from: CandidateState } | null;
  /** user-facing message from the last failed action, if any */
  notice: string | null;
}

export function toRow(candidate: Candidate): QueueRow {
  return { candidate, pending: null, notice: null };
}

export type SortKey = "score" | "frequency" | "surface";

export function sortRows(rows: QueueRow[], key: SortKey = "score"): QueueRow[] {
  const sorted = [...rows];
  sorted.sort((a, b) => {
    if (key === "surface") {
      return a.candidate.surface.localeCompare(b.candidate.surface) ||
        a.candidate.id.localeCompare(b.candidate.id);
    }
    return b.candidate[key] - a.candidate[key] ||
      a.candidate.id.localeCompare(b.candidate.id);
  });
  return sorted;
}

/** Flip the row to the target state before the server answers. */
export function applyOptimistic(row: QueueRow, target: CandidateState): QueueRow {
  const from = row.candidate.state;
  if (!actionsFor(from).includes(target)) {
    throw new Error(`illegal transition ${from} -> ${target} reached the UI`);
  }
  return {
    candidate: { ...row.candidate, state: target },
    pending: { from },
    notice: null,
  };
}

/** Adopt the server's answer as truth. */
export function reconcile(row: QueueRow, server: Candidate): QueueRow {
  return { candidate: server, pending: null, notice: null };
}

/** Undo an optimistic flip after the server refused it. */
export function rollback(row: QueueRow, notice: string): QueueRow {
  const state = row.pending ? row.pending.from : row.candidate.state;
  return {
    candidate: { ...row.candidate, state },
    pending: null,
    notice,
  };
}

export interface ActionOutcome {
  row: QueueRow;
  ok: boolean;
}

/** The full optimistic round trip for one action button press. */
export async function performAction(
  client: ApiClient,
  row: QueueRow,
  target: CandidateState,
  note = "",
): Promise<ActionOutcome> {
  const optimistic = applyOptimistic(row, target);
  try {
    const server = await client.setCandidateState(row.candidate.id, target, note);
    return { row: reconcile(optimistic, server), ok: true };
  } catch (err) {
    const message = err instanceof ApiError && err.status === 409
      ? `change refused: ${err.message}`
      : `action failed: ${err instanceof Error ? err.message : String(err)}`;
    return { row: rollback(optimistic, message), ok: false };
  }
}

/** Lines for the score-breakdown popover: criterion, value, weighted part. */
export function breakdownLines(candidate: Candidate): string[] {
  const breakdown = candidate.breakdown;
  if (!breakdown) {
    return ["no breakdown recorded"];
  }
  const lines = Object.entries(breakdown.components)
    .sort(([a], [b]) => a.localeCompare(b))
    .map(([name, value]) => {
      const weight = breakdown.weights[name] ?? 0;
      return `${name}: ${value.toFixed(3)} × ${weight.toFixed(3)}`;
    });
  lines.push(`weighted: ${breakdown.weighted_score.toFixed(3)}`);
  lines.push(`penalty: ×${breakdown.penalty.toFixed(2)}`);
  lines.push(`score: ${(breakdown.weighted_score * breakdown.penalty).toFixed(4)}`);
  return lines;
}
