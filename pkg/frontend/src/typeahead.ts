/** On-type concept finder: debounce, minimum-prefix guard, and the mapping
 * from API suggestions to dropdown rows (and from a picked row to a chip).
 */

import type { SuggestItem } from "./api.js";
import { makeConceptChip, type Chip } from "./queryBuilder.js";

export const MIN_PREFIX = 1;
export const DEBOUNCE_MS = 150;

export interface DropdownItem {
  entityId: string;
  label: string;
  /** where the label lives: the ontology (class) or the thesaurus (concept) */
  source: "ontology" | "thesaurus";
  documentCount: number;
}

export function toDropdownItems(items: SuggestItem[]): DropdownItem[] {
  return items.map((item) => ({
    entityId: item.entity_id,
    label: item.label,
    source: item.kind === "class" ? "ontology" : "thesaurus",
    documentCount: item.document_count,
  }));
}

export function shouldQuery(prefix: string): boolean {
  return prefix.trim().length >= MIN_PREFIX;
}

export function itemToChip(item: DropdownItem): Chip {
  const chip = makeConceptChip(item.entityId, item.label);
  if ("error" in chip) {
    // server-provided ids always satisfy the id grammar; guard anyway
    throw new Error(chip.error);
  }
  return chip;
}

export interface Debounced<Args extends unknown[]> {
  (...args: Args): void;
  cancel(): void;
}

export function debounce<Args extends unknown[]>(
  fn: (...args: Args) => void,
  waitMs = DEBOUNCE_MS,
): Debounced<Args> {
  let timer: ReturnType<typeof setTimeout> | undefined;
  const wrapped = (...args: Args) => {
    if (timer !== undefined) {
      clearTimeout(timer);
    }
    timer = setTimeout(() => {
      timer = undefined;
      fn(...args);
    }, waitMs);
  };
  wrapped.cancel = () => {
    if (timer !== undefined) {
      clearTimeout(timer);
      timer = undefined;
    }
  };
  return wrapped;
}
