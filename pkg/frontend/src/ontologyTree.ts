/** View model for the ontology browser: the API's nested class tree
 * flattened into rows according to which nodes the user has expanded.
 * Children render lazily — a collapsed subtree contributes nothing.
 */

import type { TreeConcept, TreeNode } from "./api.js";

export interface TreeRow {
  entityId: string;
  label: string;
  depth: number;
  documentCount: number;
  hasChildren: boolean;
  expanded: boolean;
  concepts: TreeConcept[];
}

export function toggleExpanded(expanded: ReadonlySet<string>, entityId: string): Set<string> {
  const next = new Set(expanded);
  if (next.has(entityId)) {
    next.delete(entityId);
  } else {
    next.add(entityId);
  }
  return next;
}

export function flattenTree(roots: TreeNode[],
                            expanded: ReadonlySet<string>): TreeRow[] {
  const rows: TreeRow[] = [];
  const walk = (node: TreeNode, depth: number) => {
    const isExpanded = expanded.has(node.entity_id);
    rows.push({
      entityId: node.entity_id,
      label: node.label,
      depth,
      documentCount: node.document_count,
      hasChildren: node.children.length > 0,
      expanded: isExpanded,
      concepts: node.concepts,
    });
    if (isExpanded) {
      for (const child of node.children) {
        walk(child, depth + 1);
      }
    }
  };
  for (const root of roots) {
    walk(root, 0);
  }
  return rows;
}

/** Ids of every class in the tree — used to expand all / collapse all. */
export function allClassIds(roots: TreeNode[]): string[] {
  const ids: string[] = [];
  const walk = (node: TreeNode) => {
    ids.push(node.entity_id);
    node.children.forEach(walk);
  };
  roots.forEach(walk);
  return ids;
}
