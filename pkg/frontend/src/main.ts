/** Single-page shell wiring the view modules to the DOM.  All data flows
 * through the documented HTTP API via ApiClient; nothing here invents
 * endpoints or bypasses the pure view-model modules.
 */

import { ApiClient, ApiError, type Candidate, type CandidateState, type TreeNode } from "./api.js";
import {
  addClause, canRender, chipLabel, emptyDraft, isChip, makeKeywordChip,
  removeClause, renderQuery, setOperator, toggleNegated,
  type Chip, type Operator, type QueryDraft,
} from "./queryBuilder.js";
import { flattenTree, toggleExpanded } from "./ontologyTree.js";
import { debounce, itemToChip, shouldQuery, toDropdownItems, type DropdownItem } from "./typeahead.js";
import { renderCaret, syntaxPosition, toModel, traceCaption, type ResultsModel } from "./resultsView.js";
import { actionsFor, breakdownLines, performAction, sortRows, toRow, type QueueRow, type SortKey } from "./reviewQueue.js";

const client = new ApiClient("");

// ---------------------------------------------------------------- helpers

type Attrs = Record<string, string | ((event: Event) => void)>;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K, attrs: Attrs = {}, ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (typeof value === "function") {
      node.addEventListener(key.replace(/^on/, ""), value);
    } else if (key === "class") {
      node.className = value;
    } else {
      node.setAttribute(key, value);
    }
  }
  for (const child of children) {
    node.append(child);
  }
  return node;
}

function clear(node: HTMLElement): void {
  while (node.firstChild) {
    node.removeChild(node.firstChild);
  }
}

function banner(target: HTMLElement, message: string): void {
  clear(target);
  target.append(el("div", { class: "banner error" }, message));
}

// ------------------------------------------------------------------ state

let draft: QueryDraft = emptyDraft();
let treeData: TreeNode[] | null = null;
let expanded: Set<string> = new Set();
let queueRows: QueueRow[] = [];
let queueFilter: CandidateState | "all" = "all";
let queueSort: SortKey = "score";
let freeTextMode = false;

// ------------------------------------------------------------ search panel

const builderBar = el("div", { class: "builder" });
const keywordInput = el("input", { placeholder: "add keyword…", class: "grow" });
const conceptInput = el("input", { placeholder: "find concept…", class: "grow" });
const dropdown = el("div", { class: "dropdown hidden" });
const languageSelect = el("select", {});
for (const lang of ["en", "it", "es", "pt"]) {
  languageSelect.append(el("option", { value: lang }, lang));
}
const freeTextInput = el("input", { placeholder: "free-text query…", class: "grow hidden" });
const resultsArea = el("div", { class: "results" });

function refreshBuilder(): void {
  clear(builderBar);
  draft.clauses.forEach((clause, i) => {
    if (i > 0) {
      const select = el("select", {
        class: "op",
        onchange: (event) => {
          const value = (event.target as HTMLSelectElement).value as Operator;
          draft = setOperator(draft, i - 1, value);
        },
      });
      for (const op of ["AND", "OR"] as const) {
        const option = el("option", { value: op }, op);
        if (draft.operators[i - 1] === op) {
          option.setAttribute("selected", "selected");
        }
        select.append(option);
      }
      builderBar.append(select);
    }
    const chipNode = el("span", { class: clause.negated ? "chip negated" : "chip" },
      el("button", {
        class: "not",
        title: "toggle NOT",
        onclick: () => { draft = toggleNegated(draft, i); refreshBuilder(); },
      }, clause.negated ? "NOT" : "¬"),
      el("span", {}, chipLabel(clause.chip)),
      el("button", {
        class: "x",
        title: "remove",
        onclick: () => { draft = removeClause(draft, i); refreshBuilder(); },
      }, "×"),
    );
    builderBar.append(chipNode);
  });
  if (draft.clauses.length === 0) {
    builderBar.append(el("span", { class: "hint" },
      "no clauses yet — add keywords or pick concepts"));
  }
}

function insertChip(chip: Chip): void {
  draft = addClause(draft, chip);
  refreshBuilder();
}

function addKeywordFromInput(): void {
  const made = makeKeywordChip(keywordInput.value);
  if (isChip(made)) {
    insertChip(made);
    keywordInput.value = "";
  } else {
    banner(resultsArea, made.error);
  }
}

function renderDropdown(items: DropdownItem[]): void {
  clear(dropdown);
  if (items.length === 0) {
    dropdown.classList.add("hidden");
    return;
  }
  dropdown.classList.remove("hidden");
  for (const item of items) {
    dropdown.append(el("div", {
      class: "dropdown-item",
      onclick: () => {
        insertChip(itemToChip(item));
        conceptInput.value = "";
        renderDropdown([]);
      },
    },
      el("span", { class: "label" }, item.label),
      el("span", { class: "meta" },
        ` ${item.entityId} · ${item.source} · ${item.documentCount} docs`),
    ));
  }
}

const runSuggest = debounce(async (prefix: string, language: string) => {
  if (!shouldQuery(prefix)) {
    renderDropdown([]);
    return;
  }
  try {
    const items = await client.suggest(prefix, language);
    renderDropdown(toDropdownItems(items));
  } catch {
    renderDropdown([]);
  }
});

conceptInput.addEventListener("input", () => {
  runSuggest(conceptInput.value, languageSelect.value);
});

function renderResults(model: ResultsModel): void {
  clear(resultsArea);
  resultsArea.append(el("div", { class: "echo" },
    `query: ${model.queryEcho} — ${model.total} result(s)`));
  if (model.orFallback) {
    resultsArea.append(el("div", { class: "banner notice" },
      "no document matched every part; showing any-part matches instead"));
  }
  if (model.recognizedConcepts.length > 0) {
    resultsArea.append(el("div", { class: "meta" },
      `recognized concepts: ${model.recognizedConcepts.join(", ")}` +
      (model.keywords.length ? ` · keywords: ${model.keywords.join(", ")}` : "")));
  }
  if (model.traces.length > 0) {
    const traceBox = el("details", { class: "traces" },
      el("summary", {}, "expansion trace"));
    for (const line of model.traces) {
      traceBox.append(el("div", {}, traceCaption(line)));
    }
    resultsArea.append(traceBox);
  }
  if (model.rows.length === 0) {
    resultsArea.append(el("div", { class: "empty" }, "no results"));
    return;
  }
  for (const row of model.rows) {
    resultsArea.append(el("div", { class: "result" },
      el("div", { class: "head" },
        el("span", { class: "score" }, row.score),
        el("span", { class: "title" }, row.title || row.docId),
        el("span", { class: "meta" }, ` ${row.docId} · ${row.date} · ${row.language}`),
      ),
      el("div", { class: "snippet" }, row.snippet),
      el("div", { class: "entities" },
        ...row.matchedEntities.map((entity) => el("span", { class: "tag" }, entity))),
    ));
  }
}

async function runSearch(): Promise<void> {
  try {
    if (freeTextMode) {
      const text = freeTextInput.value.trim();
      if (!text) {
        banner(resultsArea, "enter a free-text query first");
        return;
      }
      renderResults(toModel(await client.searchText(text, languageSelect.value)));
      return;
    }
    if (!canRender(draft)) {
      banner(resultsArea, "the query draft is empty");
      return;
    }
    renderResults(toModel(await client.search(renderQuery(draft))));
  } catch (err) {
    if (err instanceof ApiError && err.code === "SyntaxError") {
      const position = syntaxPosition(err.detail);
      clear(resultsArea);
      resultsArea.append(el("div", { class: "banner error" }, err.message));
      if (position !== null) {
        const query = freeTextMode ? freeTextInput.value : renderQuery(draft);
        resultsArea.append(el("pre", { class: "caret" }, renderCaret(query, position)));
      }
    } else {
      banner(resultsArea, err instanceof Error ? err.message : String(err));
    }
  }
}

const searchPanel = el("section", { id: "panel-search" },
  el("div", { class: "row" },
    el("label", { class: "toggle" },
      (() => {
        const box = el("input", { type: "checkbox" });
        box.addEventListener("change", () => {
          freeTextMode = box.checked;
          freeTextInput.classList.toggle("hidden", !freeTextMode);
          builderBar.classList.toggle("hidden", freeTextMode);
          keywordInput.classList.toggle("hidden", freeTextMode);
          conceptInput.classList.toggle("hidden", freeTextMode);
        });
        return box;
      })(),
      " free text"),
    languageSelect,
    el("button", { class: "primary", onclick: () => { void runSearch(); } }, "search"),
  ),
  builderBar,
  el("div", { class: "row" },
    keywordInput,
    el("button", { onclick: addKeywordFromInput }, "add keyword"),
  ),
  el("div", { class: "row suggest-wrap" }, conceptInput, dropdown),
  freeTextInput,
  resultsArea,
);
keywordInput.addEventListener("keydown", (event) => {
  if (event.key === "Enter") addKeywordFromInput();
});
freeTextInput.addEventListener("keydown", (event) => {
  if (event.key === "Enter") void runSearch();
});

// ---------------------------------------------------------- ontology panel

const treeArea = el("div", { class: "tree" });

function refreshTree(): void {
  clear(treeArea);
  if (!treeData) {
    treeArea.append(el("div", { class: "empty" }, "tree not loaded"));
    return;
  }
  for (const row of flattenTree(treeData, expanded)) {
    const indent = "  ".repeat(row.depth);
    const line = el("div", { class: "tree-row" });
    line.append(indent);
    if (row.hasChildren) {
      line.append(el("button", {
        class: "twisty",
        onclick: () => { expanded = toggleExpanded(expanded, row.entityId); refreshTree(); },
      }, row.expanded ? "▾" : "▸"));
    } else {
      line.append(el("span", { class: "twisty leaf" }, "·"));
    }
    line.append(el("button", {
      class: "tree-label",
      title: "insert into query",
      onclick: () => {
        const chip: Chip = { kind: "concept", id: row.entityId, label: row.label };
        insertChip(chip);
      },
    }, `${row.label} [${row.entityId}]`));
    line.append(el("span", { class: "meta" }, ` ${row.documentCount} docs`));
    treeArea.append(line);
    if (row.expanded) {
      for (const concept of row.concepts) {
        const conceptLine = el("div", { class: "tree-row concept" });
        conceptLine.append("  ".repeat(row.depth + 1));
        conceptLine.append(el("button", {
          class: "tree-label",
          onclick: () => {
            insertChip({ kind: "concept", id: concept.entity_id, label: concept.label });
          },
        }, `= ${concept.label} [${concept.entity_id}, ${concept.relation}]`));
        treeArea.append(conceptLine);
      }
    }
  }
}

async function loadTree(): Promise<void> {
  try {
    treeData = await client.tree();
    refreshTree();
  } catch (err) {
    banner(treeArea, `cannot load ontology: ${err instanceof Error ? err.message : String(err)}`);
  }
}

const ontologyPanel = el("section", { id: "panel-ontology", class: "hidden" },
  el("div", { class: "row" },
    el("button", { onclick: () => { void loadTree(); } }, "reload"),
    el("span", { class: "hint" }, "click a label to insert it into the query builder"),
  ),
  treeArea,
);

// ------------------------------------------------------------ review panel

const queueArea = el("div", { class: "queue" });
const enrichStatus = el("span", { class: "meta" });

function refreshQueue(): void {
  clear(queueArea);
  let rows = sortRows(queueRows, queueSort);
  if (queueFilter !== "all") {
    rows = rows.filter((row) => row.candidate.state === queueFilter);
  }
  if (rows.length === 0) {
    queueArea.append(el("div", { class: "empty" }, "no candidates in this view"));
    return;
  }
  for (const row of rows) {
    const cand = row.candidate;
    const actions = el("span", { class: "actions" });
    for (const target of actionsFor(cand.state)) {
      actions.append(el("button", {
        onclick: async () => {
          const outcome = await performAction(client, row, target);
          queueRows = queueRows.map((r) =>
            r.candidate.id === cand.id ? outcome.row : r);
          refreshQueue();
        },
      }, target));
    }
    const breakdown = el("details", { class: "breakdown" },
      el("summary", {}, "score breakdown"));
    for (const line of breakdownLines(cand)) {
      breakdown.append(el("div", {}, line));
    }
    const parents = el("div", { class: "parents" });
    for (const parent of cand.parents) {
      parents.append(el("div", {},
        `${parent.resolved ? "⇒" : "?"} ${parent.parent} via ${parent.detector} — ${parent.evidence}`));
    }
    const rowNode = el("div", { class: `queue-row state-${cand.state}` },
      el("div", { class: "head" },
        el("span", { class: "score" }, cand.score.toFixed(4)),
        el("span", { class: "title" }, cand.surface),
        el("span", { class: "meta" }, ` ${cand.id} · freq ${cand.frequency} · docs ${cand.doc_ids.join(", ")}`),
        el("span", { class: `badge ${cand.state}` }, cand.state),
        actions,
      ),
      breakdown,
      parents,
    );
    if (row.notice) {
      rowNode.append(el("div", { class: "banner error" }, row.notice));
    }
    queueArea.append(rowNode);
  }
}

async function loadCandidates(): Promise<void> {
  try {
    const candidates: Candidate[] = await client.candidates();
    queueRows = candidates.map(toRow);
    refreshQueue();
  } catch (err) {
    banner(queueArea, err instanceof Error ? err.message : String(err));
  }
}

const reviewPanel = el("section", { id: "panel-review", class: "hidden" },
  el("div", { class: "row" },
    el("button", {
      class: "primary",
      onclick: async () => {
        try {
          const outcome = await client.enrich();
          enrichStatus.textContent =
            ` ${outcome.candidates} candidate(s), ${outcome.new} new`;
          await loadCandidates();
        } catch (err) {
          banner(queueArea, err instanceof Error ? err.message : String(err));
        }
      },
    }, "run enrichment"),
    el("button", { onclick: () => { void loadCandidates(); } }, "refresh"),
    (() => {
      const select = el("select", {
        onchange: (event) => {
          queueFilter = (event.target as HTMLSelectElement).value as typeof queueFilter;
          refreshQueue();
        },
      });
      for (const state of ["all", "new", "to_validate", "postponed", "accepted", "rejected"]) {
        select.append(el("option", { value: state }, state));
      }
      return select;
    })(),
    (() => {
      const select = el("select", {
        onchange: (event) => {
          queueSort = (event.target as HTMLSelectElement).value as SortKey;
          refreshQueue();
        },
      });
      for (const key of ["score", "frequency", "surface"]) {
        select.append(el("option", { value: key }, `sort by ${key}`));
      }
      return select;
    })(),
    enrichStatus,
  ),
  queueArea,
);

// ------------------------------------------------------------------- shell

const panels = {
  search: searchPanel,
  ontology: ontologyPanel,
  review: reviewPanel,
} as const;

function showPanel(name: keyof typeof panels): void {
  for (const [key, panel] of Object.entries(panels)) {
    panel.classList.toggle("hidden", key !== name);
  }
  for (const button of document.querySelectorAll("nav button")) {
    button.classList.toggle("active",
      button.getAttribute("data-panel") === name);
  }
  if (name === "ontology" && !treeData) void loadTree();
  if (name === "review" && queueRows.length === 0) void loadCandidates();
}

const statsLine = el("span", { class: "meta" });

async function loadStats(): Promise<void> {
  try {
    const stats = await client.stats();
    statsLine.textContent =
      `${stats.documents} documents · ${stats.classes} classes · ` +
      `${stats.concepts} concepts · ${stats.candidates} candidates`;
  } catch (err) {
    statsLine.textContent = err instanceof ApiError && err.status === 0
      ? "API unreachable"
      : `stats unavailable: ${err instanceof Error ? err.message : String(err)}`;
  }
}

function mount(): void {
  const app = document.getElementById("app");
  if (!app) {
    return;
  }
  const nav = el("nav", {});
  for (const name of Object.keys(panels) as (keyof typeof panels)[]) {
    nav.append(el("button", {
      "data-panel": name,
      onclick: () => showPanel(name),
    }, name));
  }
  app.append(
    el("header", {}, el("h1", {}, "ontosearch"), nav, statsLine),
    searchPanel, ontologyPanel, reviewPanel,
  );
  refreshBuilder();
  showPanel("search");
  void loadStats();
}

mount();
