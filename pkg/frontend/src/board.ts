/** Temporal board grid.
 *
 * The board is upper-triangular: the first endpoint never appears as a
 * column and the last never as a row.  Instant endpoints render with an
 * "i " prefix.  Large boards are windowed: only `maxRows` x `maxCols`
 * headers render at a time and the window is shifted with scroller buttons.
 */

import { clear, el } from "./dom.js";
import type { BoardView, CellView, ComparisonCell, EndpointView } from "./types.js";

export interface BoardWindow {
  start: number;
  end: number;
}

export function visibleWindow(total: number, offset: number, max: number): BoardWindow {
  if (total <= max) {
    return { start: 0, end: total };
  }
  const start = Math.max(0, Math.min(offset, total - max));
  return { start, end: start + max };
}

export function headerLabel(endpoint: EndpointView): string {
  if (endpoint.kind === "instant") {
    return `i ${endpoint.entity_text}`;
  }
  return `${endpoint.entity_text}.${endpoint.side}`;
}

export interface BoardOptions {
  canClick?: (cell: CellView) => boolean;
  onCellClick?: (cell: CellView, anchor: HTMLElement) => void;
  comparison?: Map<string, ComparisonCell>;
  maxRows?: number;
  maxCols?: number;
  rowOffset?: number;
  colOffset?: number;
  onScroll?: (rowOffset: number, colOffset: number) => void;
}

export function comparisonKey(source: string, target: string): string {
  return `${source}|${target}`;
}

export function renderBoard(view: BoardView, options: BoardOptions = {}): HTMLElement {
  const endpoints = view.endpoints;
  const cellsByKey = new Map<string, CellView>();
  for (const cell of view.cells) {
    cellsByKey.set(comparisonKey(cell.source, cell.target), cell);
  }
  const indexOf = new Map(endpoints.map((ep, i) => [ep.ref, i]));

  const rows = endpoints.slice(0, -1);
  const cols = endpoints.slice(1);
  const maxRows = options.maxRows ?? 32;
  const maxCols = options.maxCols ?? 32;
  const rowWin = visibleWindow(rows.length, options.rowOffset ?? 0, maxRows);
  const colWin = visibleWindow(cols.length, options.colOffset ?? 0, maxCols);

  const table = el("table", { class: "board" });
  const head = el("tr", {}, el("th"));
  for (const col of cols.slice(colWin.start, colWin.end)) {
    head.append(
      el("th", { class: col.kind === "instant" ? "instant" : "" }, headerLabel(col)),
    );
  }
  table.append(head);

  for (const row of rows.slice(rowWin.start, rowWin.end)) {
    const tr = el("tr", {},
      el("th", { class: row.kind === "instant" ? "instant" : "" }, headerLabel(row)),
    );
    const rowIndex = indexOf.get(row.ref)!;
    for (const col of cols.slice(colWin.start, colWin.end)) {
      const colIndex = indexOf.get(col.ref)!;
      if (colIndex <= rowIndex) {
        tr.append(el("td", { class: "hidden" }));
        continue;
      }
      const cell = cellsByKey.get(comparisonKey(row.ref, col.ref))!;
      tr.append(renderCell(cell, options));
    }
    table.append(tr);
  }

  const wrapper = el("div", { class: "board-wrap" }, table);
  if (options.onScroll && (rows.length > maxRows || cols.length > maxCols)) {
    const rowOffset = options.rowOffset ?? 0;
    const colOffset = options.colOffset ?? 0;
    wrapper.append(
      el("div", { class: "board-scroll" },
        el("button", {
          class: "scroll-up",
          onclick: () => options.onScroll!(Math.max(0, rowOffset - maxRows), colOffset),
        }, "▲"),
        el("button", {
          class: "scroll-down",
          onclick: () => options.onScroll!(rowOffset + maxRows, colOffset),
        }, "▼"),
        el("button", {
          class: "scroll-left",
          onclick: () => options.onScroll!(rowOffset, Math.max(0, colOffset - maxCols)),
        }, "◀"),
        el("button", {
          class: "scroll-right",
          onclick: () => options.onScroll!(rowOffset, colOffset + maxCols),
        }, "▶"),
      ),
    );
  }
  return wrapper;
}

function renderCell(cell: CellView, options: BoardOptions): HTMLElement {
  const compared = options.comparison?.get(comparisonKey(cell.source, cell.target));
  const clickable = !compared && (options.canClick?.(cell) ?? cell.playable);
  const classes = ["cell", cell.provenance];
  if (clickable) classes.push("clickable");
  if (compared?.mismatch) classes.push("mismatch");
  const td = el("td", {
    class: classes.join(" "),
    "data-source": cell.source,
    "data-target": cell.target,
  });
  if (compared) {
    td.append(el("span", { class: "predicted" }, compared.predicted));
    td.append(el("span", { class: "gold" }, compared.gold ?? "·"));
  } else {
    td.append(el("span", { class: "label" }, cell.relation ?? ""));
  }
  if (clickable && options.onCellClick) {
    td.addEventListener("click", () => options.onCellClick!(cell, td));
  }
  return td;
}

/** Four-label picker anchored to a cell; resolves with the chosen relation. */
export function openPicker(
  anchor: HTMLElement,
  onChoose: (relation: "<" | ">" | "=" | "-") => void,
): HTMLElement {
  document.querySelectorAll(".picker").forEach((p) => p.remove());
  const picker = el("div", { class: "picker", role: "menu" });
  const labels: ["<", ">", "=", "-"] = ["<", ">", "=", "-"];
  for (const label of labels) {
    picker.append(
      el("button", {
        class: "pick",
        "data-relation": label,
        onclick: () => {
          picker.remove();
          onChoose(label);
        },
      }, label),
    );
  }
  picker.append(
    el("button", { class: "pick-cancel", onclick: () => picker.remove() }, "×"),
  );
  anchor.append(picker);
  return picker;
}

export function rerender(root: HTMLElement, content: HTMLElement): void {
  clear(root);
  root.append(content);
}
