/** Tagged text rendering and selection-to-span mapping. */

import { el } from "./dom.js";
import type { EntityView } from "./types.js";

export interface TaggedTextOptions {
  onDelete?: (entity: EntityView) => void;
  onKindChange?: (entity: EntityView, kind: string) => void;
}

export function renderTaggedText(
  text: string,
  entities: EntityView[],
  options: TaggedTextOptions = {},
): HTMLElement {
  const container = el("div", { class: "tagged-text" });
  const ordered = [...entities].sort((a, b) => a.start - b.start);
  let cursor = 0;
  for (const entity of ordered) {
    if (entity.start > cursor) {
      container.append(document.createTextNode(text.slice(cursor, entity.start)));
    }
    const mark = el("mark", {
      class: entity.is_dct ? "entity dct" : "entity",
      "data-entity-id": entity.id,
      "data-kind": entity.kind,
    }, text.slice(entity.start, entity.end));
    if (options.onKindChange && !entity.is_dct) {
      const select = el("select", { class: "kind-select" },
        el("option", { value: "interval" }, "interval"),
        el("option", { value: "instant" }, "instant"),
      ) as HTMLSelectElement;
      select.value = entity.kind;
      select.addEventListener("change", () =>
        options.onKindChange!(entity, select.value),
      );
      mark.append(select);
    }
    if (options.onDelete && !entity.is_dct) {
      mark.append(
        el("button", {
          class: "delete-entity",
          title: "remove entity",
          onclick: () => options.onDelete!(entity),
        }, "×"),
      );
    }
    container.append(mark);
    cursor = entity.end;
  }
  if (cursor < text.length) {
    container.append(document.createTextNode(text.slice(cursor)));
  }
  return container;
}

function textOffset(container: Node, target: Node, offsetInTarget: number): number | null {
  let total = 0;
  const walker = document.createTreeWalker(container, NodeFilter.SHOW_TEXT);
  let node = walker.nextNode();
  while (node) {
    if (node === target) {
      return total + offsetInTarget;
    }
    // widget text (buttons, selects) does not contribute to document text
    if (!isWidgetText(node)) {
      total += (node.textContent ?? "").length;
    }
    node = walker.nextNode();
  }
  return null;
}

function isWidgetText(node: Node): boolean {
  for (let cur = node.parentNode; cur; cur = cur.parentNode) {
    const name = cur.nodeName.toLowerCase();
    if (name === "button" || name === "select" || name === "option") {
      return true;
    }
  }
  return false;
}

/** Character span of the current selection within the tagged-text container. */
export function selectionSpan(
  container: HTMLElement,
  selection: Selection | null,
): { start: number; end: number } | null {
  if (!selection || selection.rangeCount === 0 || selection.isCollapsed) {
    return null;
  }
  const range = selection.getRangeAt(0);
  if (!container.contains(range.startContainer) || !container.contains(range.endContainer)) {
    return null;
  }
  const start = textOffset(container, range.startContainer, range.startOffset);
  const end = textOffset(container, range.endContainer, range.endOffset);
  if (start === null || end === null || start === end) {
    return null;
  }
  return start < end ? { start, end } : { start: end, end: start };
}
