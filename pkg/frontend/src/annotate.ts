/** Annotation mode: free labelling with entity editing and export. */

import { ApiError, type ApiClient } from "./api.js";
import { openPicker, renderBoard } from "./board.js";
import { clear, el } from "./dom.js";
import { renderTaggedText, selectionSpan } from "./text.js";
import type {
  AnnotationImport,
  CellView,
  NextPair,
  Relation,
  SessionState,
} from "./types.js";

export type FileSaver = (name: string, content: string) => void;

const saveWithAnchor: FileSaver = (name, content) => {
  const blob = new Blob([content], { type: "application/json" });
  const url = URL.createObjectURL(blob);
  const link = document.createElement("a");
  link.href = url;
  link.download = name;
  link.click();
  URL.revokeObjectURL(url);
};

/** Annotation cells accept empty cells, vague placeholders, and inferred labels. */
export function annotatable(cell: CellView): boolean {
  if (cell.playable) return true;
  if (cell.provenance === "inferred") return true;
  return cell.provenance === "user" && cell.relation === "-";
}

export class AnnotateView {
  state: SessionState | null = null;
  toast: string | null = null;
  dynamicMode = false;
  pairMode: "random" | "guided" = "random";
  currentPair: NextPair | null = null;
  rowOffset = 0;
  colOffset = 0;
  private busy = false;

  constructor(
    private api: ApiClient,
    private root: HTMLElement,
    private saveFile: FileSaver = saveWithAnchor,
  ) {}

  async start(payload: AnnotationImport | string): Promise<void> {
    this.state = await this.api.newAnnotation(payload);
    this.render();
  }

  private apply(state: SessionState, toast: string | null = null): void {
    this.state = state;
    this.toast = toast;
    this.currentPair = null;
    this.render();
  }

  private async guard<T>(task: () => Promise<T>): Promise<T | null> {
    if (this.busy) return null;
    this.busy = true;
    try {
      return await task();
    } catch (error) {
      if (error instanceof ApiError) {
        this.toast = error.message;
        this.render();
        return null;
      }
      throw error;
    } finally {
      this.busy = false;
    }
  }

  private async addSpan(start: number, end: number): Promise<void> {
    if (!this.state) return;
    const sessionId = this.state.session_id;
    await this.guard(async () => {
      this.apply(await this.api.addEntity(sessionId, start, end));
    });
  }

  private async annotatePair(source: string, target: string, relation: Relation): Promise<void> {
    if (!this.state) return;
    const sessionId = this.state.session_id;
    await this.guard(async () => {
      const result = await this.api.annotate(sessionId, source, target, relation);
      const toast = result.coherent
        ? null
        : `incoherent: ${result.conflict?.source} ${result.conflict?.existing} ` +
          `${result.conflict?.target} already holds (choice not applied)`;
      this.apply(result.session, toast);
    });
  }

  private async fetchPair(): Promise<void> {
    if (!this.state) return;
    const sessionId = this.state.session_id;
    await this.guard(async () => {
      this.currentPair = await this.api.nextPair(sessionId, this.pairMode);
      this.render();
    });
  }

  async exportAnnotations(): Promise<void> {
    if (!this.state) return;
    const sessionId = this.state.session_id;
    await this.guard(async () => {
      const raw = await this.api.exportRaw(sessionId);
      this.saveFile(`${sessionId}.json`, raw);
    });
  }

  render(): void {
    clear(this.root);
    if (!this.state) return;
    const state = this.state;

    if (this.toast) {
      this.root.append(el("div", { class: "toast", role: "alert" }, this.toast));
    }
    if (!state.coherent) {
      this.root.append(
        el("div", { class: "coherence-flag" }, "last annotation was incoherent"),
      );
    }

    const text = renderTaggedText(state.text, state.entities, {
      onDelete: (entity) => {
        void this.guard(async () => {
          this.apply(await this.api.removeEntity(state.session_id, entity.id));
        });
      },
      onKindChange: (entity, kind) => {
        void this.guard(async () => {
          this.apply(await this.api.setEntityKind(state.session_id, entity.id, kind));
        });
      },
    });
    text.addEventListener("mouseup", () => {
      const span = selectionSpan(text, window.getSelection());
      if (span) {
        window.getSelection()?.removeAllRanges();
        void this.addSpan(span.start, span.end);
      }
    });
    this.root.append(text);

    const controls = el("div", { class: "annotate-controls" },
      el("button", {
        class: "detect-entities",
        onclick: () => {
          void this.guard(async () => {
            this.apply(await this.api.detectEntities(state.session_id));
          });
        },
      }, "Annotate Entities"),
      el("label", { class: "dynamic-toggle" },
        (() => {
          const box = el("input", { type: "checkbox" }) as HTMLInputElement;
          box.checked = this.dynamicMode;
          box.addEventListener("change", () => {
            this.dynamicMode = box.checked;
            this.currentPair = null;
            this.render();
            if (this.dynamicMode) void this.fetchPair();
          });
          return box;
        })(),
        "dynamic mode",
      ),
      (() => {
        const select = el("select", { class: "pair-mode" },
          el("option", { value: "random" }, "random"),
          el("option", { value: "guided" }, "guided"),
        ) as HTMLSelectElement;
        select.value = this.pairMode;
        select.addEventListener("change", () => {
          this.pairMode = select.value as "random" | "guided";
          if (this.dynamicMode) void this.fetchPair();
        });
        return select;
      })(),
      el("button", {
        class: "export",
        onclick: () => void this.exportAnnotations(),
      }, "export"),
    );
    this.root.append(controls);

    if (this.dynamicMode) {
      this.root.append(this.renderPairCard());
    } else {
      this.root.append(
        renderBoard(state.board, {
          canClick: annotatable,
          onCellClick: (cell, anchor) => {
            openPicker(anchor, (relation) => {
              void this.annotatePair(cell.source, cell.target, relation);
            });
          },
          maxRows: 24,
          maxCols: 24,
          rowOffset: this.rowOffset,
          colOffset: this.colOffset,
          onScroll: (rowOffset, colOffset) => {
            this.rowOffset = rowOffset;
            this.colOffset = colOffset;
            this.render();
          },
        }),
      );
    }
  }

  private renderPairCard(): HTMLElement {
    const card = el("div", { class: "pair-card" });
    if (!this.currentPair) {
      card.append(el("p", {}, "fetching next pair…"));
      return card;
    }
    const pair = this.currentPair;
    card.append(
      el("p", { class: "pair-refs" },
        `${pair.source}  ?  ${pair.target}`,
        pair.confidence === null || pair.confidence === undefined
          ? null
          : el("span", { class: "confidence" }, ` (${pair.confidence.toFixed(3)})`),
      ),
    );
    const buttons = el("div", { class: "pair-buttons" });
    for (const relation of ["<", ">", "=", "-"] as Relation[]) {
      buttons.append(
        el("button", {
          class: "pick",
          "data-relation": relation,
          onclick: () => {
            void (async () => {
              await this.annotatePair(pair.source, pair.target, relation);
              if (this.dynamicMode) await this.fetchPair();
            })();
          },
        }, relation),
      );
    }
    card.append(buttons);
    return card;
  }
}
