/** Landing page: mode selection, level picker, health banner. */

import type { ApiClient } from "./api.js";
import { clear, el } from "./dom.js";
import type { LevelsInfo } from "./types.js";

export class LandingView {
  levels: LevelsInfo | null = null;
  apiDown = false;

  constructor(
    private api: ApiClient,
    private root: HTMLElement,
    private onPlay: (level: number) => void,
    private onAnnotate: (payload: { dct?: string; text: string } | string) => void,
  ) {}

  async start(): Promise<void> {
    try {
      await this.api.health();
      this.levels = await this.api.levels();
      this.apiDown = false;
    } catch {
      this.apiDown = true;
    }
    this.render();
  }

  render(): void {
    clear(this.root);
    if (this.apiDown) {
      this.root.append(
        el("div", { class: "banner api-down", role: "alert" },
          "API unavailable — start the service and reload"),
      );
      return;
    }

    const levelSelect = el("select", { class: "level-select" }) as HTMLSelectElement;
    for (const entry of this.levels?.levels ?? []) {
      levelSelect.append(
        el("option", { value: String(entry.level) },
          `level ${entry.level} (${entry.games} games)`),
      );
    }

    const gameCard = el("div", { class: "mode-card game-mode" },
      el("h2", {}, "Game mode"),
      el("p", {}, "label endpoint pairs on annotated sentences and get scored"),
      levelSelect,
      el("button", {
        class: "start-game",
        onclick: () => this.onPlay(Number(levelSelect.value)),
      }, "play"),
    );

    const textArea = el("textarea", {
      class: "annotation-text",
      placeholder: "paste text to annotate…",
    }) as HTMLTextAreaElement;
    const dctInput = el("input", {
      class: "annotation-dct",
      placeholder: "document creation time (optional)",
    }) as HTMLInputElement;
    const annotateCard = el("div", { class: "mode-card annotation-mode" },
      el("h2", {}, "Annotation mode"),
      el("p", {}, "upload or paste your own text and build a timeline"),
      dctInput,
      textArea,
      el("button", {
        class: "start-annotation",
        onclick: () => {
          const payload: { dct?: string; text: string } = { text: textArea.value };
          if (dctInput.value.trim()) payload.dct = dctInput.value.trim();
          this.onAnnotate(payload);
        },
      }, "annotate"),
    );

    this.root.append(el("div", { class: "landing" }, gameCard, annotateCard));
  }
}
