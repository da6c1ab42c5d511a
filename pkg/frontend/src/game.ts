/** Game mode: play a sampled board to a coherent or incoherent end. */

import type { ApiClient } from "./api.js";
import { comparisonKey, openPicker, renderBoard } from "./board.js";
import { clear, el } from "./dom.js";
import { renderTaggedText } from "./text.js";
import type { ComparisonCell, EpisodeState, Relation, StepResult } from "./types.js";

export class GameView {
  state: EpisodeState | null = null;
  lastReward: number | null = null;
  private busy = false;

  constructor(
    private api: ApiClient,
    private root: HTMLElement,
    private onNewGame?: (level: number) => void,
  ) {}

  async start(level: number): Promise<void> {
    this.state = await this.api.newGame(level);
    this.lastReward = null;
    this.render();
  }

  /** Fold a step response into fresh view state; the server is authoritative. */
  private apply(result: StepResult): void {
    if (!this.state) return;
    this.state = {
      ...this.state,
      board: result.board,
      score: result.score,
      status: result.status,
      done: result.done,
      comparison: result.comparison,
    };
    this.lastReward = result.reward + result.terminal_reward;
    this.render();
  }

  private async choose(source: string, target: string, relation: Relation): Promise<void> {
    if (!this.state || this.busy) return;
    this.busy = true;
    try {
      this.apply(await this.api.step(this.state.episode_id, source, target, relation));
    } finally {
      this.busy = false;
    }
  }

  render(): void {
    clear(this.root);
    if (!this.state) return;
    const state = this.state;
    const header = el("div", { class: "game-header" },
      el("span", { class: "level" }, `level ${state.level}`),
      el("span", { class: "score" }, `score ${state.score.toFixed(1)}`),
      this.lastReward === null
        ? null
        : el("span", { class: "last-reward" },
            `${this.lastReward >= 0 ? "+" : ""}${this.lastReward.toFixed(1)}`),
    );
    const text = renderTaggedText(state.text, state.entities);
    const board = renderBoard(state.board, {
      canClick: (cell) => !state.done && cell.playable,
      onCellClick: (cell, anchor) => {
        openPicker(anchor, (relation) => {
          void this.choose(cell.source, cell.target, relation);
        });
      },
    });
    this.root.append(header, text, board);
    if (state.done && state.comparison) {
      this.root.append(this.renderEndgame(state.comparison));
    }
  }

  private renderEndgame(comparison: ComparisonCell[]): HTMLElement {
    const state = this.state!;
    const map = new Map(comparison.map((c) => [comparisonKey(c.source, c.target), c]));
    const overlay = el("div", { class: "endgame-overlay" },
      el("h2", {}, state.status === "won_coherent" ? "Coherent timeline!" : "Incoherent timeline"),
      el("p", { class: "final-score" }, `final score ${state.score.toFixed(1)}`),
      el("p", { class: "hint" }, "each cell: your relation (center), gold annotation (corner)"),
      renderBoard(state.board, { comparison: map, canClick: () => false }),
      el("button", {
        class: "new-game",
        onclick: () => this.onNewGame?.(state.level),
      }, "new game"),
    );
    return overlay;
  }
}
