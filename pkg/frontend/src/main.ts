/** Bootstrap: wires the views to the API client and the page root. */

import { AnnotateView } from "./annotate.js";
import { ApiClient } from "./api.js";
import { GameView } from "./game.js";
import { LandingView } from "./landing.js";

declare global {
  interface Window {
    CHRONOBOARD_API?: string;
  }
}

export function boot(root: HTMLElement): void {
  const api = new ApiClient(window.CHRONOBOARD_API ?? "http://127.0.0.1:8000");

  const showLanding = () => {
    const landing = new LandingView(api, root, startGame, startAnnotation);
    void landing.start();
  };

  const startGame = (level: number) => {
    const view = new GameView(api, root, (nextLevel) => startGame(nextLevel));
    void view.start(level);
  };

  const startAnnotation = (payload: { dct?: string; text: string } | string) => {
    const view = new AnnotateView(api, root);
    void view.start(payload);
  };

  showLanding();
}

if (typeof document !== "undefined") {
  const root = document.getElementById("app");
  if (root) {
    boot(root);
  }
}
