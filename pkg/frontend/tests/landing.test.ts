import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { LandingView } from "../src/landing.js";
import { installFakeFetch } from "./fake-fetch.js";

const BASE = "http://127.0.0.1:8000";

describe("landing view", () => {
  let root: HTMLElement;

  beforeEach(() => {
    document.body.innerHTML = '<div id="app"></div>';
    root = document.getElementById("app") as HTMLElement;
  });

  it("renders both mode cards with a populated level selector", async () => {
    installFakeFetch(BASE);
    const picked: number[] = [];
    const view = new LandingView(
      new ApiClient(BASE),
      root,
      (level) => picked.push(level),
      () => {},
    );
    await view.start();

    expect(root.querySelectorAll(".mode-card").length).toBe(2);
    const options = Array.from(
      root.querySelectorAll(".level-select option"),
    ).map((o) => (o as HTMLOptionElement).value);
    expect(options).toEqual(["2", "3", "4", "5"]);

    (root.querySelector("button.start-game") as HTMLButtonElement).click();
    expect(picked).toEqual([2]);
  });

  it("shows a banner when the health check fails", async () => {
    globalThis.fetch = (async () => {
      throw new Error("connection refused");
    }) as typeof fetch;
    const view = new LandingView(new ApiClient(BASE), root, () => {}, () => {});
    await view.start();
    expect(root.querySelector(".banner.api-down")).not.toBeNull();
    expect(root.textContent).toContain("API unavailable");
  });
});
