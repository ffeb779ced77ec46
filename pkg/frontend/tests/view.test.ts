import { beforeEach, describe, expect, it } from "vitest";

import { OpenAssignment, Progress } from "../src/schema.js";
import { emptySelection, pickBest, pickWorst } from "../src/state.js";
import {
  clearBanner,
  renderBanner,
  renderCompletion,
  renderProgress,
  renderTuple,
} from "../src/view.js";
import { Dom, click, makeDom, texts } from "./dom.js";

const TUPLE: OpenAssignment = {
  done: false,
  tuple_id: "t0000",
  items: ["glad tears", "BiTTer Win", "cold comfort", "sweet sorrow"],
};

const PROGRESS: Progress = {
  responses: 7,
  needed: 20,
  tuples_done: 1,
  tuples: 5,
  annotators: { alice: 3, bob: 4 },
  complete: false,
};

function noopHooks() {
  return { onBest: () => undefined, onWorst: () => undefined, onSubmit: () => undefined };
}

let dom: Dom;

beforeEach(() => {
  dom = makeDom();
});

describe("renderTuple", () => {
  it("shows four cards with verbatim term text and a disabled submit", () => {
    renderTuple(dom.root, TUPLE, emptySelection(), null, noopHooks());
    expect(dom.root.querySelectorAll(".card")).toHaveLength(4);
    // Casing must survive untouched; re-cased terms would bias annotators.
    expect(texts(dom.root, ".term")).toEqual(TUPLE.items);
    expect(texts(dom.root, ".shortcut")).toEqual(["1", "2", "3", "4"]);
    const submit = dom.root.querySelector<HTMLButtonElement>("button.submit");
    expect(submit?.disabled).toBe(true);
    expect(dom.root.querySelector(".refusal.is-visible")).toBeNull();
  });

  it("marks the selected cards and enables submit once both differ", () => {
    let sel = pickBest(emptySelection(), 1).selection;
    sel = pickWorst(sel, 3).selection;
    renderTuple(dom.root, TUPLE, sel, null, noopHooks());
    const cards = dom.root.querySelectorAll(".card");
    expect(cards[1]?.classList.contains("is-best")).toBe(true);
    expect(cards[3]?.classList.contains("is-worst")).toBe(true);
    expect(
      cards[1]?.querySelector(".pick-best")?.getAttribute("aria-pressed"),
    ).toBe("true");
    const submit = dom.root.querySelector<HTMLButtonElement>("button.submit");
    expect(submit?.disabled).toBe(false);
  });

  it("routes selector clicks to the hooks with the card index", () => {
    const seen: string[] = [];
    // A submittable selection keeps the submit button enabled.
    renderTuple(dom.root, TUPLE, { best: 2, worst: 0 }, null, {
      onBest: (i) => seen.push(`best ${i}`),
      onWorst: (i) => seen.push(`worst ${i}`),
      onSubmit: () => seen.push("submit"),
    });
    const cards = dom.root.querySelectorAll(".card");
    click(cards[2]?.querySelector(".pick-best") ?? null);
    click(cards[0]?.querySelector(".pick-worst") ?? null);
    click(dom.root.querySelector("button.submit"));
    expect(seen).toEqual(["best 2", "worst 0", "submit"]);
  });

  it("shows the inline refusal message when one is passed", () => {
    renderTuple(
      dom.root,
      TUPLE,
      pickWorst(emptySelection(), 2).selection,
      "that card is already marked least positive",
      noopHooks(),
    );
    const refusal = dom.root.querySelector(".refusal.is-visible");
    expect(refusal?.textContent).toMatch(/already marked/);
  });
});

describe("renderProgress", () => {
  it("shows the annotator count and campaign fraction", () => {
    renderProgress(dom.root, PROGRESS, "alice", false);
    const line = dom.root.querySelector(".progress-line");
    expect(line?.textContent).toContain("alice: 3 answered");
    expect(line?.textContent).toContain("7 / 20");
    expect(line?.textContent).toContain("35%");
    expect(dom.root.querySelector(".stale")).toBeNull();
    const fill = dom.root.querySelector<HTMLElement>(".bar-fill");
    expect(fill?.style.width).toBe("35%");
  });

  it("treats an unseen annotator as zero answered", () => {
    renderProgress(dom.root, PROGRESS, "carol", false);
    expect(dom.root.textContent).toContain("carol: 0 answered");
  });

  it("shows the stale badge when the snapshot could not refresh", () => {
    renderProgress(dom.root, PROGRESS, "alice", true);
    expect(dom.root.querySelector(".stale")?.textContent).toBe("stale");
  });

  it("renders an empty campaign as zero percent", () => {
    renderProgress(
      dom.root,
      { ...PROGRESS, responses: 0, needed: 0 },
      "alice",
      false,
    );
    expect(dom.root.textContent).toContain("(0%)");
  });
});

describe("renderCompletion", () => {
  it("summarizes the campaign when progress is known", () => {
    renderCompletion(dom.root, { ...PROGRESS, responses: 20, complete: true });
    expect(dom.root.querySelector(".completion h2")?.textContent).toBe("All done");
    expect(dom.root.textContent).toContain("20 of 20");
  });

  it("still renders without a progress snapshot", () => {
    renderCompletion(dom.root, null);
    expect(dom.root.textContent).toContain("No more tuples");
  });
});

describe("banner", () => {
  it("shows the message with a working retry button", () => {
    let retried = 0;
    renderBanner(dom.root, "the service sent an unexpected payload", () => {
      retried += 1;
    });
    expect(dom.root.querySelector(".banner")?.textContent).toContain(
      "unexpected payload",
    );
    click(dom.root.querySelector(".banner .retry"));
    expect(retried).toBe(1);
  });

  it("omits the retry button when no handler is given", () => {
    renderBanner(dom.root, "assignment superseded", null);
    expect(dom.root.querySelector(".banner .retry")).toBeNull();
  });

  it("clearBanner removes everything", () => {
    renderBanner(dom.root, "x", null);
    clearBanner(dom.root);
    expect(dom.root.querySelector(".banner")).toBeNull();
  });
});
