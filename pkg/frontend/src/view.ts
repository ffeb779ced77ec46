/** DOM rendering for the annotation screens.
 *
 * Render functions take a container and rebuild its contents; they reach
 * the document through the container, never through globals, so they run
 * unchanged inside any DOM implementation. Term text is always set with
 * textContent and never re-cased, to show annotators exactly what was
 * collected.
 */

import { OpenAssignment, Progress } from "./schema.js";
import { Selection, canSubmit } from "./state.js";

export interface TupleHooks {
  onBest: (index: number) => void;
  onWorst: (index: number) => void;
  onSubmit: () => void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  container: Element,
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = container.ownerDocument.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

function clear(container: Element): void {
  container.textContent = "";
}

export function renderTuple(
  container: Element,
  assignment: OpenAssignment,
  selection: Selection,
  refusal: string | null,
  hooks: TupleHooks,
): void {
  clear(container);
  const heading = el(container, "p", "prompt");
  heading.textContent =
    "Pick the most positive and the least positive term.";
  container.appendChild(heading);

  const grid = el(container, "div", "cards");
  assignment.items.forEach((term, index) => {
    const card = el(container, "div", "card");
    card.dataset.index = String(index);
    if (selection.best === index) {
      card.classList.add("is-best");
    }
    if (selection.worst === index) {
      card.classList.add("is-worst");
    }

    card.appendChild(el(container, "kbd", "shortcut", String(index + 1)));
    card.appendChild(el(container, "div", "term", term));

    const row = el(container, "div", "choices");
    const best = el(container, "button", "pick-best", "most positive");
    best.type = "button";
    best.setAttribute("aria-pressed", String(selection.best === index));
    best.addEventListener("click", () => hooks.onBest(index));
    const worst = el(container, "button", "pick-worst", "least positive");
    worst.type = "button";
    worst.setAttribute("aria-pressed", String(selection.worst === index));
    worst.addEventListener("click", () => hooks.onWorst(index));
    row.appendChild(best);
    row.appendChild(worst);
    card.appendChild(row);
    grid.appendChild(card);
  });
  container.appendChild(grid);

  const message = el(container, "p", "refusal");
  message.setAttribute("role", "status");
  if (refusal) {
    message.textContent = refusal;
    message.classList.add("is-visible");
  }
  container.appendChild(message);

  const submit = el(container, "button", "submit", "Submit answer");
  submit.type = "button";
  submit.disabled = !canSubmit(selection);
  submit.addEventListener("click", () => hooks.onSubmit());
  container.appendChild(submit);

  const hint = el(
    container,
    "p",
    "hint",
    "Keys 1-4 pick the most positive card, shift+1-4 the least positive.",
  );
  container.appendChild(hint);
}

export function renderProgress(
  container: Element,
  progress: Progress,
  annotator: string,
  stale: boolean,
): void {
  clear(container);
  const mine = progress.annotators[annotator] ?? 0;
  const pct =
    progress.needed > 0
      ? Math.floor((100 * progress.responses) / progress.needed)
      : 0;

  const line = el(container, "div", "progress-line");
  line.appendChild(el(container, "span", "who", `${annotator}: ${mine} answered`));
  line.appendChild(
    el(
      container,
      "span",
      "campaign",
      `campaign ${progress.responses} / ${progress.needed} (${pct}%)`,
    ),
  );
  if (stale) {
    const badge = el(container, "span", "stale", "stale");
    badge.title = "could not refresh progress; showing the last known state";
    line.appendChild(badge);
  }
  container.appendChild(line);

  const bar = el(container, "div", "bar");
  const fill = el(container, "div", "bar-fill");
  fill.style.width = `${pct}%`;
  bar.appendChild(fill);
  container.appendChild(bar);
}

export function renderCompletion(container: Element, progress: Progress | null): void {
  clear(container);
  const box = el(container, "div", "completion");
  box.appendChild(el(container, "h2", undefined, "All done"));
  const detail =
    progress === null
      ? "No more tuples for you in this campaign."
      : `Nothing left to annotate: ${progress.responses} of ${progress.needed} responses collected.`;
  box.appendChild(el(container, "p", undefined, detail));
  container.appendChild(box);
}

export function renderBanner(
  container: Element,
  message: string,
  onRetry: (() => void) | null,
): void {
  clear(container);
  const banner = el(container, "div", "banner");
  banner.setAttribute("role", "alert");
  banner.appendChild(el(container, "span", undefined, message));
  if (onRetry) {
    const retry = el(container, "button", "retry", "Retry");
    retry.type = "button";
    retry.addEventListener("click", () => onRetry());
    banner.appendChild(retry);
  }
  container.appendChild(banner);
}

export function clearBanner(container: Element): void {
  clear(container);
}
