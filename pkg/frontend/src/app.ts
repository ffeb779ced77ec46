/** Session controller: one annotator, one screen, one request at a time.
 *
 * Every async transition (boot, submit, retry) goes through a single
 * promise chain, so UI events fired while a request is pending line up
 * behind it instead of racing it. Tests drive the app through real DOM
 * clicks and key events, then await settled() to synchronize.
 */

import { ApiClient, ApiError } from "./api.js";
import { OpenAssignment, Progress, SchemaError } from "./schema.js";
import {
  Selection,
  canSubmit,
  emptySelection,
  pickBest,
  pickWorst,
  toResponse,
} from "./state.js";
import {
  clearBanner,
  renderBanner,
  renderCompletion,
  renderProgress,
  renderTuple,
} from "./view.js";

export class App {
  private readonly progressRegion: HTMLElement;
  private readonly mainRegion: HTMLElement;
  private readonly bannerRegion: HTMLElement;

  private assignment: OpenAssignment | null = null;
  private selection: Selection = emptySelection();
  private refusal: string | null = null;
  private progressData: Progress | null = null;
  private progressStale = false;
  private finished = false;

  private chain: Promise<void> = Promise.resolve();
  private readonly keyListener: (event: KeyboardEvent) => void;

  constructor(
    private readonly root: HTMLElement,
    private readonly annotator: string,
    private readonly client: ApiClient,
  ) {
    const doc = root.ownerDocument;
    root.textContent = "";
    this.bannerRegion = doc.createElement("div");
    this.bannerRegion.className = "region-banner";
    this.progressRegion = doc.createElement("div");
    this.progressRegion.className = "region-progress";
    this.mainRegion = doc.createElement("div");
    this.mainRegion.className = "region-main";
    root.appendChild(this.bannerRegion);
    root.appendChild(this.progressRegion);
    root.appendChild(this.mainRegion);

    this.keyListener = (event) => this.handleKey(event);
    doc.addEventListener("keydown", this.keyListener as EventListener);
  }

  /** Boot: fetch the next assignment and first progress snapshot. */
  start(): Promise<void> {
    return this.enqueue(() => this.advance());
  }

  /** Resolves once every queued transition has finished. */
  settled(): Promise<void> {
    return this.chain;
  }

  dispose(): void {
    this.root.ownerDocument.removeEventListener(
      "keydown",
      this.keyListener as EventListener,
    );
  }

  private enqueue(step: () => Promise<void>): Promise<void> {
    this.chain = this.chain.then(step, step).catch((error) => {
      this.showFailure(error);
    });
    return this.chain;
  }

  private async advance(): Promise<void> {
    clearBanner(this.bannerRegion);
    const assignment = await this.client.next(this.annotator);
    await this.refreshProgress();
    if (assignment.done) {
      this.assignment = null;
      this.finished = true;
      renderCompletion(this.mainRegion, this.progressData);
      return;
    }
    this.assignment = assignment;
    this.selection = emptySelection();
    this.refusal = null;
    this.renderMain();
  }

  private async refreshProgress(): Promise<void> {
    try {
      this.progressData = await this.client.progress();
      this.progressStale = false;
    } catch {
      this.progressStale = true;
    }
    if (this.progressData !== null) {
      renderProgress(
        this.progressRegion,
        this.progressData,
        this.annotator,
        this.progressStale,
      );
    }
  }

  private renderMain(): void {
    if (this.assignment === null) {
      return;
    }
    renderTuple(this.mainRegion, this.assignment, this.selection, this.refusal, {
      onBest: (index) => this.applyPick(pickBest(this.selection, index)),
      onWorst: (index) => this.applyPick(pickWorst(this.selection, index)),
      onSubmit: () => this.submit(),
    });
  }

  private applyPick(transition: {
    selection: Selection;
    refusal: string | null;
  }): void {
    this.selection = transition.selection;
    this.refusal = transition.refusal;
    this.renderMain();
  }

  private submit(): void {
    if (this.assignment === null || !canSubmit(this.selection)) {
      return;
    }
    const payload = toResponse(this.assignment, this.annotator, this.selection);
    this.enqueue(async () => {
      try {
        await this.client.submitResponse(payload);
      } catch (error) {
        if (error instanceof ApiError && error.status === 409) {
          // Assignment was lost (expired, raced out, or answered before a
          // reload); the protocol answer is to ask /api/next again. The
          // banner goes up after the advance, which clears the region.
          await this.advance();
          renderBanner(
            this.bannerRegion,
            `assignment superseded: ${error.detail}`,
            null,
          );
          return;
        }
        throw error;
      }
      await this.advance();
    });
  }

  private showFailure(error: unknown): void {
    const message =
      error instanceof SchemaError
        ? `the service sent an unexpected payload: ${error.message}`
        : error instanceof ApiError
          ? error.message
          : `unexpected failure: ${String(error)}`;
    renderBanner(this.bannerRegion, message, () => {
      this.enqueue(() => this.advance());
    });
  }

  private handleKey(event: KeyboardEvent): void {
    if (this.finished || this.assignment === null) {
      return;
    }
    const match = /^Digit([1-4])$/.exec(event.code);
    if (match === null) {
      return;
    }
    event.preventDefault();
    const index = Number(match[1]) - 1;
    this.applyPick(
      event.shiftKey
        ? pickWorst(this.selection, index)
        : pickBest(this.selection, index),
    );
  }
}
