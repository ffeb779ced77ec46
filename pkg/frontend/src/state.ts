/** Selection state machine for one best-worst tuple.
 *
 * The machine is pure: events map an old selection to a new one plus an
 * optional refusal message. Its single hard invariant is that best and
 * worst never point at the same card, which in turn guarantees the client
 * can only ever construct well-formed response payloads.
 */

import { ResponsePayload, OpenAssignment, TUPLE_SIZE } from "./schema.js";

export interface Selection {
  best: number | null;
  worst: number | null;
}

export interface Transition {
  selection: Selection;
  /** Inline message when the event was refused; null when it applied. */
  refusal: string | null;
}

export function emptySelection(): Selection {
  return { best: null, worst: null };
}

function inRange(index: number): boolean {
  return Number.isInteger(index) && index >= 0 && index < TUPLE_SIZE;
}

/** Mark a card as best. Re-picking the current best clears it. */
export function pickBest(selection: Selection, index: number): Transition {
  if (!inRange(index)) {
    return { selection, refusal: null };
  }
  if (index === selection.worst) {
    return { selection, refusal: "that card is already marked least positive" };
  }
  const best = selection.best === index ? null : index;
  return { selection: { best, worst: selection.worst }, refusal: null };
}

/** Mark a card as worst. Re-picking the current worst clears it. */
export function pickWorst(selection: Selection, index: number): Transition {
  if (!inRange(index)) {
    return { selection, refusal: null };
  }
  if (index === selection.best) {
    return { selection, refusal: "that card is already marked most positive" };
  }
  const worst = selection.worst === index ? null : index;
  return { selection: { best: selection.best, worst }, refusal: null };
}

export function clearSelection(): Transition {
  return { selection: emptySelection(), refusal: null };
}

export function canSubmit(selection: Selection): boolean {
  return (
    selection.best !== null &&
    selection.worst !== null &&
    selection.best !== selection.worst
  );
}

/** Build the POST body for the current selection.
 *
 * Throws rather than returning a payload that would violate the response
 * rules (missing picks, identical picks, index out of range), so a bug in
 * the calling UI cannot reach the network.
 */
export function toResponse(
  assignment: OpenAssignment,
  annotator: string,
  selection: Selection,
): ResponsePayload {
  if (!canSubmit(selection)) {
    throw new Error("selection is not submittable");
  }
  const best = assignment.items[selection.best as number];
  const worst = assignment.items[selection.worst as number];
  if (best === undefined || worst === undefined) {
    throw new Error("selection points outside the tuple");
  }
  if (best === worst) {
    throw new Error("best and worst resolve to the same term");
  }
  return { tuple_id: assignment.tuple_id, annotator, best, worst };
}
