/** Wire types for the annotation service JSON API, with runtime guards.
 *
 * Every payload that crosses the network is funneled through a parse
 * function before the rest of the client touches it, so a malformed or
 * drifted response surfaces as a SchemaError naming the offending field
 * instead of an undefined popping up mid-render.
 */

export const TUPLE_SIZE = 4;

export interface CampaignInfo {
  tuples: number;
  items_per_tuple: number;
  quota: number;
  terms: number;
}

/** Open assignment returned by GET /api/next. */
export interface OpenAssignment {
  done: false;
  tuple_id: string;
  items: string[];
}

/** Terminal payload: nothing left for this annotator. */
export interface DoneAssignment {
  done: true;
}

export type Assignment = OpenAssignment | DoneAssignment;

/** Body the client POSTs to /api/response. */
export interface ResponsePayload {
  tuple_id: string;
  annotator: string;
  best: string;
  worst: string;
}

export interface SubmitResult {
  status: "ok" | "duplicate";
  responses_for_tuple: number;
}

export interface Progress {
  responses: number;
  needed: number;
  tuples_done: number;
  tuples: number;
  annotators: Record<string, number>;
  complete: boolean;
}

export interface ScoreRow {
  term: string;
  best: number;
  worst: number;
  appearances: number;
  score: number;
}

export interface ScoreTable {
  responses: number;
  terms: ScoreRow[];
}

export class SchemaError extends Error {
  override readonly name = "SchemaError";
}

function asRecord(value: unknown, what: string): Record<string, unknown> {
  if (typeof value !== "object" || value === null || Array.isArray(value)) {
    throw new SchemaError(`${what}: expected a JSON object`);
  }
  return value as Record<string, unknown>;
}

function num(obj: Record<string, unknown>, field: string, what: string): number {
  const v = obj[field];
  if (typeof v !== "number" || !Number.isFinite(v)) {
    throw new SchemaError(`${what}: field "${field}" must be a finite number`);
  }
  return v;
}

function str(obj: Record<string, unknown>, field: string, what: string): string {
  const v = obj[field];
  if (typeof v !== "string" || v.length === 0) {
    throw new SchemaError(`${what}: field "${field}" must be a non-empty string`);
  }
  return v;
}

function bool(obj: Record<string, unknown>, field: string, what: string): boolean {
  const v = obj[field];
  if (typeof v !== "boolean") {
    throw new SchemaError(`${what}: field "${field}" must be a boolean`);
  }
  return v;
}

export function parseCampaign(value: unknown): CampaignInfo {
  const obj = asRecord(value, "campaign");
  return {
    tuples: num(obj, "tuples", "campaign"),
    items_per_tuple: num(obj, "items_per_tuple", "campaign"),
    quota: num(obj, "quota", "campaign"),
    terms: num(obj, "terms", "campaign"),
  };
}

export function parseAssignment(value: unknown): Assignment {
  const obj = asRecord(value, "assignment");
  if (bool(obj, "done", "assignment")) {
    return { done: true };
  }
  const items = obj["items"];
  if (!Array.isArray(items) || items.some((t) => typeof t !== "string" || !t)) {
    throw new SchemaError('assignment: field "items" must be a list of non-empty strings');
  }
  if (items.length !== TUPLE_SIZE) {
    throw new SchemaError(`assignment: expected ${TUPLE_SIZE} items, got ${items.length}`);
  }
  if (new Set(items).size !== items.length) {
    throw new SchemaError("assignment: items must be distinct");
  }
  return {
    done: false,
    tuple_id: str(obj, "tuple_id", "assignment"),
    items: items as string[],
  };
}

export function parseSubmitResult(value: unknown): SubmitResult {
  const obj = asRecord(value, "submit result");
  const status = str(obj, "status", "submit result");
  if (status !== "ok" && status !== "duplicate") {
    throw new SchemaError(`submit result: unexpected status "${status}"`);
  }
  return {
    status,
    responses_for_tuple: num(obj, "responses_for_tuple", "submit result"),
  };
}

export function parseProgress(value: unknown): Progress {
  const obj = asRecord(value, "progress");
  const raw = asRecord(obj["annotators"] ?? {}, 'progress field "annotators"');
  const annotators: Record<string, number> = {};
  for (const [name, count] of Object.entries(raw)) {
    if (typeof count !== "number" || !Number.isFinite(count)) {
      throw new SchemaError(`progress: annotator count for "${name}" must be a number`);
    }
    annotators[name] = count;
  }
  return {
    responses: num(obj, "responses", "progress"),
    needed: num(obj, "needed", "progress"),
    tuples_done: num(obj, "tuples_done", "progress"),
    tuples: num(obj, "tuples", "progress"),
    annotators,
    complete: bool(obj, "complete", "progress"),
  };
}

export function parseScoreTable(value: unknown): ScoreTable {
  const obj = asRecord(value, "score table");
  const rows = obj["terms"];
  if (!Array.isArray(rows)) {
    throw new SchemaError('score table: field "terms" must be a list');
  }
  return {
    responses: num(obj, "responses", "score table"),
    terms: rows.map((row, i) => {
      const r = asRecord(row, `score row ${i}`);
      return {
        term: str(r, "term", `score row ${i}`),
        best: num(r, "best", `score row ${i}`),
        worst: num(r, "worst", `score row ${i}`),
        appearances: num(r, "appearances", `score row ${i}`),
        score: num(r, "score", `score row ${i}`),
      };
    }),
  };
}

/** Error envelope the service uses for every non-2xx response. */
export function parseErrorEnvelope(value: unknown): string {
  const obj = asRecord(value, "error envelope");
  return str(obj, "error", "error envelope");
}
