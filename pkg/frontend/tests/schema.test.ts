import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { describe, expect, it } from "vitest";

import {
  SchemaError,
  parseAssignment,
  parseCampaign,
  parseErrorEnvelope,
  parseProgress,
  parseScoreTable,
  parseSubmitResult,
} from "../src/schema.js";

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "fixtures");

function fixture(name: string): unknown {
  return JSON.parse(readFileSync(join(FIXTURES, `${name}.json`), "utf-8"));
}

describe("frozen contract fixtures parse cleanly", () => {
  it("campaign", () => {
    expect(parseCampaign(fixture("campaign"))).toEqual({
      tuples: 2,
      items_per_tuple: 4,
      quota: 2,
      terms: 8,
    });
  });

  it("open assignment", () => {
    const a = parseAssignment(fixture("next_open"));
    expect(a.done).toBe(false);
    if (!a.done) {
      expect(a.tuple_id).toBe("t0000");
      expect(a.items).toHaveLength(4);
    }
  });

  it("terminal assignment", () => {
    expect(parseAssignment(fixture("next_done"))).toEqual({ done: true });
  });

  it("submit results", () => {
    expect(parseSubmitResult(fixture("submit_ok")).status).toBe("ok");
    expect(parseSubmitResult(fixture("submit_duplicate")).status).toBe("duplicate");
  });

  it("progress, partial and complete", () => {
    const partial = parseProgress(fixture("progress_partial"));
    expect(partial.complete).toBe(false);
    expect(partial.annotators["alice"]).toBe(1);
    const done = parseProgress(fixture("progress_complete"));
    expect(done.complete).toBe(true);
    expect(done.responses).toBe(done.needed);
  });

  it("score table", () => {
    const table = parseScoreTable(fixture("scores"));
    expect(table.responses).toBe(4);
    expect(table.terms.length).toBeGreaterThan(0);
    for (const row of table.terms) {
      expect(row.score).toBeGreaterThanOrEqual(-1);
      expect(row.score).toBeLessThanOrEqual(1);
    }
    // The service sends rows ranked by score, best first.
    const scores = table.terms.map((r) => r.score);
    expect(scores).toEqual([...scores].sort((a, b) => b - a));
  });

  it("error envelope", () => {
    expect(parseErrorEnvelope(fixture("error_conflict"))).toMatch(/differently/);
  });

  it("submit request fixture matches the payload type", () => {
    const req = fixture("submit_request") as Record<string, unknown>;
    for (const field of ["tuple_id", "annotator", "best", "worst"]) {
      expect(typeof req[field]).toBe("string");
    }
  });
});

describe("malformed payloads are refused by name", () => {
  it("rejects non-objects", () => {
    for (const bad of [null, 7, "x", [1]]) {
      expect(() => parseCampaign(bad)).toThrow(SchemaError);
    }
  });

  it("rejects a campaign with a missing count", () => {
    expect(() => parseCampaign({ tuples: 2, quota: 2, terms: 8 })).toThrow(
      /items_per_tuple/,
    );
  });

  it("rejects an assignment with too few items", () => {
    expect(() =>
      parseAssignment({ done: false, tuple_id: "t0000", items: ["a", "b", "c"] }),
    ).toThrow(/expected 4 items/);
  });

  it("rejects an assignment with duplicate items", () => {
    expect(() =>
      parseAssignment({
        done: false,
        tuple_id: "t0000",
        items: ["a", "b", "b", "c"],
      }),
    ).toThrow(/distinct/);
  });

  it("rejects an assignment with empty item strings", () => {
    expect(() =>
      parseAssignment({ done: false, tuple_id: "t0000", items: ["a", "", "c", "d"] }),
    ).toThrow(/items/);
  });

  it("rejects unknown submit statuses", () => {
    expect(() =>
      parseSubmitResult({ status: "retry", responses_for_tuple: 1 }),
    ).toThrow(/unexpected status/);
  });

  it("rejects progress with a non-numeric annotator count", () => {
    expect(() =>
      parseProgress({
        responses: 1,
        needed: 4,
        tuples_done: 0,
        tuples: 2,
        annotators: { alice: "one" },
        complete: false,
      }),
    ).toThrow(/alice/);
  });

  it("rejects score rows without a term", () => {
    expect(() =>
      parseScoreTable({ responses: 1, terms: [{ best: 1, worst: 0 }] }),
    ).toThrow(/score row 0/);
  });
});
