import { describe, expect, it } from "vitest";

import { ApiClient, ApiError, FetchLike } from "../src/api.js";

function jsonResponse(status: number, payload: unknown): Response {
  return new Response(JSON.stringify(payload), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

const CAMPAIGN = { tuples: 2, items_per_tuple: 4, quota: 2, terms: 8 };

function instantSleep(): Promise<void> {
  return Promise.resolve();
}

describe("request sequencing", () => {
  it("never has two requests in flight", async () => {
    let inFlight = 0;
    let peak = 0;
    const fetchImpl: FetchLike = async () => {
      inFlight += 1;
      peak = Math.max(peak, inFlight);
      await new Promise((r) => setTimeout(r, 5));
      inFlight -= 1;
      return jsonResponse(200, CAMPAIGN);
    };
    const client = new ApiClient("", { fetchImpl, sleep: instantSleep });
    await Promise.all([client.campaign(), client.campaign(), client.campaign()]);
    expect(peak).toBe(1);
  });

  it("a failed request does not wedge the queue", async () => {
    let calls = 0;
    const fetchImpl: FetchLike = async () => {
      calls += 1;
      if (calls === 1) {
        return jsonResponse(400, { error: "bad" });
      }
      return jsonResponse(200, CAMPAIGN);
    };
    const client = new ApiClient("", { fetchImpl, sleep: instantSleep });
    await expect(client.campaign()).rejects.toThrow(ApiError);
    await expect(client.campaign()).resolves.toEqual(CAMPAIGN);
  });
});

describe("retry with backoff", () => {
  it("retries network failures against the delay schedule, then succeeds", async () => {
    const waits: number[] = [];
    let calls = 0;
    const fetchImpl: FetchLike = async () => {
      calls += 1;
      if (calls <= 2) {
        throw new TypeError("fetch failed");
      }
      return jsonResponse(200, CAMPAIGN);
    };
    const client = new ApiClient("", {
      fetchImpl,
      retryDelays: [10, 20, 40],
      sleep: async (ms) => {
        waits.push(ms);
      },
    });
    await expect(client.campaign()).resolves.toEqual(CAMPAIGN);
    expect(waits).toEqual([10, 20]);
  });

  it("retries 5xx replies", async () => {
    let calls = 0;
    const fetchImpl: FetchLike = async () => {
      calls += 1;
      return calls === 1
        ? jsonResponse(503, { error: "busy" })
        : jsonResponse(200, CAMPAIGN);
    };
    const client = new ApiClient("", {
      fetchImpl,
      retryDelays: [1],
      sleep: instantSleep,
    });
    await expect(client.campaign()).resolves.toEqual(CAMPAIGN);
    expect(calls).toBe(2);
  });

  it("gives up after the schedule and reports unreachability", async () => {
    const reasons: string[] = [];
    const fetchImpl: FetchLike = async () => {
      throw new TypeError("connection refused");
    };
    const client = new ApiClient("", {
      fetchImpl,
      retryDelays: [1, 1],
      sleep: instantSleep,
      onRetry: (_attempt, reason) => reasons.push(reason),
    });
    const failure = client.campaign();
    await expect(failure).rejects.toThrow(/unreachable/);
    await expect(failure).rejects.toMatchObject({ status: 0 });
    expect(reasons).toHaveLength(2);
  });

  it("does not retry 4xx replies and surfaces the server detail", async () => {
    let calls = 0;
    const fetchImpl: FetchLike = async () => {
      calls += 1;
      return jsonResponse(409, { error: "alice already answered t0000 differently" });
    };
    const client = new ApiClient("", { fetchImpl, sleep: instantSleep });
    const failure = client.submitResponse({
      tuple_id: "t0000",
      annotator: "alice",
      best: "a",
      worst: "b",
    });
    await expect(failure).rejects.toMatchObject({
      status: 409,
      detail: "alice already answered t0000 differently",
    });
    expect(calls).toBe(1);
  });
});

describe("endpoint wiring", () => {
  it("encodes the annotator into the next query", async () => {
    const urls: string[] = [];
    const fetchImpl: FetchLike = async (url) => {
      urls.push(url);
      return jsonResponse(200, { done: true });
    };
    const client = new ApiClient("http://h:1", { fetchImpl, sleep: instantSleep });
    await client.next("a b&c");
    expect(urls).toEqual(["http://h:1/api/next?annotator=a%20b%26c"]);
  });

  it("posts the response body as JSON", async () => {
    let captured: RequestInit | undefined;
    const fetchImpl: FetchLike = async (_url, init) => {
      captured = init;
      return jsonResponse(200, { status: "ok", responses_for_tuple: 1 });
    };
    const client = new ApiClient("", { fetchImpl, sleep: instantSleep });
    const payload = {
      tuple_id: "t0000",
      annotator: "alice",
      best: "glad",
      worst: "cold",
    };
    await client.submitResponse(payload);
    expect(captured?.method).toBe("POST");
    expect(JSON.parse(String(captured?.body))).toEqual(payload);
  });

  it("returns the scores body verbatim", async () => {
    const raw = '{"responses": 4, "terms": []}';
    const fetchImpl: FetchLike = async () => new Response(raw, { status: 200 });
    const client = new ApiClient("", { fetchImpl, sleep: instantSleep });
    await expect(client.scoresRaw()).resolves.toBe(raw);
  });
});
