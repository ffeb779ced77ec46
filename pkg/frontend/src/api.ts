/** HTTP client for the annotation service.
 *
 * Two rules shape it. Requests are strictly sequential: each call queues
 * behind the previous one, so a session never has two requests in flight.
 * Transport failures and 5xx replies retry with exponential backoff, while
 * 4xx replies surface immediately as ApiError (a 409 is a protocol answer,
 * not a fault, and the caller decides how to react).
 */

import {
  Assignment,
  CampaignInfo,
  Progress,
  ResponsePayload,
  SubmitResult,
  parseAssignment,
  parseCampaign,
  parseErrorEnvelope,
  parseProgress,
  parseSubmitResult,
} from "./schema.js";

export class ApiError extends Error {
  override readonly name = "ApiError";
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export interface ApiClientOptions {
  fetchImpl?: FetchLike;
  /** Waits between retries, ms. Length bounds the retry count. */
  retryDelays?: number[];
  sleep?: (ms: number) => Promise<void>;
  /** Observer hook, called before each backoff wait. */
  onRetry?: (attempt: number, reason: string) => void;
}

const DEFAULT_DELAYS = [250, 1000, 4000];

function defaultSleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

export class ApiClient {
  private readonly fetchImpl: FetchLike;
  private readonly retryDelays: number[];
  private readonly sleep: (ms: number) => Promise<void>;
  private readonly onRetry: (attempt: number, reason: string) => void;
  private queue: Promise<unknown> = Promise.resolve();

  constructor(
    private readonly baseUrl: string,
    options: ApiClientOptions = {},
  ) {
    this.fetchImpl = options.fetchImpl ?? ((url, init) => fetch(url, init));
    this.retryDelays = options.retryDelays ?? DEFAULT_DELAYS;
    this.sleep = options.sleep ?? defaultSleep;
    this.onRetry = options.onRetry ?? (() => undefined);
  }

  campaign(): Promise<CampaignInfo> {
    return this.requestJson("/api/campaign", undefined, parseCampaign);
  }

  next(annotator: string): Promise<Assignment> {
    const query = `/api/next?annotator=${encodeURIComponent(annotator)}`;
    return this.requestJson(query, undefined, parseAssignment);
  }

  submitResponse(payload: ResponsePayload): Promise<SubmitResult> {
    const init: RequestInit = {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    };
    return this.requestJson("/api/response", init, parseSubmitResult);
  }

  progress(): Promise<Progress> {
    return this.requestJson("/api/progress", undefined, parseProgress);
  }

  /** Raw body of /api/scores, exactly as the service sent it. */
  scoresRaw(): Promise<string> {
    return this.enqueue(async () => {
      const response = await this.fetchWithRetry("/api/scores", undefined);
      return response.text();
    });
  }

  private requestJson<T>(
    path: string,
    init: RequestInit | undefined,
    parse: (body: unknown) => T,
  ): Promise<T> {
    return this.enqueue(async () => {
      const response = await this.fetchWithRetry(path, init);
      return parse(await response.json());
    });
  }

  /** Serialize every request behind the previous one, failures included. */
  private enqueue<T>(task: () => Promise<T>): Promise<T> {
    const next = this.queue.then(task, task);
    this.queue = next.catch(() => undefined);
    return next;
  }

  private async fetchWithRetry(
    path: string,
    init: RequestInit | undefined,
  ): Promise<Response> {
    const url = this.baseUrl + path;
    let attempt = 0;
    for (;;) {
      let failure: string;
      try {
        const response = await this.fetchImpl(url, init);
        if (response.ok) {
          return response;
        }
        if (response.status < 500) {
          throw new ApiError(response.status, await this.errorDetail(response));
        }
        failure = `HTTP ${response.status}`;
      } catch (error) {
        if (error instanceof ApiError) {
          throw error;
        }
        failure = error instanceof Error ? error.message : String(error);
      }
      const delay = this.retryDelays[attempt];
      if (delay === undefined) {
        throw new ApiError(0, `service unreachable (${failure})`);
      }
      this.onRetry(attempt + 1, failure);
      await this.sleep(delay);
      attempt += 1;
    }
  }

  private async errorDetail(response: Response): Promise<string> {
    try {
      return parseErrorEnvelope(await response.json());
    } catch {
      return response.statusText || "request failed";
    }
  }
}
