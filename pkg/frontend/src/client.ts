import { CreateRequest, Snapshot } from "./protocol.js";

export class ServiceError extends Error {
  constructor(
    readonly status: number,
    detail: string,
  ) {
    super(detail);
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export interface StreamEvent {
  run: string;
  status: Snapshot["status"];
  hints: string[];
  last_machine_moves: string[];
}

async function decodeError(response: Response): Promise<ServiceError> {
  let detail = `${response.status} ${response.statusText}`;
  try {
    const doc = await response.json();
    if (doc && typeof doc.detail === "string") detail = doc.detail;
  } catch {
    // non-JSON error body, keep the status line
  }
  return new ServiceError(response.status, detail);
}

/**
 * Thin client for the play service.  The state stream is read off a
 * plain fetch response body (the service sends server-sent events), so
 * the same code runs in the browser and under the test runner.
 */
export class ServiceClient {
  private fetchFn: FetchLike;

  constructor(
    readonly baseUrl: string,
    fetchFn?: FetchLike,
  ) {
    this.fetchFn = fetchFn ?? ((input, init) => fetch(input, init));
  }

  private async json<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path, init);
    if (!response.ok) throw await decodeError(response);
    return (await response.json()) as T;
  }

  createSession(body: CreateRequest): Promise<Snapshot> {
    return this.json<Snapshot>("/sessions", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  getSession(id: string): Promise<Snapshot> {
    return this.json<Snapshot>(`/sessions/${id}`);
  }

  submitMoves(id: string, moves: string[]): Promise<Snapshot> {
    return this.json<Snapshot>(`/sessions/${id}/moves`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ moves }),
    });
  }

  async deleteSession(id: string): Promise<void> {
    const response = await this.fetchFn(`${this.baseUrl}/sessions/${id}`, {
      method: "DELETE",
    });
    if (!response.ok && response.status !== 404) throw await decodeError(response);
  }

  /**
   * Subscribe to the session's state stream.  Events are delivered in
   * arrival order; the returned function closes the stream.  The server
   * ends the stream itself once the session is finished.
   */
  streamSession(
    id: string,
    onEvent: (event: StreamEvent) => void,
    onError?: (error: Error) => void,
  ): () => void {
    const controller = new AbortController();
    const run = async () => {
      const response = await this.fetchFn(`${this.baseUrl}/sessions/${id}/stream`, {
        signal: controller.signal,
      });
      if (!response.ok) throw await decodeError(response);
      if (!response.body) throw new Error("stream response has no body");
      const reader = response.body.getReader();
      const decoder = new TextDecoder();
      let buffer = "";
      for (;;) {
        const { done, value } = await reader.read();
        if (done) return;
        buffer += decoder.decode(value, { stream: true });
        // SSE frames are blank-line separated; data lines carry JSON
        let cut;
        while ((cut = buffer.indexOf("\n\n")) >= 0) {
          const frame = buffer.slice(0, cut);
          buffer = buffer.slice(cut + 2);
          for (const line of frame.split("\n")) {
            if (line.startsWith("data:")) {
              onEvent(JSON.parse(line.slice(5)) as StreamEvent);
            }
          }
        }
      }
    };
    run().catch((error) => {
      if (controller.signal.aborted) return;
      if (onError) onError(error instanceof Error ? error : new Error(String(error)));
    });
    return () => controller.abort();
  }
}
