import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../api.js";
import type { TraceEntry } from "../api.js";

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

function ndjsonResponse(chunks: string[]): Response {
  const encoder = new TextEncoder();
  const stream = new ReadableStream<Uint8Array>({
    start(controller) {
      for (const chunk of chunks) {
        controller.enqueue(encoder.encode(chunk));
      }
      controller.close();
    },
  });
  return new Response(stream, { status: 200 });
}

describe("ApiClient requests", () => {
  it("hits the documented paths with JSON bodies", async () => {
    const calls: { url: string; init?: RequestInit }[] = [];
    const client = new ApiClient("http://api", async (url, init) => {
      calls.push({ url, init });
      return jsonResponse({ run_id: "r1", status: "pending" });
    });
    await client.startRun({ version: 1 });
    expect(calls[0].url).toBe("http://api/api/runs");
    expect(calls[0].init?.method).toBe("POST");
    expect(JSON.parse(String(calls[0].init?.body))).toEqual({ version: 1 });
  });

  it("surfaces error payloads verbatim", async () => {
    const client = new ApiClient("", async () =>
      jsonResponse({ code: "invalid_config", message: "anchors missing" }, 422),
    );
    try {
      await client.startRun({});
      expect.unreachable();
    } catch (error) {
      expect(error).toBeInstanceOf(ApiError);
      expect((error as ApiError).status).toBe(422);
      expect((error as ApiError).code).toBe("invalid_config");
      expect((error as ApiError).message).toBe("anchors missing");
    }
  });

  it("encodes ids in paths", async () => {
    let seen = "";
    const client = new ApiClient("", async (url) => {
      seen = url;
      return jsonResponse({});
    });
    await client.getRun("a/b");
    expect(seen).toBe("/api/runs/a%2Fb");
  });
});

describe("event streaming", () => {
  const lines = [
    '{"generation": 0, "best": 0.5, "mean": 0.3, "feasible_count": 10}\n',
    '{"generation": 1, "best": 0.6, "mean": 0.4, "feasible_count": 10}\n',
    '{"event": "end", "status": "done"}\n',
  ];

  it("parses complete lines", async () => {
    const client = new ApiClient("", async () => ndjsonResponse(lines));
    const seen: TraceEntry[] = [];
    const status = await client.streamEvents("r", (entry) => seen.push(entry));
    expect(status).toBe("done");
    expect(seen.map((e) => e.generation)).toEqual([0, 1]);
    expect(seen[1].best).toBe(0.6);
  });

  it("reassembles lines split across chunks", async () => {
    const text = lines.join("");
    const chunks = [text.slice(0, 17), text.slice(17, 61), text.slice(61)];
    const client = new ApiClient("", async () => ndjsonResponse(chunks));
    const seen: TraceEntry[] = [];
    const status = await client.streamEvents("r", (entry) => seen.push(entry));
    expect(status).toBe("done");
    expect(seen.length).toBe(2);
  });

  it("falls back to polling when the stream is unavailable", async () => {
    let polls = 0;
    const client = new ApiClient("", async (url) => {
      if (url.endsWith("/events")) {
        return jsonResponse({ code: "error", message: "no stream" }, 500);
      }
      polls += 1;
      return jsonResponse({
        run_id: "r",
        status: polls < 2 ? "running" : "done",
        trace: [
          { generation: 0, best: 0.5, mean: 0.3, feasible_count: 5 },
          { generation: 1, best: 0.7, mean: 0.4, feasible_count: 5 },
        ].slice(0, polls),
        result_count: 0,
        created_at: null, started_at: null, finished_at: null, error: null,
      });
    });
    const seen: TraceEntry[] = [];
    const status = await client.followRun("r", (entry) => seen.push(entry), 1);
    expect(status).toBe("done");
    expect(seen.map((e) => e.generation)).toEqual([0, 1]);
    expect(polls).toBeGreaterThanOrEqual(2);
  });
});
