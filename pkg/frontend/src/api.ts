/**
 * Typed client of the budgetbox HTTP API.
 *
 * Every number the UI shows comes out of these payloads; nothing is
 * recomputed on the client.  The run progress stream is line-delimited JSON;
 * when it drops, consumers fall back to polling the run record.
 */

export interface ScenarioSummary {
  scenario_id: string;
  name: string;
  years: number;
  tax_mode: string;
  created_at: string | null;
}

export interface ScenarioRecord {
  scenario_id: string;
  name: string;
  scenario: ScenarioDocument;
  created_at: string | null;
}

export interface ProjectDocument {
  name: string;
  cost_by_year: number[];
  priority: number;
  always_on?: boolean;
}

export interface ScenarioDocument {
  version: number;
  name?: string;
  years: number;
  tax_mode?: "levels" | "rates";
  base_tax?: number;
  exogenous: {
    state_allocations: number[];
    other_operating_recipes: number[];
    operating_expenditures: number[];
    subventions: number[];
    loan_interest_rate: number;
    loan_maturity_years: number;
  };
  debt: {
    remaining_capital: number;
    annuity_schedule: [number, number, number][];
  };
  projects: ProjectDocument[];
}

export interface YearLine {
  year: number;
  tax: number;
  investment: number;
  operating_recipes: number;
  operating_expenditures: number;
  interest: number;
  gross_sfc: number;
  capital_repayment: number;
  net_sfc: number;
  subventions: number;
  new_loan: number;
  reserve_in: number;
  reserve_out: number;
  debt_start: number;
  debt_end: number;
}

export interface SimulationResult {
  investments: number[];
  taxes: number[];
  capacities: (number | null)[];
  lines: YearLine[];
  prudential_limit_years: number;
}

export interface TraceEntry {
  generation: number;
  best: number;
  mean: number;
  feasible_count: number;
}

export interface RunRecord {
  run_id: string;
  status: "pending" | "running" | "done" | "cancelled" | "failed";
  created_at: string | null;
  started_at: string | null;
  finished_at: string | null;
  trace: TraceEntry[];
  result_count: number;
  error: string | null;
}

export interface ResultEntry {
  rank: number;
  score: number;
  feasible: boolean;
  investments: number[];
  taxes: number[];
  capacities: (number | null)[];
  // standard runs
  coding?: number[];
  breakdown?: {
    tax_score: number;
    investment_score: number;
    capacity_score: number;
    total: number;
    penalty: number;
  };
  // operational runs
  genes?: number[];
  project_flags?: boolean[];
  tax_rates?: number[];
}

export interface SimulateRequest {
  scenario?: ScenarioDocument;
  scenario_id?: string;
  investments?: number[];
  project_flags?: boolean[];
  taxes?: number[];
  tax_rates?: number[];
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
  }
}

async function parseError(response: Response): Promise<ApiError> {
  let code = "error";
  let message = `${response.status} ${response.statusText}`;
  try {
    const body = await response.json();
    if (body && typeof body === "object") {
      code = body.code ?? code;
      message = body.message ?? message;
    }
  } catch {
    // non-JSON error body; keep the status line
  }
  return new ApiError(response.status, code, message);
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private baseUrl: string = "",
    private fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path, init);
    if (!response.ok) {
      throw await parseError(response);
    }
    return (await response.json()) as T;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  listScenarios(): Promise<ScenarioSummary[]> {
    return this.request("/api/scenarios");
  }

  getScenario(id: string): Promise<ScenarioRecord> {
    return this.request(`/api/scenarios/${encodeURIComponent(id)}`);
  }

  createScenario(name: string, scenario: ScenarioDocument): Promise<ScenarioRecord> {
    return this.post("/api/scenarios", { name, scenario });
  }

  simulate(body: SimulateRequest): Promise<SimulationResult> {
    return this.post("/api/simulate", body);
  }

  startRun(config: unknown): Promise<{ run_id: string; status: string }> {
    return this.post("/api/runs", config);
  }

  getRun(runId: string): Promise<RunRecord> {
    return this.request(`/api/runs/${encodeURIComponent(runId)}`);
  }

  getResults(runId: string): Promise<{ run_id: string; status: string; results: ResultEntry[] }> {
    return this.request(`/api/runs/${encodeURIComponent(runId)}/results`);
  }

  cancelRun(runId: string): Promise<{ run_id: string; status: string }> {
    return this.post(`/api/runs/${encodeURIComponent(runId)}/cancel`, {});
  }

  /**
   * Follow a run to completion.  Primary path: the NDJSON event stream.
   * Fallback: poll the run record every `pollMs` and synthesize events from
   * the trace.  Returns the final status.
   */
  async followRun(
    runId: string,
    onEvent: (entry: TraceEntry) => void,
    pollMs = 500,
  ): Promise<string> {
    try {
      return await this.streamEvents(runId, onEvent);
    } catch {
      return await this.pollRun(runId, onEvent, pollMs);
    }
  }

  async streamEvents(runId: string, onEvent: (entry: TraceEntry) => void): Promise<string> {
    const response = await this.fetchFn(
      `${this.baseUrl}/api/runs/${encodeURIComponent(runId)}/events`,
    );
    if (!response.ok || response.body === null) {
      throw await parseError(response);
    }
    const reader = response.body.getReader();
    const decoder = new TextDecoder();
    let buffer = "";
    let finalStatus = "unknown";
    for (;;) {
      const { done, value } = await reader.read();
      if (value !== undefined) {
        buffer += decoder.decode(value, { stream: true });
      }
      let newline = buffer.indexOf("\n");
      while (newline >= 0) {
        const line = buffer.slice(0, newline).trim();
        buffer = buffer.slice(newline + 1);
        if (line.length > 0) {
          const parsed = JSON.parse(line);
          if (parsed.event === "end") {
            finalStatus = parsed.status;
          } else {
            onEvent(parsed as TraceEntry);
          }
        }
        newline = buffer.indexOf("\n");
      }
      if (done) {
        break;
      }
    }
    return finalStatus;
  }

  async pollRun(
    runId: string,
    onEvent: (entry: TraceEntry) => void,
    pollMs = 500,
  ): Promise<string> {
    let seen = 0;
    for (;;) {
      const record = await this.getRun(runId);
      for (const entry of record.trace.slice(seen)) {
        onEvent(entry);
      }
      seen = record.trace.length;
      if (record.status === "done" || record.status === "cancelled" || record.status === "failed") {
        return record.status;
      }
      await new Promise((resolve) => setTimeout(resolve, pollMs));
    }
  }
}
