/**
 * Typed client for the mill service HTTP API. This module is the only
 * place the UI talks to the network; everything it calls is documented
 * service surface.
 */

export type EventKind = "pot" | "switch" | "toggle" | "crank";

export interface PanelStateDto {
  pot: number;
  switch: number;
  toggle: "past" | "present" | "future";
  crank_deg: number;
  backend: "up" | "down";
  cache_counts: Record<string, number>;
}

export interface TicketDto {
  id: string;
  lines: string[];
  created_at: string;
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(message: string, readonly status?: number) {
    super(message);
  }
}

export class MillApi {
  constructor(
    readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async getJson<T>(path: string): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchFn(this.baseUrl + path);
    } catch (err) {
      throw new ApiError(`network failure: ${err}`);
    }
    if (!response.ok) {
      throw new ApiError(`${path} returned ${response.status}`, response.status);
    }
    return (await response.json()) as T;
  }

  async state(): Promise<PanelStateDto> {
    return this.getJson<PanelStateDto>("/api/state");
  }

  async sendEvent(kind: EventKind, value: number): Promise<void> {
    let response: Response;
    try {
      response = await this.fetchFn(this.baseUrl + "/api/events", {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ kind, value }),
      });
    } catch (err) {
      throw new ApiError(`network failure: ${err}`);
    }
    if (response.status !== 202) {
      throw new ApiError(`event rejected with ${response.status}`, response.status);
    }
  }

  async mill(): Promise<string> {
    let response: Response;
    try {
      response = await this.fetchFn(this.baseUrl + "/api/mill", { method: "POST" });
    } catch (err) {
      throw new ApiError(`network failure: ${err}`);
    }
    if (response.status !== 201) {
      throw new ApiError(`mill rejected with ${response.status}`, response.status);
    }
    const body = (await response.json()) as { ticket_id: string };
    return body.ticket_id;
  }

  /** One long-poll round; the service holds the request until news or timeout. */
  async ticketsSince(sinceId: string | null): Promise<TicketDto[]> {
    const query = sinceId === null ? "" : `?since=${encodeURIComponent(sinceId)}`;
    return this.getJson<TicketDto[]>(`/api/tickets${query}`);
  }

  escposUrl(ticketId: string): string {
    return `${this.baseUrl}/api/tickets/${encodeURIComponent(ticketId)}/escpos`;
  }
}
