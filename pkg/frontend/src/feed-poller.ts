/**
 * Long-poll loop over /api/tickets with a resume cursor.
 *
 * On connectivity loss the loop reports offline (the view shows a banner),
 * waits, and resumes from the same cursor, so no ticket is skipped.
 */

import { MillApi, TicketDto } from "./api.js";

export interface FeedCallbacks {
  onTickets(tickets: TicketDto[]): void;
  onConnectivity(up: boolean): void;
}

export const RETRY_DELAY_MS = 2000;

export class FeedPoller {
  private cursor: string | null = null;
  private running = false;

  constructor(
    private readonly api: MillApi,
    private readonly callbacks: FeedCallbacks,
    private readonly sleep: (ms: number) => Promise<void> = (ms) =>
      new Promise((resolve) => setTimeout(resolve, ms)),
  ) {}

  get cursorId(): string | null {
    return this.cursor;
  }

  /** One poll round; exposed for tests and used by the loop. */
  async pollOnce(): Promise<TicketDto[]> {
    const tickets = await this.api.ticketsSince(this.cursor);
    this.callbacks.onConnectivity(true);
    if (tickets.length > 0) {
      this.cursor = tickets[tickets.length - 1].id;
      this.callbacks.onTickets(tickets);
    }
    return tickets;
  }

  async run(): Promise<void> {
    this.running = true;
    while (this.running) {
      try {
        await this.pollOnce();
      } catch {
        this.callbacks.onConnectivity(false);
        await this.sleep(RETRY_DELAY_MS);
      }
    }
  }

  stop(): void {
    this.running = false;
  }
}
