/**
 * The printing strip and the bulletin board.
 *
 * New tickets animate in at the top of the strip. Pinning copies a ticket
 * onto the board (ids persisted locally, content always from the service);
 * discarding only removes it from this browser's strip, never from the
 * service spool.
 */

import { TicketDto } from "./api.js";
import { BoardStore } from "./board-store.js";

export class FeedView {
  private known = new Map<string, TicketDto>();

  constructor(
    private readonly stripRoot: HTMLElement,
    private readonly boardRoot: HTMLElement,
    private readonly board: BoardStore,
  ) {}

  addTickets(tickets: TicketDto[]): void {
    for (const ticket of tickets) {
      if (this.known.has(ticket.id)) continue;
      this.known.set(ticket.id, ticket);
      this.stripRoot.prepend(this.renderTicket(ticket, "strip"));
      if (this.board.isPinned(ticket.id)) {
        this.boardRoot.appendChild(this.renderTicket(ticket, "board"));
      }
    }
  }

  private renderTicket(ticket: TicketDto, where: "strip" | "board"): HTMLElement {
    const card = document.createElement("article");
    card.className = `ticket ${where === "strip" ? "ticket-fresh" : "ticket-pinned"}`;
    card.dataset.ticketId = ticket.id;

    const paper = document.createElement("pre");
    paper.className = "ticket-paper";
    paper.textContent = ticket.lines.join("\n");
    card.appendChild(paper);

    const actions = document.createElement("div");
    actions.className = "ticket-actions";
    card.appendChild(actions);

    if (where === "strip") {
      const pin = document.createElement("button");
      pin.textContent = "pin to board";
      pin.addEventListener("click", () => this.pin(ticket));
      actions.appendChild(pin);

      const discard = document.createElement("button");
      discard.textContent = "discard";
      discard.addEventListener("click", () => card.remove());
      actions.appendChild(discard);
    } else {
      const unpin = document.createElement("button");
      unpin.textContent = "take down";
      unpin.addEventListener("click", () => {
        this.board.unpin(ticket.id);
        card.remove();
      });
      actions.appendChild(unpin);
    }
    return card;
  }

  private pin(ticket: TicketDto): void {
    if (this.board.isPinned(ticket.id)) return;
    this.board.pin(ticket.id);
    this.boardRoot.appendChild(this.renderTicket(ticket, "board"));
  }
}
