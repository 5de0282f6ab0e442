import { MillApi } from "./api.js";
import { BoardStore } from "./board-store.js";
import { KnobControl, SwitchControl, ToggleControl } from "./controls.js";
import { CrankControl } from "./crank.js";
import { FeedPoller } from "./feed-poller.js";
import { FeedView } from "./feed-view.js";

const STATE_POLL_MS = 400;

function apiBase(): string {
  const fromQuery = new URLSearchParams(window.location.search).get("api");
  return (fromQuery ?? window.location.origin).replace(/\/$/, "");
}

function must(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

function start(): void {
  const api = new MillApi(apiBase());
  const banner = must("banner");
  const backendDot = must("backend-dot");

  const knob = new KnobControl(must("knob"), api);
  const genreSwitch = new SwitchControl(must("genre-switch"), api);
  const toggle = new ToggleControl(must("when-toggle"), api);
  new CrankControl(must("crank"), api);

  const board = new BoardStore(window.localStorage);
  const feedView = new FeedView(must("strip"), must("board"), board);

  const setOnline = (up: boolean) => {
    banner.classList.toggle("hidden", up);
  };

  const poller = new FeedPoller(api, {
    onTickets: (tickets) => feedView.addTickets(tickets),
    onConnectivity: setOnline,
  });
  void poller.run();

  const pollState = async () => {
    try {
      const state = await api.state();
      setOnline(true);
      knob.render(state);
      genreSwitch.render(state);
      toggle.render(state);
      backendDot.classList.toggle("down", state.backend !== "up");
      backendDot.title = `generation backend: ${state.backend}`;
    } catch {
      setOnline(false);
    } finally {
      window.setTimeout(pollState, STATE_POLL_MS);
    }
  };
  void pollState();
}

document.addEventListener("DOMContentLoaded", start);
