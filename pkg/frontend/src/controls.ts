/**
 * The three panel controls. Every interaction POSTs an input event; the
 * rendered positions come back from the next state poll, so the service
 * stays the single source of truth.
 */

import { MillApi, PanelStateDto } from "./api.js";
import {
  GENRE_LABELS,
  TOGGLE_LABELS,
  knobAngleToValue,
  knobValueToAngle,
  switchDetentAngle,
  toggleIndex,
} from "./controls-math.js";
import { pointerAngle } from "./crank-math.js";

const POT_SEND_INTERVAL_MS = 60;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className: string,
  parent: HTMLElement,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  node.className = className;
  parent.appendChild(node);
  return node;
}

export class KnobControl {
  private indicator: HTMLElement;
  private lastSentAt = 0;

  constructor(private readonly root: HTMLElement, private readonly api: MillApi) {
    const dial = el("div", "knob-dial", root);
    this.indicator = el("div", "knob-indicator", dial);
    el("div", "control-label", root).textContent = "wackiness";
    dial.addEventListener("pointerdown", (event) => {
      dial.setPointerCapture(event.pointerId);
      this.sendFromPointer(event, dial, true);
    });
    dial.addEventListener("pointermove", (event) => {
      if (dial.hasPointerCapture(event.pointerId)) {
        this.sendFromPointer(event, dial, false);
      }
    });
    dial.addEventListener("pointerup", (event) => this.sendFromPointer(event, dial, true));
  }

  private sendFromPointer(event: PointerEvent, dial: HTMLElement, force: boolean): void {
    const now = performance.now();
    if (!force && now - this.lastSentAt < POT_SEND_INTERVAL_MS) return;
    this.lastSentAt = now;
    const rect = dial.getBoundingClientRect();
    const angle = pointerAngle(
      rect.left + rect.width / 2,
      rect.top + rect.height / 2,
      event.clientX,
      event.clientY,
    );
    void this.api.sendEvent("pot", knobAngleToValue(angle)).catch(() => undefined);
  }

  render(state: PanelStateDto): void {
    this.indicator.style.transform = `rotate(${knobValueToAngle(state.pot)}deg)`;
    this.root.title = `pot ${state.pot} / 1023`;
  }
}

export class SwitchControl {
  private indicator: HTMLElement;
  private detents: HTMLButtonElement[] = [];

  constructor(root: HTMLElement, api: MillApi) {
    const dial = el("div", "switch-dial", root);
    this.indicator = el("div", "switch-indicator", dial);
    for (let position = 1; position <= 12; position += 1) {
      const detent = el("button", "switch-detent", dial);
      detent.textContent = GENRE_LABELS[position - 1];
      const angle = (switchDetentAngle(position) * Math.PI) / 180;
      detent.style.left = `${50 + 46 * Math.cos(angle)}%`;
      detent.style.top = `${50 + 46 * Math.sin(angle)}%`;
      detent.addEventListener("click", () => {
        void api.sendEvent("switch", position).catch(() => undefined);
      });
      this.detents.push(detent);
    }
    el("div", "control-label", root).textContent = "genre";
  }

  render(state: PanelStateDto): void {
    this.indicator.style.transform = `rotate(${switchDetentAngle(state.switch)}deg)`;
    this.detents.forEach((detent, i) => {
      detent.classList.toggle("active", i + 1 === state.switch);
    });
  }
}

export class ToggleControl {
  private buttons: HTMLButtonElement[] = [];

  constructor(root: HTMLElement, api: MillApi) {
    const row = el("div", "toggle-row", root);
    for (const label of TOGGLE_LABELS) {
      const button = el("button", "toggle-option", row);
      button.textContent = label;
      button.addEventListener("click", () => {
        void api.sendEvent("toggle", toggleIndex(label)).catch(() => undefined);
      });
      this.buttons.push(button);
    }
    el("div", "control-label", root).textContent = "when";
  }

  render(state: PanelStateDto): void {
    this.buttons.forEach((button) => {
      button.classList.toggle("active", button.textContent === state.toggle);
    });
  }
}
