/** DOM wiring for the crank: circular drags become crank input events. */

import { MillApi } from "./api.js";
import { CrankTracker, pointerAngle } from "./crank-math.js";

export class CrankControl {
  private tracker = new CrankTracker();
  private wheel: HTMLElement;
  private visualAngle = 0;

  constructor(root: HTMLElement, private readonly api: MillApi) {
    this.wheel = document.createElement("div");
    this.wheel.className = "crank-wheel";
    const handle = document.createElement("div");
    handle.className = "crank-handle";
    this.wheel.appendChild(handle);
    root.appendChild(this.wheel);
    const label = document.createElement("div");
    label.className = "control-label";
    label.textContent = "crank to mill";
    root.appendChild(label);

    this.wheel.addEventListener("pointerdown", (event) => {
      this.wheel.setPointerCapture(event.pointerId);
      this.tracker.start(this.angleOf(event));
    });
    this.wheel.addEventListener("pointermove", (event) => {
      if (!this.wheel.hasPointerCapture(event.pointerId)) return;
      const angle = this.angleOf(event);
      this.spinTo(angle);
      this.emit(this.tracker.move(angle, performance.now()));
    });
    const finish = (event: PointerEvent) => {
      if (!this.wheel.hasPointerCapture(event.pointerId)) return;
      this.emit(this.tracker.end(performance.now()));
    };
    this.wheel.addEventListener("pointerup", finish);
    this.wheel.addEventListener("pointercancel", finish);
  }

  private angleOf(event: PointerEvent): number {
    const rect = this.wheel.getBoundingClientRect();
    return pointerAngle(
      rect.left + rect.width / 2,
      rect.top + rect.height / 2,
      event.clientX,
      event.clientY,
    );
  }

  private spinTo(angle: number): void {
    this.visualAngle = angle;
    this.wheel.style.transform = `rotate(${this.visualAngle}deg)`;
  }

  private emit(degrees: number | null): void {
    if (degrees !== null && degrees > 0) {
      void this.api.sendEvent("crank", degrees).catch(() => undefined);
    }
  }
}
