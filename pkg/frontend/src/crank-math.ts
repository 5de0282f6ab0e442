/**
 * Pointer-driven crank tracking, kept free of DOM so it can be tested.
 *
 * The tracker turns a stream of pointer angles into crank events:
 * clockwise motion accumulates positive degrees, counter-clockwise motion
 * is clamped away (no reverse milling), and emissions are rate-limited to
 * one event per 100 ms. Whole degrees are emitted and the fractional
 * remainder carried, so one full on-screen revolution sums to 360 within
 * a degree.
 */

export const MIN_EMIT_INTERVAL_MS = 100;

/** Shortest signed arc from one angle to another, in (-180, 180]. */
export function wrapDelta(fromDeg: number, toDeg: number): number {
  let delta = (toDeg - fromDeg) % 360;
  if (delta > 180) delta -= 360;
  if (delta <= -180) delta += 360;
  return delta;
}

/** Screen-space pointer angle about a center, degrees; clockwise increases. */
export function pointerAngle(cx: number, cy: number, x: number, y: number): number {
  return (Math.atan2(y - cy, x - cx) * 180) / Math.PI;
}

export class CrankTracker {
  private lastAngle: number | null = null;
  private pending = 0;
  private lastEmitAt: number | null = null;

  /** Begin a drag at the given pointer angle. */
  start(angleDeg: number): void {
    this.lastAngle = angleDeg;
    this.pending = 0;
    this.lastEmitAt = null;
  }

  /**
   * Fold in a pointer sample. Returns whole degrees to send as a crank
   * event, or null when rate-limited (or nothing positive accumulated).
   */
  move(angleDeg: number, nowMs: number): number | null {
    if (this.lastAngle === null) return null;
    const delta = wrapDelta(this.lastAngle, angleDeg);
    this.lastAngle = angleDeg;
    if (delta > 0) this.pending += delta;
    if (this.lastEmitAt !== null && nowMs - this.lastEmitAt < MIN_EMIT_INTERVAL_MS) {
      return null;
    }
    return this.flushAt(nowMs);
  }

  /** End the drag, emitting whatever whole degrees remain. */
  end(nowMs: number): number | null {
    const emitted = this.flushAt(nowMs);
    this.lastAngle = null;
    return emitted;
  }

  private flushAt(nowMs: number): number | null {
    const whole = Math.floor(this.pending);
    if (whole < 1) return null;
    this.pending -= whole;
    this.lastEmitAt = nowMs;
    return whole;
  }
}
