/** Pure geometry for the knob and the genre switch dial. */

export const KNOB_SWEEP_DEG = 270; // from 135° (SW) clockwise to 45° (SE)
export const KNOB_START_DEG = 135;
export const POT_MAX = 1023;

/** Map a pointer angle (atan2 degrees, screen coords) onto 0..1023. */
export function knobAngleToValue(angleDeg: number): number {
  const clockwiseFromStart = (((angleDeg - KNOB_START_DEG) % 360) + 360) % 360;
  const clamped = Math.min(clockwiseFromStart, KNOB_SWEEP_DEG);
  return Math.round((clamped / KNOB_SWEEP_DEG) * POT_MAX);
}

/** Indicator angle for a pot value, degrees in screen coords. */
export function knobValueToAngle(value: number): number {
  const bounded = Math.max(0, Math.min(POT_MAX, value));
  return KNOB_START_DEG + (bounded / POT_MAX) * KNOB_SWEEP_DEG;
}

/** Detent angle for switch position 1..12; position 1 sits at the top. */
export function switchDetentAngle(position: number): number {
  return -90 + (position - 1) * 30;
}

export const GENRE_LABELS: ReadonlyArray<string> = [
  "politics",
  "conspiracy",
  "science",
  "business",
  "entertainment",
  "health",
  "sports",
  "world",
  "gossip",
  "chi",
  "rt",
  "random",
];

export const TOGGLE_LABELS: ReadonlyArray<"past" | "present" | "future"> = [
  "past",
  "present",
  "future",
];

/** Wire index for a toggle label: past=0, present=1, future=2. */
export function toggleIndex(label: "past" | "present" | "future"): number {
  return TOGGLE_LABELS.indexOf(label);
}
