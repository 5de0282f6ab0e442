import { describe, expect, it } from "vitest";
import {
  GENRE_LABELS,
  knobAngleToValue,
  knobValueToAngle,
  switchDetentAngle,
  toggleIndex,
} from "../src/controls-math";

describe("knob geometry", () => {
  it("sweep endpoints map to pot endpoints", () => {
    expect(knobAngleToValue(135)).toBe(0);
    expect(knobAngleToValue(45)).toBe(1023);
  });

  it("mid-sweep maps near the middle", () => {
    const mid = knobAngleToValue(135 + 135);
    expect(Math.abs(mid - 512)).toBeLessThanOrEqual(1);
  });

  it("value to angle round-trips within a count", () => {
    for (const value of [0, 100, 511, 900, 1023]) {
      expect(Math.abs(knobAngleToValue(knobValueToAngle(value)) - value)).toBeLessThanOrEqual(1);
    }
  });
});

describe("switch dial", () => {
  it("position 1 is at the top and steps are 30 degrees", () => {
    expect(switchDetentAngle(1)).toBe(-90);
    expect(switchDetentAngle(2) - switchDetentAngle(1)).toBe(30);
    expect(switchDetentAngle(12)).toBe(240);
  });

  it("twelve labels, random last", () => {
    expect(GENRE_LABELS).toHaveLength(12);
    expect(GENRE_LABELS[11]).toBe("random");
  });
});

describe("toggle", () => {
  it("wire order is past=0, present=1, future=2", () => {
    expect(toggleIndex("past")).toBe(0);
    expect(toggleIndex("present")).toBe(1);
    expect(toggleIndex("future")).toBe(2);
  });
});
