import { describe, expect, it } from "vitest";

import { canonicalJson, normalizedTranscript } from "../src/transcript.js";
import { validateNumeralEntry } from "../src/protocol.js";
import type { MoveRecordView } from "../src/protocol.js";

describe("canonical json", () => {
  it("sorts keys and uses compact separators", () => {
    expect(canonicalJson({ b: 1, a: "x" })).toBe('{"a":"x","b":1}');
    expect(canonicalJson([1, { z: 0, y: null }])).toBe('[1,{"y":null,"z":0}]');
  });
});

describe("transcript normalization", () => {
  const records: MoveRecordView[] = [
    { index: 0, player: "abelard", kind: "move", position: "(atom p)",
      knowledge: "{}", backtrackTo: null },
    { index: 1, player: "eloise", kind: "backtrack", position: "(atom p)",
      knowledge: "{(P 2 3)}", backtrackTo: 2 },
  ];

  it("drops null backtrack markers and keeps real ones", () => {
    const text = normalizedTranscript(records, "eloise");
    const lines = text.split("\n");
    expect(lines[0]).not.toContain("backtrackTo");
    expect(lines[1]).toContain('"backtrackTo":2');
  });

  it("summarizes winner, final knowledge and backtrack count", () => {
    const text = normalizedTranscript(records, "eloise");
    const summary = JSON.parse(text.split("\n").at(-1)!);
    expect(summary).toEqual({
      winner: "eloise", finalKnowledge: "{(P 2 3)}", backtracks: 1,
    });
  });

  it("uses the empty state for empty sessions", () => {
    const summary = JSON.parse(normalizedTranscript([], "abelard").split("\n")[0]);
    expect(summary.finalKnowledge).toBe("{}");
  });
});

describe("numeral entry validation", () => {
  it("accepts decimal naturals", () => {
    expect(validateNumeralEntry("42")).toBe(42);
    expect(validateNumeralEntry("  7 ")).toBe(7);
  });
  it("rejects anything else without a request", () => {
    for (const bad of ["", "-1", "2.5", "left", "0x3", "ten"]) {
      expect(validateNumeralEntry(bad)).toBeNull();
    }
  });
});
