/** Transcript normalization: the batch engine emits one canonical JSON
 * line per move record plus a summary line; a UI session reproduces the
 * same bytes from its event stream. */

import type { MoveRecordView } from "./protocol.js";

/** JSON.stringify with sorted keys and compact separators (the canonical
 * form the batch transcript uses). */
export function canonicalJson(value: unknown): string {
  if (value === null || typeof value !== "object") {
    return JSON.stringify(value);
  }
  if (Array.isArray(value)) {
    return `[${value.map(canonicalJson).join(",")}]`;
  }
  const entries = Object.entries(value as Record<string, unknown>)
    .filter(([, v]) => v !== undefined)
    .sort(([a], [b]) => (a < b ? -1 : a > b ? 1 : 0))
    .map(([k, v]) => `${JSON.stringify(k)}:${canonicalJson(v)}`);
  return `{${entries.join(",")}}`;
}

function recordLine(record: MoveRecordView): string {
  const out: Record<string, unknown> = {
    index: record.index,
    player: record.player,
    kind: record.kind,
    position: record.position,
    knowledge: record.knowledge,
  };
  if (record.backtrackTo !== null && record.backtrackTo !== undefined) {
    out.backtrackTo = record.backtrackTo;
  }
  return canonicalJson(out);
}

export function normalizedTranscript(
  records: MoveRecordView[],
  winner: string,
): string {
  const lines = records.map(recordLine);
  const finalKnowledge = records.length
    ? records[records.length - 1].knowledge
    : "{}";
  const backtracks = records.filter((r) => r.kind === "backtrack").length;
  lines.push(canonicalJson({ winner, finalKnowledge, backtracks }));
  return lines.join("\n");
}
