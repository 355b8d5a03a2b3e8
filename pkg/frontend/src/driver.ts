/** Scripted session driver: plays a fixed opponent script through the
 * client, collecting every pushed event.  This is exactly what the board
 * does for a human, minus the rendering. */

import { GameClient } from "./client.js";
import type { Move, MoveRecordView } from "./protocol.js";
import { normalizedTranscript } from "./transcript.js";

export interface ScriptedOutcome {
  records: MoveRecordView[];
  winner: string;
  transcript: string;
}

export async function runScriptedSession(
  client: GameClient,
  preset: string,
  script: Move[],
): Promise<ScriptedOutcome> {
  const view = await client.createSession({ preset });
  const records: MoveRecordView[] = [...view.history];
  let status: string = view.status;
  let winner: string | null | undefined = view.winner;
  for (const move of script) {
    if (status === "finished") break;
    const events = await client.postMove(view.id, move);
    records.push(...events.events);
    status = events.status;
    winner = events.winner;
  }
  if (status !== "finished") {
    const events = await client.resign(view.id);
    records.push(...events.events);
    winner = events.winner;
  }
  const transcript = normalizedTranscript(records, winner ?? "abelard");
  return { records, winner: winner ?? "abelard", transcript };
}
