/** Page bootstrap: pick a preset, play the opponent against the realizer. */

import { BoardView } from "./board.js";
import { GameClient } from "./client.js";

const SERVICE = (window as unknown as { SERVICE_URL?: string }).SERVICE_URL
  ?? "http://127.0.0.1:8000";

function main(): void {
  const root = document.getElementById("board");
  const picker = document.getElementById("preset") as HTMLSelectElement | null;
  const start = document.getElementById("start");
  if (!root || !picker || !start) return;
  const board = new BoardView(new GameClient(SERVICE), root);
  start.addEventListener("click", () => void board.load(picker.value));
}

document.addEventListener("DOMContentLoaded", main);
