/** Wire types of the game service, mirrored from its published schema. */

export type Move = number | "left" | "right";

export interface AtomView {
  pred: string;
  args: number[];
  witness: number;
}

export interface LegalMovesView {
  kind: "numeral" | "choice" | "none";
  moves: Move[];
  cursor?: number | null;
}

export interface MoveRecordView {
  index: number;
  player: "eloise" | "abelard";
  kind: "move" | "backtrack" | "resign";
  position: string;
  knowledge: string;
  backtrackTo?: number | null;
}

export interface SessionView {
  id: string;
  status: "awaiting-abelard" | "finished";
  winner?: "eloise" | "abelard" | null;
  position: string;
  knowledge: AtomView[];
  legalMoves: LegalMovesView;
  history: MoveRecordView[];
  backtracks: number;
}

export interface EventsView {
  events: MoveRecordView[];
  next: number;
  status: string;
  winner?: string | null;
}

export interface CreateSessionBody {
  preset?: string;
  prelude?: string;
  formula?: string;
  realizer?: string;
}

/** Client-side numeral validation: quantifier moves must be decimal
 * naturals; anything else is refused before a request is made. */
export function validateNumeralEntry(text: string): number | null {
  const trimmed = text.trim();
  if (!/^\d+$/.test(trimmed)) return null;
  return Number.parseInt(trimmed, 10);
}
