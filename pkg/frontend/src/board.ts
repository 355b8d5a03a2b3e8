/** Board rendering: the current position, the opponent's legal moves as
 * served (never fabricated locally), the knowledge-state panel, and the
 * move history with backtrack arcs. */

import { GameClient, ServiceError } from "./client.js";
import type { Move, SessionView } from "./protocol.js";
import { validateNumeralEntry } from "./protocol.js";

export class BoardView {
  private session: SessionView | null = null;
  private cursor = 0;

  constructor(
    private readonly client: GameClient,
    private readonly rootEl: HTMLElement,
  ) {}

  async load(preset: string): Promise<void> {
    try {
      this.session = await this.client.createSession({ preset });
      this.cursor = 0;
      this.render();
    } catch (err) {
      this.banner(`session creation failed: ${(err as Error).message}`);
    }
  }

  async loadCustom(prelude: string, formula: string, realizer: string): Promise<void> {
    try {
      this.session = await this.client.createSession({ prelude, formula, realizer });
      this.cursor = 0;
      this.render();
    } catch (err) {
      this.banner(`session creation failed: ${(err as Error).message}`);
    }
  }

  async playMove(move: Move): Promise<void> {
    if (!this.session) return;
    try {
      await this.client.postMove(this.session.id, move);
      this.session = await this.client.getSession(this.session.id, this.cursor);
      this.render();
    } catch (err) {
      if (err instanceof ServiceError) {
        this.inlineError(err.message);
      } else {
        throw err;
      }
    }
  }

  async morePages(): Promise<void> {
    if (!this.session || this.session.legalMoves.cursor == null) return;
    this.cursor = this.session.legalMoves.cursor;
    this.session = await this.client.getSession(this.session.id, this.cursor);
    this.render();
  }

  submitNumeral(text: string): void {
    const value = validateNumeralEntry(text);
    if (value === null) {
      this.inlineError("enter a natural number");
      return; // no request goes out for invalid entries
    }
    void this.playMove(value);
  }

  private banner(message: string): void {
    this.rootEl.innerHTML = `<div class="banner error">${escapeHtml(message)}</div>`;
  }

  private inlineError(message: string): void {
    const slot = this.rootEl.querySelector(".inline-error");
    if (slot) slot.textContent = message;
  }

  private render(): void {
    const s = this.session;
    if (!s) return;
    const status = s.status === "finished"
      ? `finished: ${s.winner} wins`
      : "your move (you play the opponent)";
    const chips = s.knowledge
      .map((a) => `<span class="chip">(${a.pred} ${a.args.join(" ")} ${a.witness})</span>`)
      .join(" ");
    const history = s.history.map((r) => {
      const arc = r.kind === "backtrack"
        ? ` <span class="arc">&#x21a9; to ${r.backtrackTo}</span>`
        : "";
      return `<li class="${r.player} ${r.kind}">` +
        `<code>${escapeHtml(r.position)}</code>${arc}</li>`;
    }).join("");
    const moves = this.renderMoves(s);
    this.rootEl.innerHTML = `
      <div class="status">${status}</div>
      <div class="position"><code>${escapeHtml(s.position)}</code></div>
      <div class="knowledge">knowledge: ${chips || "(empty)"}</div>
      <div class="moves">${moves}</div>
      <div class="inline-error"></div>
      <ol class="history">${history}</ol>`;
    this.wire();
  }

  private renderMoves(s: SessionView): string {
    if (s.status === "finished" || s.legalMoves.kind === "none") return "";
    if (s.legalMoves.kind === "choice") {
      return s.legalMoves.moves
        .map((m) => `<button data-move="${m}">${m}</button>`)
        .join(" ");
    }
    const buttons = s.legalMoves.moves
      .map((m) => `<button data-move="${m}">${m}</button>`)
      .join(" ");
    return `${buttons} <button data-page="1">more&hellip;</button>
      <input class="numeral" placeholder="any numeral" />
      <button data-submit="1">play</button>`;
  }

  private wire(): void {
    this.rootEl.querySelectorAll<HTMLButtonElement>("button[data-move]")
      .forEach((b) => b.addEventListener("click", () => {
        const raw = b.dataset.move ?? "";
        const move: Move = /^\d+$/.test(raw) ? Number.parseInt(raw, 10)
          : (raw as Move);
        void this.playMove(move);
      }));
    const pager = this.rootEl.querySelector<HTMLButtonElement>("button[data-page]");
    pager?.addEventListener("click", () => void this.morePages());
    const submit = this.rootEl.querySelector<HTMLButtonElement>("button[data-submit]");
    const entry = this.rootEl.querySelector<HTMLInputElement>("input.numeral");
    submit?.addEventListener("click", () => {
      if (entry) this.submitNumeral(entry.value);
    });
  }
}

function escapeHtml(text: string): string {
  return text.replace(/[&<>"]/g, (c) =>
    ({ "&": "&amp;", "<": "&lt;", ">": "&gt;", '"': "&quot;" }[c] as string));
}
