/** Fetch-based client of the game service.  The client duplicates no game
 * logic: legality lives on the server, only numeral entry is validated
 * locally before a request goes out. */

import type {
  CreateSessionBody, EventsView, Move, SessionView,
} from "./protocol.js";

export class ServiceError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
  }
}

async function expectOk<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let detail = `${response.status}`;
    try {
      const body = await response.json();
      if (body && typeof body.detail === "string") detail = body.detail;
    } catch {
      // keep the status text
    }
    throw new ServiceError(response.status, detail);
  }
  return (await response.json()) as T;
}

export class GameClient {
  constructor(private readonly baseUrl: string) {}

  async createSession(body: CreateSessionBody): Promise<SessionView> {
    const response = await fetch(`${this.baseUrl}/sessions`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    return expectOk<SessionView>(response);
  }

  async getSession(id: string, cursor = 0): Promise<SessionView> {
    const response = await fetch(
      `${this.baseUrl}/sessions/${id}?cursor=${cursor}`);
    return expectOk<SessionView>(response);
  }

  async postMove(id: string, move: Move): Promise<EventsView> {
    const response = await fetch(`${this.baseUrl}/sessions/${id}/moves`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ move }),
    });
    return expectOk<EventsView>(response);
  }

  async resign(id: string): Promise<EventsView> {
    const response = await fetch(`${this.baseUrl}/sessions/${id}/resign`, {
      method: "POST",
    });
    return expectOk<EventsView>(response);
  }

  async eventsSince(id: string, since: number): Promise<EventsView> {
    const response = await fetch(
      `${this.baseUrl}/sessions/${id}/events?since=${since}`);
    return expectOk<EventsView>(response);
  }
}
