import { ArenaDoc, SessionCreate, SessionView } from './types';

export class ApiError extends Error {
  status: number;
  detail: string;

  constructor(status: number, detail: string) {
    super(`HTTP ${status}: ${detail}`);
    this.status = status;
    this.detail = detail;
  }
}

async function fail(res: Response): Promise<never> {
  let detail = res.statusText;
  try {
    const body = await res.json();
    if (body && body.detail) detail = String(body.detail);
  } catch {
    // non-JSON error body, keep the status text
  }
  throw new ApiError(res.status, detail);
}

/** Thin typed wrapper over the play-service HTTP API. No game logic here:
 * legality, phases and outcomes all come from the server documents. */
export class PlayClient {
  constructor(private base: string = '') {}

  private async getJson<T>(path: string): Promise<T> {
    const res = await fetch(this.base + path);
    if (!res.ok) await fail(res);
    return res.json();
  }

  async createSession(body: SessionCreate): Promise<SessionView> {
    const res = await fetch(this.base + '/sessions', {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(body),
    });
    if (!res.ok) await fail(res);
    return res.json();
  }

  getView(id: string): Promise<SessionView> {
    return this.getJson(`/sessions/${id}`);
  }

  async postCops(id: string, positions: number[]): Promise<SessionView> {
    const res = await fetch(this.base + `/sessions/${id}/cops`, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify({ positions }),
    });
    if (!res.ok) await fail(res);
    return res.json();
  }

  async getTrace(id: string): Promise<string> {
    const res = await fetch(this.base + `/sessions/${id}/trace`);
    if (!res.ok) await fail(res);
    return res.text();
  }

  getArena(id: string): Promise<ArenaDoc> {
    return this.getJson(`/arena/${id}`);
  }
}
