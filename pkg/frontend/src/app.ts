// Session driver: a small state machine over the JSON protocol.
//
// The server decides everything (which query comes next, when the session
// ends); the client renders the current query, forwards one answer at a
// time with its idempotency index, and resumes from server state after a
// refresh or a network hiccup.

import {
  ApiError,
  AnswerResponse,
  FamiliarizationCard,
  QueryPayload,
  ResultPayload,
  createSession,
  getResult,
  getSession,
  submitAnswer,
} from "./api.js";
import { defaultOptions, RenderOptions } from "./render.js";

export type DriverState =
  | { kind: "familiarize"; cards: FamiliarizationCard[]; next: QueryPayload }
  | { kind: "query"; query: QueryPayload }
  | { kind: "submitting"; query: QueryPayload; choice: "A" | "B" }
  | { kind: "retry"; query: QueryPayload; choice: "A" | "B"; message: string }
  | { kind: "done"; result: ResultPayload }
  | { kind: "error"; message: string };

export interface DriverEvents {
  onState(state: DriverState): void;
}

export class SessionDriver {
  state: DriverState = { kind: "error", message: "not started" };
  sessionId = "";
  options: RenderOptions = { ...defaultOptions };
  private inflight = false;

  constructor(
    private base: string,
    private events: DriverEvents,
  ) {}

  private setState(state: DriverState) {
    this.state = state;
    this.events.onState(state);
  }

  async start(config: Record<string, unknown> = {}): Promise<void> {
    const created = await createSession(this.base, config);
    this.sessionId = created.session_id;
    this.setState({
      kind: "familiarize",
      cards: created.familiarization,
      next: created.query,
    });
  }

  beginQueries(): void {
    if (this.state.kind === "familiarize") {
      this.setState({ kind: "query", query: this.state.next });
    }
  }

  // Repeated clicks while a submission is in flight are ignored: the answer
  // index is consumed exactly once.
  async choose(choice: "A" | "B"): Promise<void> {
    if (this.state.kind !== "query" || this.inflight) return;
    const query = this.state.query;
    this.inflight = true;
    this.setState({ kind: "submitting", query, choice });
    try {
      const resp: AnswerResponse = await submitAnswer(
        this.base,
        this.sessionId,
        choice,
        query.answer_index,
      );
      this.consume(resp);
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        // the server already has this answer; resync from its state
        await this.resume();
      } else {
        this.setState({
          kind: "retry",
          query,
          choice,
          message: err instanceof Error ? err.message : String(err),
        });
      }
    } finally {
      this.inflight = false;
    }
  }

  async retry(): Promise<void> {
    if (this.state.kind !== "retry") return;
    const { query, choice } = this.state;
    this.setState({ kind: "query", query });
    await this.choose(choice);
  }

  private consume(resp: AnswerResponse): void {
    if (resp.status === "done") {
      this.setState({ kind: "done", result: resp.result });
    } else {
      this.setState({ kind: "query", query: resp.query });
    }
  }

  // Refreshing mid-session loses no progress: the server owns the state.
  async resume(): Promise<void> {
    const session = (await getSession(this.base, this.sessionId)) as {
      phase: string;
      query?: QueryPayload;
    };
    if (session.phase === "done") {
      const result = await getResult(this.base, this.sessionId);
      this.setState({ kind: "done", result });
    } else if (session.query) {
      this.setState({ kind: "query", query: session.query });
    } else {
      this.setState({ kind: "error", message: "session has no pending query" });
    }
  }
}

// Headless end-to-end run: create a session, answer every query with the
// given preference function, and return the final result.
export async function driveSession(
  base: string,
  prefersA: (query: QueryPayload) => boolean,
  config: Record<string, unknown> = {},
): Promise<{ result: ResultPayload; answered: number; sessionId: string }> {
  const created = await createSession(base, config);
  let query = created.query;
  let answered = 0;
  for (;;) {
    const choice = prefersA(query) ? "A" : "B";
    const resp = await submitAnswer(base, created.session_id, choice, query.answer_index);
    answered += 1;
    if (resp.status === "done") {
      return { result: resp.result, answered, sessionId: created.session_id };
    }
    query = resp.query;
  }
}
