// Thin client for the elicitation session protocol.

export interface Cells {
  tp: number;
  fp: number;
  fn: number;
  tn: number;
}

export interface ConfusionPayload {
  tp: number;
  tn: number;
  fp: number;
  fn: number;
  zeta: number;
  out_of: number;
  cells: Cells;
}

export interface QueryPayload {
  answer_index: number;
  a: ConfusionPayload;
  b: ConfusionPayload;
}

export interface FamiliarizationCard {
  title: string;
  body: string;
}

export interface SessionCreated {
  session_id: string;
  phase: string;
  epsilon: number;
  familiarization: FamiliarizationCard[];
  query: QueryPayload;
}

export interface ResultPayload {
  theta: number;
  m: [number, number];
  weights_l1: { tp: number; tn: number };
  agreement: number | null;
  n_eval: number;
  transcript: unknown[];
}

export type AnswerResponse =
  | { status: "elicit" | "evaluate"; query: QueryPayload }
  | { status: "done"; result: ResultPayload };

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

async function request<T>(base: string, path: string, init?: RequestInit): Promise<T> {
  const resp = await fetch(base + path, {
    headers: { "Content-Type": "application/json" },
    ...init,
  });
  if (!resp.ok) {
    throw new ApiError(resp.status, await resp.text());
  }
  return (await resp.json()) as T;
}

export async function createSession(
  base: string,
  config: Record<string, unknown> = {},
): Promise<SessionCreated> {
  return request<SessionCreated>(base, "/sessions", {
    method: "POST",
    body: JSON.stringify(config),
  });
}

export async function submitAnswer(
  base: string,
  sessionId: string,
  choice: "A" | "B",
  answerIndex: number,
): Promise<AnswerResponse> {
  return request<AnswerResponse>(base, `/sessions/${sessionId}/answer`, {
    method: "POST",
    body: JSON.stringify({ choice, answer_index: answerIndex }),
  });
}

export async function getSession(base: string, sessionId: string): Promise<Record<string, unknown>> {
  return request(base, `/sessions/${sessionId}`);
}

export async function getResult(base: string, sessionId: string): Promise<ResultPayload> {
  return request<ResultPayload>(base, `/sessions/${sessionId}/result`);
}
