import { apiBase } from './config.js';
import type {
  AnswerToken,
  ExplanationPayload,
  SessionSnapshot,
  StepResponse,
} from './types.js';

export class ApiError extends Error {
  readonly status: number;

  constructor(status: number, message: string) {
    super(message);
    this.name = 'ApiError';
    this.status = status;
  }
}

async function errorMessage(response: Response): Promise<string> {
  try {
    const body = await response.json();
    if (body && typeof body.detail === 'string') {
      return body.detail;
    }
    return JSON.stringify(body);
  } catch {
    return response.statusText || `HTTP ${response.status}`;
  }
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  let response: Response;
  try {
    response = await fetch(`${apiBase()}${path}`, init);
  } catch {
    throw new ApiError(0, 'no se pudo contactar el servicio');
  }
  if (!response.ok) {
    throw new ApiError(response.status, await errorMessage(response));
  }
  return (await response.json()) as T;
}

function postJson(body: unknown): RequestInit {
  return {
    method: 'POST',
    headers: { 'Content-Type': 'application/json' },
    body: JSON.stringify(body),
  };
}

export function createSession(clientNote?: string): Promise<StepResponse> {
  const body = clientNote === undefined ? {} : { client_note: clientNote };
  return request<StepResponse>('/v1/sessions', postJson(body));
}

export function postAnswer(
  sessionId: string,
  questionId: string,
  answer: AnswerToken,
): Promise<StepResponse> {
  return request<StepResponse>(
    `/v1/sessions/${encodeURIComponent(sessionId)}/answers`,
    postJson({ question_id: questionId, answer }),
  );
}

export function getSession(sessionId: string): Promise<SessionSnapshot> {
  return request<SessionSnapshot>(`/v1/sessions/${encodeURIComponent(sessionId)}`);
}

export function getExplanation(sessionId: string): Promise<ExplanationPayload> {
  return request<ExplanationPayload>(
    `/v1/sessions/${encodeURIComponent(sessionId)}/explanation`,
  );
}

export function imageUrl(name: string): string {
  return `${apiBase()}/v1/images/${encodeURIComponent(name)}`;
}
