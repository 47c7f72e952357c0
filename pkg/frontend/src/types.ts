// Payload shapes of the /v1 session API, mirrored field by field.

export type AnswerToken = 'si' | 'no';

export interface PendingQuestion {
  question_id: string;
  prompt: string;
  ordinal: number;
}

export interface DiagnosisPayload {
  name: string;
  info: string;
  treatment: string;
  images: string[];
}

export interface DiagnosedResult {
  status: 'diagnosed';
  module: string;
  rule: string;
  diagnosis: DiagnosisPayload;
}

export interface NoMatchResult {
  status: 'no_match';
  module: string;
}

export type SessionResult = DiagnosedResult | NoMatchResult;

export interface StepResponse {
  session_id?: string;
  pending?: PendingQuestion;
  result?: SessionResult;
}

export interface AskedEntry {
  question_id: string;
  prompt: string;
  answer: AnswerToken;
}

export interface SessionSnapshot {
  session_id: string;
  created_at: string;
  finished: boolean;
  asked: AskedEntry[];
  client_note?: string;
  pending?: PendingQuestion;
  result?: SessionResult;
}

export interface ExplanationPayload {
  outcome: SessionResult;
  fired: { module: string; rule: string } | null;
  supporting: AskedEntry[];
  failed_rules: { module: string; rule: string; failed_at: string }[];
}

// ---------------------------------------------------------------------------
// Wizard state machine. The server is the source of truth; this mirrors it.

export interface WizardState {
  phase: 'idle' | 'asking' | 'finished' | 'error';
  sessionId: string | null;
  pending: PendingQuestion | null;
  answered: AskedEntry[];
  result: SessionResult | null;
  explanation: ExplanationPayload | null;
  inFlight: boolean;
  error: string | null;
}

export type WizardAction =
  | { type: 'request_started' }
  | { type: 'session_created'; sessionId: string; step: StepResponse }
  | { type: 'answer_accepted'; entry: AskedEntry; step: StepResponse }
  | { type: 'snapshot_loaded'; snapshot: SessionSnapshot }
  | { type: 'explanation_loaded'; explanation: ExplanationPayload }
  | { type: 'failed'; message: string; dropSession?: boolean }
  | { type: 'reset' };
