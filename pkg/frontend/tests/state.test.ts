import { describe, expect, it } from 'vitest';

import { initialState, reduce } from '../src/state.js';
import type {
  AskedEntry,
  PendingQuestion,
  SessionResult,
  WizardState,
} from '../src/types.js';

const PENDING: PendingQuestion = {
  question_id: 'principal.es_arroz',
  prompt: 'es cultivo de arroz ?',
  ordinal: 1,
};

const NEXT: PendingQuestion = {
  question_id: 'principal.es_tabaco',
  prompt: 'es cultivo de tabaco  ?',
  ordinal: 2,
};

const RESULT: SessionResult = { status: 'no_match', module: 'principal' };

const ENTRY: AskedEntry = {
  question_id: 'principal.es_arroz',
  prompt: 'es cultivo de arroz ?',
  answer: 'no',
};

function asking(): WizardState {
  return reduce(reduce(initialState, { type: 'request_started' }), {
    type: 'session_created',
    sessionId: 'a'.repeat(32),
    step: { session_id: 'a'.repeat(32), pending: PENDING },
  });
}

describe('reduce', () => {
  it('starts idle with nothing in flight', () => {
    expect(initialState.phase).toBe('idle');
    expect(initialState.inFlight).toBe(false);
    expect(initialState.answered).toEqual([]);
  });

  it('request_started marks in flight and clears a stale error', () => {
    const errored = reduce(initialState, { type: 'failed', message: 'x' });
    const state = reduce(errored, { type: 'request_started' });
    expect(state.inFlight).toBe(true);
    expect(state.error).toBeNull();
  });

  it('session_created enters asking with the first prompt', () => {
    const state = asking();
    expect(state.phase).toBe('asking');
    expect(state.sessionId).toBe('a'.repeat(32));
    expect(state.pending).toEqual(PENDING);
    expect(state.answered).toEqual([]);
    expect(state.inFlight).toBe(false);
  });

  it('session_created after a finished run discards the old history', () => {
    let state = asking();
    state = reduce(state, {
      type: 'answer_accepted',
      entry: ENTRY,
      step: { result: RESULT },
    });
    state = reduce(state, { type: 'request_started' });
    state = reduce(state, {
      type: 'session_created',
      sessionId: 'b'.repeat(32),
      step: { session_id: 'b'.repeat(32), pending: PENDING },
    });
    expect(state.answered).toEqual([]);
    expect(state.result).toBeNull();
    expect(state.sessionId).toBe('b'.repeat(32));
  });

  it('answer_accepted with a pending step advances the prompt and history', () => {
    const state = reduce(asking(), {
      type: 'answer_accepted',
      entry: ENTRY,
      step: { pending: NEXT },
    });
    expect(state.phase).toBe('asking');
    expect(state.pending).toEqual(NEXT);
    expect(state.answered).toEqual([ENTRY]);
  });

  it('answer_accepted with a result finishes the flow', () => {
    const state = reduce(asking(), {
      type: 'answer_accepted',
      entry: ENTRY,
      step: { result: RESULT },
    });
    expect(state.phase).toBe('finished');
    expect(state.pending).toBeNull();
    expect(state.result).toEqual(RESULT);
    expect(state.answered).toEqual([ENTRY]);
  });

  it('a step with neither pending nor result is an error', () => {
    const state = reduce(asking(), {
      type: 'answer_accepted',
      entry: ENTRY,
      step: {},
    });
    expect(state.phase).toBe('error');
    expect(state.error).toContain('sin pregunta ni resultado');
  });

  it('snapshot_loaded mirrors an unfinished server session', () => {
    const state = reduce(initialState, {
      type: 'snapshot_loaded',
      snapshot: {
        session_id: 'c'.repeat(32),
        created_at: '2026-01-01T00:00:00+00:00',
        finished: false,
        asked: [ENTRY],
        pending: NEXT,
      },
    });
    expect(state.phase).toBe('asking');
    expect(state.sessionId).toBe('c'.repeat(32));
    expect(state.answered).toEqual([ENTRY]);
    expect(state.pending).toEqual(NEXT);
  });

  it('snapshot_loaded mirrors a finished server session', () => {
    const state = reduce(initialState, {
      type: 'snapshot_loaded',
      snapshot: {
        session_id: 'c'.repeat(32),
        created_at: '2026-01-01T00:00:00+00:00',
        finished: true,
        asked: [ENTRY],
        result: RESULT,
      },
    });
    expect(state.phase).toBe('finished');
    expect(state.result).toEqual(RESULT);
  });

  it('explanation_loaded keeps the finished phase', () => {
    let state = reduce(asking(), {
      type: 'answer_accepted',
      entry: ENTRY,
      step: { result: RESULT },
    });
    state = reduce(state, {
      type: 'explanation_loaded',
      explanation: { outcome: RESULT, fired: null, supporting: [], failed_rules: [] },
    });
    expect(state.phase).toBe('finished');
    expect(state.explanation?.fired).toBeNull();
  });

  it('failed enters the error phase and keeps the session by default', () => {
    const state = reduce(asking(), { type: 'failed', message: 'se cayó' });
    expect(state.phase).toBe('error');
    expect(state.error).toBe('se cayó');
    expect(state.sessionId).toBe('a'.repeat(32));
  });

  it('failed with dropSession forgets the session id', () => {
    const state = reduce(asking(), {
      type: 'failed',
      message: 'ya no existe',
      dropSession: true,
    });
    expect(state.sessionId).toBeNull();
  });

  it('reset returns to the initial state', () => {
    expect(reduce(asking(), { type: 'reset' })).toEqual(initialState);
  });
});
