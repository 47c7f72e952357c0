import type { StepResponse, WizardAction, WizardState } from './types.js';

export const initialState: WizardState = {
  phase: 'idle',
  sessionId: null,
  pending: null,
  answered: [],
  result: null,
  explanation: null,
  inFlight: false,
  error: null,
};

function applyStep(state: WizardState, step: StepResponse): WizardState {
  if (step.result) {
    return { ...state, phase: 'finished', pending: null, result: step.result };
  }
  if (step.pending) {
    return { ...state, phase: 'asking', pending: step.pending, result: null };
  }
  return { ...state, phase: 'error', error: 'respuesta del servidor sin pregunta ni resultado' };
}

export function reduce(state: WizardState, action: WizardAction): WizardState {
  switch (action.type) {
    case 'request_started':
      return { ...state, inFlight: true, error: null };

    case 'session_created':
      return applyStep(
        { ...initialState, sessionId: action.sessionId, inFlight: false },
        action.step,
      );

    case 'answer_accepted': {
      const next = applyStep(
        { ...state, inFlight: false, answered: [...state.answered, action.entry] },
        action.step,
      );
      return next;
    }

    case 'snapshot_loaded': {
      const s = action.snapshot;
      const base: WizardState = {
        ...initialState,
        sessionId: s.session_id,
        answered: s.asked,
        inFlight: false,
      };
      if (s.finished && s.result) {
        return { ...base, phase: 'finished', result: s.result };
      }
      if (s.pending) {
        return { ...base, phase: 'asking', pending: s.pending };
      }
      return { ...base, phase: 'error', error: 'sesión en estado desconocido' };
    }

    case 'explanation_loaded':
      return { ...state, explanation: action.explanation, inFlight: false };

    case 'failed':
      return {
        ...state,
        phase: 'error',
        inFlight: false,
        error: action.message,
        sessionId: action.dropSession ? null : state.sessionId,
      };

    case 'reset':
      return { ...initialState };
  }
}
