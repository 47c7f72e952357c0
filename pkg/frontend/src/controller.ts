import * as api from './api.js';
import { ApiError } from './api.js';
import { initialState, reduce } from './state.js';
import { render } from './wizard.js';
import type { AnswerToken, WizardAction, WizardState } from './types.js';

export function sessionFromFragment(hash: string): string | null {
  const raw = hash.startsWith('#') ? hash.slice(1) : hash;
  return /^[0-9a-f]{32}$/.test(raw) ? raw : null;
}

/**
 * Drives the wizard: owns the state, talks to the service, re-renders on
 * every transition. The session id lives in the URL fragment so a reload
 * resumes the same session from the server's snapshot.
 */
export class WizardController {
  private state: WizardState = initialState;
  private last: Promise<void> = Promise.resolve();

  constructor(private root: HTMLElement) {}

  /** Resolves once the most recently started request has settled. */
  settled(): Promise<void> {
    return this.last;
  }

  snapshot(): WizardState {
    return this.state;
  }

  boot(): void {
    const fragment = sessionFromFragment(window.location.hash);
    if (fragment !== null) {
      this.run(() => this.resync(fragment));
    } else {
      this.renderNow();
    }
  }

  private dispatch(action: WizardAction): void {
    this.state = reduce(this.state, action);
    this.renderNow();
  }

  private renderNow(): void {
    render(this.root, this.state, {
      onStart: () => this.run(() => this.start()),
      onAnswer: (token) => this.run(() => this.answer(token)),
      onExplain: () => this.run(() => this.explain()),
      onRestart: () => this.run(() => this.start()),
      onRetry: () => this.run(() => this.retry()),
    });
  }

  private run(op: () => Promise<void>): void {
    if (this.state.inFlight) {
      return;
    }
    this.last = op();
  }

  private setFragment(sessionId: string | null): void {
    const base = window.location.pathname + window.location.search;
    window.history.replaceState(null, '', sessionId === null ? base : `${base}#${sessionId}`);
  }

  private async start(): Promise<void> {
    this.dispatch({ type: 'request_started' });
    try {
      const step = await api.createSession();
      const sessionId = step.session_id;
      if (sessionId === undefined) {
        this.dispatch({ type: 'failed', message: 'el servicio no devolvió una sesión' });
        return;
      }
      this.setFragment(sessionId);
      this.dispatch({ type: 'session_created', sessionId, step });
    } catch (err) {
      this.fail(err);
    }
  }

  private async answer(token: AnswerToken): Promise<void> {
    const { sessionId, pending } = this.state;
    if (sessionId === null || pending === null) {
      return;
    }
    this.dispatch({ type: 'request_started' });
    try {
      const step = await api.postAnswer(sessionId, pending.question_id, token);
      this.dispatch({
        type: 'answer_accepted',
        entry: { question_id: pending.question_id, prompt: pending.prompt, answer: token },
        step,
      });
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        await this.resync(sessionId);
        return;
      }
      this.fail(err);
    }
  }

  private async explain(): Promise<void> {
    const { sessionId } = this.state;
    if (sessionId === null) {
      return;
    }
    this.dispatch({ type: 'request_started' });
    try {
      const explanation = await api.getExplanation(sessionId);
      this.dispatch({ type: 'explanation_loaded', explanation });
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        await this.resync(sessionId);
        return;
      }
      this.fail(err);
    }
  }

  private async resync(sessionId: string): Promise<void> {
    if (!this.state.inFlight) {
      this.dispatch({ type: 'request_started' });
    }
    try {
      const snapshot = await api.getSession(sessionId);
      this.setFragment(snapshot.session_id);
      this.dispatch({ type: 'snapshot_loaded', snapshot });
    } catch (err) {
      if (err instanceof ApiError && err.status === 404) {
        this.setFragment(null);
        this.dispatch({
          type: 'failed',
          message: 'la sesión ya no existe; comience un diagnóstico nuevo',
          dropSession: true,
        });
        return;
      }
      this.fail(err);
    }
  }

  private async retry(): Promise<void> {
    if (this.state.sessionId !== null) {
      await this.resync(this.state.sessionId);
    } else {
      await this.start();
    }
  }

  private fail(err: unknown): void {
    const message = err instanceof Error ? err.message : String(err);
    this.dispatch({ type: 'failed', message });
  }
}
