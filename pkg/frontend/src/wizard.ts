import { imageUrl } from './api.js';
import type {
  AnswerToken,
  AskedEntry,
  DiagnosedResult,
  ExplanationPayload,
  NoMatchResult,
  WizardState,
} from './types.js';

export interface WizardHandlers {
  onStart(): void;
  onAnswer(token: AnswerToken): void;
  onExplain(): void;
  onRestart(): void;
  onRetry(): void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

function renderHistory(answered: AskedEntry[]): HTMLElement {
  const section = el('section', { class: 'history', 'data-testid': 'history' });
  if (answered.length === 0) {
    return section;
  }
  section.appendChild(el('h3', {}, 'Respuestas dadas'));
  const list = el('ol');
  for (const entry of answered) {
    const item = el('li', { 'data-question': entry.question_id });
    item.appendChild(el('span', { class: 'history-prompt' }, entry.prompt));
    item.appendChild(el('span', { class: `history-answer ${entry.answer}` }, entry.answer));
    list.appendChild(item);
  }
  section.appendChild(list);
  return section;
}

function renderIdle(state: WizardState, handlers: WizardHandlers): HTMLElement {
  const card = el('section', { class: 'card', 'data-testid': 'idle-card' });
  card.appendChild(el('h2', {}, 'Diagnóstico de plagas y enfermedades'));
  card.appendChild(
    el(
      'p',
      {},
      'Responda las preguntas con Sí o No y el sistema identificará la plaga o ' +
        'enfermedad más probable para su cultivo.',
    ),
  );
  const start = el('button', { class: 'primary', 'data-testid': 'start' }, 'Comenzar diagnóstico');
  start.disabled = state.inFlight;
  start.addEventListener('click', handlers.onStart);
  card.appendChild(start);
  return card;
}

function renderAsking(state: WizardState, handlers: WizardHandlers): HTMLElement {
  const pending = state.pending;
  if (pending === null) {
    return el('section', { class: 'card', 'data-testid': 'question-card' });
  }
  const card = el('section', {
    class: 'card',
    'data-testid': 'question-card',
    'data-question': pending.question_id,
  });
  card.appendChild(el('p', { class: 'ordinal' }, `Pregunta ${pending.ordinal}`));
  card.appendChild(
    el(
      'p',
      { class: 'prompt', 'data-testid': 'prompt', 'aria-live': 'polite' },
      pending.prompt,
    ),
  );

  const controls = el('div', { class: 'answers', role: 'group', 'aria-label': 'respuesta' });
  const si = el('button', { class: 'primary', 'data-testid': 'answer-si' }, 'Sí');
  const no = el('button', { 'data-testid': 'answer-no' }, 'No');
  si.disabled = state.inFlight;
  no.disabled = state.inFlight;
  si.addEventListener('click', () => handlers.onAnswer('si'));
  no.addEventListener('click', () => handlers.onAnswer('no'));
  controls.appendChild(si);
  controls.appendChild(no);
  card.appendChild(controls);
  card.appendChild(renderHistory(state.answered));
  return card;
}

function renderExplanation(explanation: ExplanationPayload): HTMLElement {
  const section = el('section', { class: 'explanation', 'data-testid': 'explanation' });
  section.appendChild(el('h3', {}, 'Explicación'));
  if (explanation.fired !== null) {
    section.appendChild(
      el(
        'p',
        { 'data-testid': 'explanation-fired' },
        `Regla aplicada: ${explanation.fired.module}.${explanation.fired.rule}`,
      ),
    );
  }
  if (explanation.supporting.length > 0) {
    section.appendChild(el('h4', {}, 'Respuestas que la sustentan'));
    const list = el('ul', { 'data-testid': 'explanation-supporting' });
    for (const pair of explanation.supporting) {
      list.appendChild(el('li', {}, `${pair.prompt} ${pair.answer}`));
    }
    section.appendChild(list);
  }
  if (explanation.failed_rules.length > 0) {
    section.appendChild(el('h4', {}, 'Reglas descartadas'));
    const list = el('ul', { 'data-testid': 'explanation-failed' });
    for (const fr of explanation.failed_rules) {
      list.appendChild(el('li', {}, `${fr.module}.${fr.rule} (en ${fr.failed_at})`));
    }
    section.appendChild(list);
  }
  return section;
}

function renderDiagnosis(
  state: WizardState,
  result: DiagnosedResult,
  handlers: WizardHandlers,
): HTMLElement {
  const card = el('section', { class: 'card result', 'data-testid': 'result-card' });
  const d = result.diagnosis;
  card.appendChild(el('h2', { class: 'diagnosis-name', 'data-testid': 'result-title' }, d.name));
  card.appendChild(el('p', { 'data-testid': 'result-info' }, d.info));
  card.appendChild(el('h3', {}, 'Tratamiento'));
  card.appendChild(el('p', { 'data-testid': 'result-treatment' }, d.treatment));

  if (d.images.length > 0) {
    const gallery = el('div', { class: 'gallery', 'data-testid': 'result-images' });
    for (const name of d.images) {
      gallery.appendChild(el('img', { src: imageUrl(name), alt: `${d.name}: ${name}` }));
    }
    card.appendChild(gallery);
  }

  if (state.explanation === null) {
    const explain = el('button', { 'data-testid': 'explain' }, 'ver explicación');
    explain.disabled = state.inFlight;
    explain.addEventListener('click', handlers.onExplain);
    card.appendChild(explain);
  } else {
    card.appendChild(renderExplanation(state.explanation));
  }
  return card;
}

function renderNoMatch(
  state: WizardState,
  result: NoMatchResult,
  handlers: WizardHandlers,
): HTMLElement {
  const card = el('section', { class: 'card no-match', 'data-testid': 'no-match-card' });
  card.appendChild(el('h2', { 'data-testid': 'result-title' }, 'sin diagnóstico'));
  card.appendChild(
    el(
      'p',
      {},
      `Ninguna regla del módulo ${result.module} coincide con las respuestas dadas.`,
    ),
  );
  card.appendChild(renderHistory(state.answered));
  if (state.explanation !== null) {
    card.appendChild(renderExplanation(state.explanation));
  } else {
    const explain = el('button', { 'data-testid': 'explain' }, 'ver explicación');
    explain.disabled = state.inFlight;
    explain.addEventListener('click', handlers.onExplain);
    card.appendChild(explain);
  }
  return card;
}

function renderFinished(state: WizardState, handlers: WizardHandlers): HTMLElement {
  const wrap = el('div');
  const result = state.result;
  if (result === null) {
    return wrap;
  }
  if (result.status === 'diagnosed') {
    wrap.appendChild(renderDiagnosis(state, result, handlers));
  } else {
    wrap.appendChild(renderNoMatch(state, result, handlers));
  }
  const restart = el('button', { class: 'restart', 'data-testid': 'restart' }, 'nuevo diagnóstico');
  restart.disabled = state.inFlight;
  restart.addEventListener('click', handlers.onRestart);
  wrap.appendChild(restart);
  return wrap;
}

function renderError(state: WizardState, handlers: WizardHandlers): HTMLElement {
  const card = el('section', { class: 'card error', 'data-testid': 'error-card' });
  card.appendChild(el('h2', {}, 'Error'));
  card.appendChild(el('p', { 'data-testid': 'error-message', role: 'alert' }, state.error ?? ''));
  const retry = el('button', { class: 'primary', 'data-testid': 'retry' }, 'reintentar');
  retry.disabled = state.inFlight;
  retry.addEventListener('click', handlers.onRetry);
  card.appendChild(retry);
  return card;
}

export function render(root: HTMLElement, state: WizardState, handlers: WizardHandlers): void {
  root.innerHTML = '';
  switch (state.phase) {
    case 'idle':
      root.appendChild(renderIdle(state, handlers));
      break;
    case 'asking':
      root.appendChild(renderAsking(state, handlers));
      break;
    case 'finished':
      root.appendChild(renderFinished(state, handlers));
      break;
    case 'error':
      root.appendChild(renderError(state, handlers));
      break;
  }
}
