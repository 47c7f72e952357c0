// The API base is runtime configuration: a plain script (public/config.js)
// sets window.FITODX_API_BASE before the app module loads, so one build
// can point at any service. Empty string means same-origin.

declare global {
  interface Window {
    FITODX_API_BASE?: string;
  }
}

export function apiBase(): string {
  const base = typeof window !== 'undefined' ? window.FITODX_API_BASE : undefined;
  return (base ?? '').replace(/\/$/, '');
}
