// Runtime configuration: point the wizard at the diagnosis service.
// Leave empty to use the same origin the page was served from.
window.FITODX_API_BASE = '';
