import { WizardController } from './controller.js';

const root = document.getElementById('app');
if (root === null) {
  throw new Error('falta el elemento #app');
}
new WizardController(root).boot();
