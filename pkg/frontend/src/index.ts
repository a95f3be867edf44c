export { ApiClient, ApiError } from './client.js';
export { CanvasEditor } from './canvas.js';
export {
  CykTableEditor,
  DerivationEditor,
  EquivalenceJustificationEditor,
  GrammarEditor,
  RegexEditor,
  WhileEditor,
  WordListEditor,
  WordSetEditor,
  attemptEditor,
  grammarNonterminals,
} from './editors.js';
export type { AttemptEditor } from './editors.js';
export { FeedbackPanel } from './feedback.js';
export { GamePanel, SplitSelection } from './game.js';
export { NavigationModel, TOPIC_OF } from './navigation.js';
export { validateCfg, validateRegex, validateWhile } from './validate.js';
export * from './types.js';
