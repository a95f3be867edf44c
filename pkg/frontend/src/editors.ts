/**
 * Attempt editors. Each editor is a state holder that loads and emits the
 * documented attempt formats; the browser shell binds them to inputs, while
 * tests drive them directly. The client never grades anything itself.
 */

import type { ProblemDoc, ProblemKind } from './types.js';
import { CanvasEditor } from './canvas.js';
import {
  ValidationResult,
  validateCfg,
  validateRegex,
  validateWhile,
} from './validate.js';

export interface AttemptEditor {
  /** The attempt document to POST to /posed/{id}/attempts. */
  emit(): Record<string, unknown>;
  /** Load a previously emitted document (e.g. the student's last attempt). */
  load(doc: Record<string, unknown>): void;
  /** Local validation mirroring the server's syntax errors. */
  validate(): ValidationResult;
}

// ---------------------------------------------------------------------------
// text-based editors

export class RegexEditor implements AttemptEditor {
  text = '';
  constructor(readonly alphabet?: string[]) {}

  emit() {
    return { regex: this.text };
  }

  load(doc: Record<string, unknown>) {
    this.text = String(doc.regex ?? '');
  }

  validate(): ValidationResult {
    return validateRegex(this.text, this.alphabet);
  }
}

export class GrammarEditor implements AttemptEditor {
  text = '';

  emit() {
    return { grammar: this.text };
  }

  load(doc: Record<string, unknown>) {
    this.text = String(doc.grammar ?? '');
  }

  validate(): ValidationResult {
    return validateCfg(this.text);
  }
}

export class WordListEditor implements AttemptEditor {
  inWords: string[] = [];
  outWords: string[] = [];
  constructor(readonly inCount: number, readonly outCount: number) {}

  emit() {
    return { in_words: [...this.inWords], out_words: [...this.outWords] };
  }

  load(doc: Record<string, unknown>) {
    this.inWords = [...((doc.in_words as string[]) ?? [])];
    this.outWords = [...((doc.out_words as string[]) ?? [])];
  }

  validate(): ValidationResult {
    if (this.inWords.length !== this.inCount || this.outWords.length !== this.outCount) {
      return {
        ok: false,
        issue: {
          message: `need ${this.inCount} words in and ${this.outCount} words out`,
          line: 1,
          column: 1,
        },
      };
    }
    return { ok: true };
  }
}

export class EquivalenceJustificationEditor implements AttemptEditor {
  verdict: 'equivalent' | 'different' = 'equivalent';
  justification = '';
  constructor(readonly alphabet?: string[]) {}

  emit() {
    return { verdict: this.verdict, justification: this.justification };
  }

  load(doc: Record<string, unknown>) {
    this.verdict = doc.verdict === 'different' ? 'different' : 'equivalent';
    this.justification = String(doc.justification ?? '');
  }

  validate(): ValidationResult {
    if (this.verdict === 'equivalent') {
      return validateRegex(this.justification, this.alphabet);
    }
    return { ok: true }; // any suffix word is syntactically fine
  }
}

export class WordSetEditor implements AttemptEditor {
  words: string[] = [];
  constructor(readonly count: number) {}

  emit() {
    return { words: [...this.words] };
  }

  load(doc: Record<string, unknown>) {
    this.words = [...((doc.words as string[]) ?? [])];
  }

  validate(): ValidationResult {
    if (this.words.length !== this.count) {
      return {
        ok: false,
        issue: { message: `need exactly ${this.count} words`, line: 1, column: 1 },
      };
    }
    return { ok: true };
  }
}

export class WhileEditor implements AttemptEditor {
  text = '';

  emit() {
    return { program: this.text };
  }

  load(doc: Record<string, unknown>) {
    this.text = String(doc.program ?? '');
  }

  validate(): ValidationResult {
    return validateWhile(this.text);
  }
}

// ---------------------------------------------------------------------------
// derivation steps

export class DerivationEditor implements AttemptEditor {
  steps: string[] = [];
  constructor(readonly start: string) {
    this.steps = [start];
  }

  addStep(form: string) {
    this.steps.push(form);
  }

  removeLast() {
    if (this.steps.length > 1) this.steps.pop();
  }

  emit() {
    return { steps: [...this.steps] };
  }

  load(doc: Record<string, unknown>) {
    this.steps = [...((doc.steps as string[]) ?? [this.start])];
  }

  validate(): ValidationResult {
    if (!this.steps.length) {
      return { ok: false, issue: { message: 'no steps', line: 1, column: 1 } };
    }
    return { ok: true };
  }
}

// ---------------------------------------------------------------------------
// CYK triangle

export class CykTableEditor implements AttemptEditor {
  /** rows[length-1][i] holds the nonterminals for word[i .. i+length). */
  rows: string[][][];

  constructor(readonly word: string, readonly nonterminals: string[]) {
    const n = word.length;
    this.rows = Array.from({ length: n }, (_, r) =>
      Array.from({ length: n - r }, () => []));
  }

  rowCount(): number {
    return this.word.length;
  }

  cellsInRow(length: number): number {
    return this.word.length - length + 1;
  }

  toggle(i: number, length: number, nonterminal: string) {
    const cell = this.rows[length - 1][i];
    const found = cell.indexOf(nonterminal);
    if (found >= 0) cell.splice(found, 1);
    else {
      cell.push(nonterminal);
      cell.sort();
    }
  }

  emit() {
    return { rows: this.rows.map((row) => row.map((cell) => [...cell].sort())) };
  }

  load(doc: Record<string, unknown>) {
    const rows = doc.rows as string[][][];
    this.rows = rows.map((row) => row.map((cell) => [...cell].sort()));
  }

  validate(): ValidationResult {
    const n = this.word.length;
    if (this.rows.length !== n) {
      return { ok: false, issue: { message: `expected ${n} rows`, line: 1, column: 1 } };
    }
    for (let length = 1; length <= n; length += 1) {
      const row = this.rows[length - 1];
      if (row.length !== n - length + 1) {
        return {
          ok: false,
          issue: { message: `row ${length} must have ${n - length + 1} cells`,
                   line: length, column: 1 },
        };
      }
      for (const cell of row) {
        for (const nt of cell) {
          if (!this.nonterminals.includes(nt)) {
            return {
              ok: false,
              issue: { message: `unknown nonterminal '${nt}'`, line: length, column: 1 },
            };
          }
        }
      }
    }
    return { ok: true };
  }
}

// ---------------------------------------------------------------------------
// factory

/** Nonterminals of a grammar in the compact text format: the line heads. */
export function grammarNonterminals(grammarText: string): string[] {
  const out = new Set<string>();
  for (const line of grammarText.split('\n')) {
    const arrow = line.indexOf('->');
    if (arrow < 0) continue;
    const head = line.slice(0, arrow).trim();
    if (head) out.add(head);
    for (const ch of line.slice(arrow + 2)) {
      if (/[A-Z]/.test(ch)) out.add(ch);
    }
  }
  return [...out].sort();
}

export function attemptEditor(problem: ProblemDoc): AttemptEditor {
  const payload = problem.payload as Record<string, any>;
  const kind: ProblemKind = problem.kind;
  switch (kind) {
    case 'ReWords':
    case 'CfgWords':
    case 'PdaWords':
      return new WordListEditor(payload.in_count, payload.out_count);
    case 'ReConstruction':
      return new RegexEditor(payload.alphabet);
    case 'CfgConstruction':
    case 'CnfTransform':
      return new GrammarEditor();
    case 'PdaConstruction':
      return CanvasEditor.forPda(payload.alphabet ?? []);
    case 'ReToNfa':
      return CanvasEditor.forBlockNfa(payload.alphabet ?? []);
    case 'EquivClassesDecide':
      return new EquivalenceJustificationEditor(payload.alphabet);
    case 'EquivClassesFind':
      return new WordSetEditor(payload.count);
    case 'FindDerivation': {
      const head = String(payload.grammar ?? 'S').trimStart();
      return new DerivationEditor(head ? head[0] : 'S');
    }
    case 'Cyk':
      return new CykTableEditor(payload.word, grammarNonterminals(payload.grammar));
    case 'WhileToTm':
      return CanvasEditor.forTm(payload.var_count ?? 1);
    default:
      throw new Error(`no editor for ${kind}`);
  }
}
