/**
 * Local syntax validation for the text editors.
 *
 * These mirror the server's parsers closely enough that reported positions
 * (1-based line and column) match the server's SyntaxError positions, so the
 * editor can underline the same character the service would complain about.
 */

export interface SyntaxIssue {
  message: string;
  line: number;
  column: number;
  expected?: string;
}

export type ValidationResult = { ok: true } | { ok: false; issue: SyntaxIssue };

function bad(message: string, line: number, column: number, expected?: string):
    ValidationResult {
  return { ok: false, issue: { message, line, column, expected } };
}

// ---------------------------------------------------------------------------
// regular expressions: re := alt; alt := cat ("|" cat)*; cat := rep+;
// rep := atom "*"*; atom := symbol | "eps" | "empty" | "(" alt ")"

export function validateRegex(text: string, alphabet?: string[]): ValidationResult {
  if (!text.trim()) {
    return bad('empty regular expression', 1, 1, 'expression');
  }
  let pos = 0;

  const skipWs = () => {
    while (pos < text.length && /\s/.test(text[pos])) pos += 1;
  };
  const peek = (): string | null => {
    skipWs();
    return pos < text.length ? text[pos] : null;
  };

  let failure: SyntaxIssue | null = null;
  const fail = (message: string, expected?: string) => {
    failure = { message, line: 1, column: pos + 1, expected };
    throw failure;
  };

  const atom = () => {
    const c = peek();
    if (c === null) fail('unexpected end of input', "symbol, 'eps', 'empty' or '('");
    if (c === '(') {
      pos += 1;
      alt();
      if (peek() !== ')') fail('unbalanced parenthesis', "')'");
      pos += 1;
      return;
    }
    if (text.startsWith('eps', pos)) {
      pos += 3;
      return;
    }
    if (text.startsWith('empty', pos)) {
      pos += 5;
      return;
    }
    if (c !== null && /[a-z0-9]/.test(c)) {
      if (alphabet && !alphabet.includes(c)) {
        fail(`symbol '${c}' not in alphabet`);
      }
      pos += 1;
      return;
    }
    fail(`unexpected '${c}'`, "symbol, 'eps', 'empty' or '('");
  };

  const rep = () => {
    atom();
    while (peek() === '*') pos += 1;
  };

  const cat = () => {
    rep();
    for (;;) {
      const c = peek();
      if (c === null || c === '|' || c === ')') return;
      rep();
    }
  };

  const alt = () => {
    cat();
    while (peek() === '|') {
      pos += 1;
      cat();
    }
  };

  try {
    alt();
    if (peek() !== null) fail(`unexpected '${text[pos]}'`, 'end of input');
  } catch {
    return { ok: false, issue: failure! };
  }
  return { ok: true };
}

// ---------------------------------------------------------------------------
// grammars: one production group per line, `Head -> body1 | body2`,
// bodies juxtapose single symbols, `eps` for the empty body, `#` comments

export function validateCfg(text: string): ValidationResult {
  const lines = text.split('\n');
  let sawProduction = false;
  for (let li = 0; li < lines.length; li += 1) {
    const line = lines[li];
    const lineno = li + 1;
    if (!line.trim() || line.trimStart().startsWith('#')) continue;
    const arrow = line.indexOf('->');
    if (arrow < 0) {
      return bad("missing '->'", lineno, line.length + 1, "'->'");
    }
    const head = line.slice(0, arrow).trim();
    if (head.length !== 1 || !/[A-Z]/.test(head)) {
      return bad(`bad head '${head}'`, lineno, 1, 'single uppercase nonterminal');
    }
    const bodyPart = line.slice(arrow + 2);
    let bodyCol = arrow + 3;
    for (const alt of bodyPart.split('|')) {
      const stripped = alt.trim();
      if (stripped === 'eps') {
        sawProduction = true;
      } else if (stripped.replace(/\s/g, '').includes('eps')) {
        return bad("'eps' cannot be mixed with other symbols", lineno,
                   bodyCol + alt.indexOf('e'));
      } else {
        let any = false;
        for (let off = 0; off < alt.length; off += 1) {
          const ch = alt[off];
          if (/\s/.test(ch)) continue;
          if (/[A-Za-z0-9]/.test(ch)) {
            any = true;
          } else {
            return bad(`bad symbol '${ch}'`, lineno, bodyCol + off, 'letter or digit');
          }
        }
        if (!any) {
          return bad('empty body', lineno, bodyCol, "symbols or 'eps'");
        }
        sawProduction = true;
      }
      bodyCol += alt.length + 1;
    }
  }
  if (!sawProduction) {
    return bad('no productions', 1, 1, 'at least one production');
  }
  return { ok: true };
}

// ---------------------------------------------------------------------------
// While programs

const WHILE_TOKEN = /\s*(x\d+|:=|!=|[+\-;]|\d+|while|do|end|if|then|else|\w+)/y;

interface Token {
  text: string;
  column: number;
}

export function validateWhile(text: string): ValidationResult {
  if (!text.trim()) return bad('empty program', 1, 1);
  const tokens: Token[] = [];
  let pos = 0;
  while (pos < text.length) {
    WHILE_TOKEN.lastIndex = pos;
    const m = WHILE_TOKEN.exec(text);
    if (!m || !m[1]) {
      if (!text.slice(pos).trim()) break;
      return bad('unreadable token', 1, pos + 1);
    }
    tokens.push({ text: m[1], column: m.index + m[0].indexOf(m[1]) + 1 });
    pos = WHILE_TOKEN.lastIndex;
  }

  let at = 0;
  let failure: SyntaxIssue | null = null;
  const fail = (message: string, column: number, expected?: string) => {
    failure = { message, line: 1, column, expected };
    throw failure;
  };
  const peek = () => (at < tokens.length ? tokens[at].text : null);
  const take = (expect?: string): string => {
    if (at >= tokens.length) fail('unexpected end of program', 0, expect);
    const tok = tokens[at];
    if (expect !== undefined && tok.text !== expect) {
      fail(`unexpected '${tok.text}'`, tok.column, `'${expect}'`);
    }
    at += 1;
    return tok.text;
  };
  const variable = () => {
    const tok = at < tokens.length ? tokens[at] : { text: '', column: 1 };
    if (!/^x\d+$/.test(tok.text)) {
      fail(`expected variable, got '${tok.text}'`, tok.column || 1);
    }
    at += 1;
  };

  const stmt = () => {
    const tok = peek();
    if (tok === 'while') {
      take('while');
      variable();
      take('!=');
      take('0');
      take('do');
      program();
      take('end');
      return;
    }
    if (tok === 'if') {
      take('if');
      variable();
      take('!=');
      take('0');
      take('then');
      program();
      take('else');
      program();
      take('end');
      return;
    }
    variable();
    take(':=');
    variable();
    const op = take();
    if (op !== '+' && op !== '-') {
      fail(`expected '+' or '-', got '${op}'`, 1);
    }
    const amount = at < tokens.length ? tokens[at] : { text: '', column: 0 };
    if (!/^\d+$/.test(amount.text)) {
      fail(`expected a constant, got '${amount.text}'`, amount.column || 1);
    }
    at += 1;
  };

  const program = () => {
    stmt();
    while (peek() === ';') {
      take(';');
      stmt();
    }
  };

  try {
    program();
    if (at < tokens.length) {
      fail(`trailing '${tokens[at].text}'`, tokens[at].column, 'end of program');
    }
  } catch {
    return { ok: false, issue: failure! };
  }
  return { ok: true };
}
