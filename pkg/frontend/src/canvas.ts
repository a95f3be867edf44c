/**
 * Node-edge canvas model for PDA, multi-tape TM and block-NFA attempts.
 *
 * Layout is manual: nodes keep x/y set by dragging; nothing is auto-placed.
 * The model is headless so tests and the browser shell share one source of
 * truth; exporters emit exactly the documented JSON formats.
 */

import type { BlockNfaDoc, PdaDoc, TmDoc } from './types.js';

export interface CanvasNode {
  id: string;
  x: number;
  y: number;
  initial: boolean;
  accepting: boolean;
}

export interface CanvasEdge {
  from: string;
  to: string;
  /** Raw label text, machine-specific syntax (see the exporters). */
  label: string;
}

export interface CanvasBlock {
  label: string;
  entry: string;
  exit: string;
  inner: string[];
}

export type CanvasFlavor = 'pda' | 'tm' | 'block-nfa';

export class CanvasEditor {
  nodes = new Map<string, CanvasNode>();
  edges: CanvasEdge[] = [];
  blocks: CanvasBlock[] = [];
  private counter = 0;

  private constructor(
    readonly flavor: CanvasFlavor,
    readonly options: {
      alphabet?: string[];
      tapes?: number;
      acceptance?: 'final' | 'empty';
      initialStack?: string;
      stackAlphabet?: string[];
    },
  ) {}

  static forPda(alphabet: string[]): CanvasEditor {
    return new CanvasEditor('pda', {
      alphabet,
      acceptance: 'final',
      initialStack: 'Z',
      stackAlphabet: ['Z', ...alphabet.map((s) => s.toUpperCase())],
    });
  }

  static forTm(tapes: number): CanvasEditor {
    return new CanvasEditor('tm', { tapes });
  }

  static forBlockNfa(alphabet: string[]): CanvasEditor {
    return new CanvasEditor('block-nfa', { alphabet });
  }

  // -- node and edge editing as the shell's pointer handlers call it --------

  addNode(x: number, y: number, id?: string): CanvasNode {
    let nodeId = id ?? `q${this.counter}`;
    while (this.nodes.has(nodeId)) {
      this.counter += 1;
      nodeId = `q${this.counter}`;
    }
    const node = { id: nodeId, x, y, initial: this.nodes.size === 0, accepting: false };
    this.nodes.set(nodeId, node);
    this.counter += 1;
    return node;
  }

  moveNode(id: string, x: number, y: number) {
    const node = this.nodes.get(id);
    if (!node) throw new Error(`no node ${id}`);
    node.x = x;
    node.y = y;
  }

  removeNode(id: string) {
    this.nodes.delete(id);
    this.edges = this.edges.filter((e) => e.from !== id && e.to !== id);
    this.blocks = this.blocks.filter(
      (b) => b.entry !== id && b.exit !== id && !b.inner.includes(id));
  }

  setInitial(id: string) {
    for (const node of this.nodes.values()) node.initial = node.id === id;
  }

  toggleAccepting(id: string) {
    const node = this.nodes.get(id);
    if (!node) throw new Error(`no node ${id}`);
    node.accepting = !node.accepting;
  }

  addEdge(from: string, to: string, label: string) {
    if (!this.nodes.has(from) || !this.nodes.has(to)) {
      throw new Error('edges need existing endpoints');
    }
    this.edges.push({ from, to, label });
  }

  addBlock(label: string, entry: string, exit: string, inner: string[] = []) {
    if (this.flavor !== 'block-nfa') throw new Error('blocks are for RE-to-NFA only');
    this.blocks.push({ label, entry, exit, inner: [...inner] });
  }

  private initialNode(): string {
    for (const node of this.nodes.values()) {
      if (node.initial) return node.id;
    }
    throw new Error('mark an initial state first');
  }

  private sortedIds(): string[] {
    return [...this.nodes.keys()].sort();
  }

  // -- PDA -------------------------------------------------------------------
  // edge label: "read, pop / push" with 'eps' for the empty read or push

  toPdaDoc(): PdaDoc {
    const stack = new Set<string>(this.options.initialStack ? [this.options.initialStack] : []);
    const transitions = this.edges.map((e) => {
      const m = /^\s*([^,]+)\s*,\s*(\S+)\s*\/\s*(\S*)\s*$/.exec(e.label);
      if (!m) throw new Error(`bad PDA edge label '${e.label}' (want "read, pop / push")`);
      const push = m[3] === 'eps' ? '' : m[3];
      stack.add(m[2]);
      for (const s of push) stack.add(s);
      return { from: e.from, read: m[1].trim(), pop: m[2], to: e.to, push };
    });
    return {
      states: this.sortedIds(),
      input_alphabet: [...(this.options.alphabet ?? [])].sort(),
      stack_alphabet: [...stack].sort(),
      initial: this.initialNode(),
      initial_stack: this.options.initialStack ?? 'Z',
      acceptance: this.options.acceptance ?? 'final',
      accepting: this.sortedIds().filter((id) => this.nodes.get(id)!.accepting),
      transitions,
    };
  }

  loadPdaDoc(doc: PdaDoc) {
    this.nodes.clear();
    this.edges = [];
    doc.states.forEach((id, idx) => {
      const node = this.addNode(80 + 120 * (idx % 5), 80 + 120 * Math.floor(idx / 5), id);
      node.initial = id === doc.initial;
      node.accepting = doc.accepting.includes(id);
    });
    this.options.alphabet = [...doc.input_alphabet];
    this.options.stackAlphabet = [...doc.stack_alphabet];
    this.options.initialStack = doc.initial_stack;
    this.options.acceptance = doc.acceptance;
    for (const t of doc.transitions) {
      this.addEdge(t.from, t.to, `${t.read}, ${t.pop} / ${t.push === '' ? 'eps' : t.push}`);
    }
  }

  // -- TM ----------------------------------------------------------------------
  // edge label: "r1,...,rk / w1,...,wk / m1,...,mk"

  toTmDoc(): TmDoc {
    const tapes = this.options.tapes ?? 1;
    const alphabet = new Set(['1', '_']);
    const transitions = this.edges.map((e) => {
      const parts = e.label.split('/').map((p) => p.trim());
      if (parts.length !== 3) {
        throw new Error(`bad TM edge label '${e.label}' (want "reads / writes / moves")`);
      }
      const [read, write, move] = parts.map((p) => p.split(',').map((s) => s.trim()));
      if (read.length !== tapes || write.length !== tapes || move.length !== tapes) {
        throw new Error(`TM edge label needs ${tapes} entries per part`);
      }
      for (const s of [...read, ...write]) alphabet.add(s);
      return { from: e.from, read, to: e.to, write, move };
    });
    return {
      tapes,
      states: this.sortedIds(),
      alphabet: [...alphabet].sort(),
      blank: '_',
      initial: this.initialNode(),
      halting: this.sortedIds().filter((id) => this.nodes.get(id)!.accepting),
      transitions,
    };
  }

  loadTmDoc(doc: TmDoc) {
    this.nodes.clear();
    this.edges = [];
    this.options.tapes = doc.tapes;
    doc.states.forEach((id, idx) => {
      const node = this.addNode(80 + 140 * (idx % 4), 80 + 120 * Math.floor(idx / 4), id);
      node.initial = id === doc.initial;
      node.accepting = doc.halting.includes(id);
    });
    for (const t of doc.transitions) {
      this.addEdge(t.from, t.to,
                   `${t.read.join(',')} / ${t.write.join(',')} / ${t.move.join(',')}`);
    }
  }

  // -- block NFA -----------------------------------------------------------------
  // edge label: a symbol or 'eps'

  toBlockNfaDoc(): BlockNfaDoc {
    return {
      states: this.sortedIds(),
      alphabet: [...(this.options.alphabet ?? [])].sort(),
      initial: this.initialNode(),
      accepting: this.sortedIds().filter((id) => this.nodes.get(id)!.accepting),
      transitions: this.edges.map((e) => ({
        from: e.from,
        read: e.label.trim() || 'eps',
        to: e.to,
      })),
      blocks: this.blocks.map((b) => ({
        label: b.label, entry: b.entry, exit: b.exit, inner: [...b.inner].sort(),
      })),
    };
  }

  loadBlockNfaDoc(doc: BlockNfaDoc) {
    this.nodes.clear();
    this.edges = [];
    this.blocks = [];
    doc.states.forEach((id, idx) => {
      const node = this.addNode(80 + 120 * (idx % 5), 80 + 120 * Math.floor(idx / 5), id);
      node.initial = id === doc.initial;
      node.accepting = doc.accepting.includes(id);
    });
    if (doc.alphabet) this.options.alphabet = [...doc.alphabet];
    for (const t of doc.transitions) this.addEdge(t.from, t.to, t.read);
    for (const b of doc.blocks ?? []) {
      this.blocks.push({ label: b.label, entry: b.entry, exit: b.exit,
                         inner: [...b.inner] });
    }
  }

  // -- shared editor interface ---------------------------------------------------

  emit(): Record<string, unknown> {
    if (this.flavor === 'pda') return { pda: this.toPdaDoc() };
    if (this.flavor === 'tm') return { tm: this.toTmDoc() };
    return { automaton: this.toBlockNfaDoc() };
  }

  load(doc: Record<string, unknown>) {
    if (this.flavor === 'pda') this.loadPdaDoc(doc.pda as PdaDoc);
    else if (this.flavor === 'tm') this.loadTmDoc(doc.tm as TmDoc);
    else this.loadBlockNfaDoc(doc.automaton as BlockNfaDoc);
  }

  validate(): { ok: true } | { ok: false; issue: { message: string; line: number; column: number } } {
    try {
      this.emit();
      return { ok: true };
    } catch (err) {
      return {
        ok: false,
        issue: { message: err instanceof Error ? err.message : String(err),
                 line: 1, column: 1 },
      };
    }
  }
}
