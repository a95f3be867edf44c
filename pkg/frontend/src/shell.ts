/**
 * Minimal browser shell wiring the models to the DOM: course navigation on
 * the left, the selected problem's editor in the middle, feedback below.
 * All verdicts come from the server; this file only renders and forwards.
 */

import { ApiClient } from './client.js';
import { CanvasEditor } from './canvas.js';
import { CykTableEditor, DerivationEditor, WordListEditor, WordSetEditor,
         attemptEditor } from './editors.js';
import { FeedbackPanel } from './feedback.js';
import { GamePanel } from './game.js';
import { NavigationModel } from './navigation.js';
import type { AttemptEditor } from './editors.js';
import type { GradeReportDoc, ProblemView } from './types.js';

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K, attrs: Record<string, string> = {}, ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  node.append(...children);
  return node;
}

// ---------------------------------------------------------------------------
// SVG canvas rendering: click empty space to add a state, drag to move,
// shift-click two states to connect them, double-click to toggle accepting

const SVG_NS = 'http://www.w3.org/2000/svg';

export function renderCanvas(editor: CanvasEditor, host: HTMLElement,
                             onChange: () => void) {
  host.innerHTML = '';
  const svg = document.createElementNS(SVG_NS, 'svg');
  svg.setAttribute('width', '640');
  svg.setAttribute('height', '420');
  svg.setAttribute('class', 'canvas');
  let edgeSource: string | null = null;
  let dragging: string | null = null;

  const redraw = () => {
    svg.innerHTML = '';
    for (const edge of editor.edges) {
      const from = editor.nodes.get(edge.from)!;
      const to = editor.nodes.get(edge.to)!;
      const line = document.createElementNS(SVG_NS, 'line');
      line.setAttribute('x1', String(from.x));
      line.setAttribute('y1', String(from.y));
      line.setAttribute('x2', String(to.x));
      line.setAttribute('y2', String(to.y));
      line.setAttribute('stroke', '#666');
      svg.append(line);
      const label = document.createElementNS(SVG_NS, 'text');
      label.setAttribute('x', String((from.x + to.x) / 2));
      label.setAttribute('y', String((from.y + to.y) / 2 - 6));
      label.textContent = edge.label;
      svg.append(label);
    }
    for (const node of editor.nodes.values()) {
      const circle = document.createElementNS(SVG_NS, 'circle');
      circle.setAttribute('cx', String(node.x));
      circle.setAttribute('cy', String(node.y));
      circle.setAttribute('r', '22');
      circle.setAttribute('fill', node.initial ? '#cde' : '#eee');
      circle.setAttribute('stroke', node.accepting ? '#283' : '#555');
      circle.setAttribute('stroke-width', node.accepting ? '4' : '1.5');
      circle.addEventListener('pointerdown', () => { dragging = node.id; });
      circle.addEventListener('click', (event) => {
        if (event.shiftKey) {
          if (edgeSource === null) {
            edgeSource = node.id;
          } else {
            const label = window.prompt('transition label') ?? '';
            if (label) editor.addEdge(edgeSource, node.id, label);
            edgeSource = null;
            onChange();
          }
          event.stopPropagation();
          redraw();
        }
      });
      circle.addEventListener('dblclick', () => {
        editor.toggleAccepting(node.id);
        onChange();
        redraw();
      });
      svg.append(circle);
      const label = document.createElementNS(SVG_NS, 'text');
      label.setAttribute('x', String(node.x));
      label.setAttribute('y', String(node.y + 4));
      label.setAttribute('text-anchor', 'middle');
      label.textContent = node.id;
      svg.append(label);
    }
  };

  svg.addEventListener('pointermove', (event) => {
    if (dragging) {
      const rect = svg.getBoundingClientRect();
      editor.moveNode(dragging, event.clientX - rect.left, event.clientY - rect.top);
      redraw();
    }
  });
  svg.addEventListener('pointerup', () => {
    if (dragging) onChange();
    dragging = null;
  });
  svg.addEventListener('click', (event) => {
    if (event.target === svg && !event.shiftKey) {
      const rect = svg.getBoundingClientRect();
      editor.addNode(event.clientX - rect.left, event.clientY - rect.top);
      onChange();
      redraw();
    }
  });
  redraw();
  host.append(svg);
  host.append(el('p', { class: 'hint' },
                 'click: add state, drag: move, shift-click two states: edge, '
                 + 'double-click: toggle accepting'));
}

// ---------------------------------------------------------------------------
// per-kind editor widgets

function renderEditor(editor: AttemptEditor, view: ProblemView, host: HTMLElement,
                      onChange: () => void) {
  host.innerHTML = '';
  if (editor instanceof CanvasEditor) {
    renderCanvas(editor, host, onChange);
    return;
  }
  if (editor instanceof WordListEditor || editor instanceof WordSetEditor) {
    const area = el('textarea', { rows: '6', cols: '40' });
    area.addEventListener('input', () => {
      const words = area.value.split('\n').filter((w) => w.length > 0 || w === '');
      if (editor instanceof WordSetEditor) {
        editor.words = area.value.split('\n').filter((_, i, arr) =>
          i < arr.length - 1 || arr[i] !== '');
      } else {
        const mid = editor.inCount;
        const lines = area.value.split('\n');
        editor.inWords = lines.slice(0, mid);
        editor.outWords = lines.slice(mid, mid + editor.outCount);
        void words;
      }
      onChange();
    });
    host.append(el('p', {}, 'one word per line (words in the language first)'), area);
    return;
  }
  if (editor instanceof CykTableEditor) {
    const table = el('table', { class: 'cyk' });
    for (let length = editor.rowCount(); length >= 1; length -= 1) {
      const row = el('tr');
      for (let i = 0; i < editor.cellsInRow(length); i += 1) {
        const input = el('input', { size: '6' }) as HTMLInputElement;
        input.value = editor.rows[length - 1][i].join(',');
        input.addEventListener('input', () => {
          editor.rows[length - 1][i] = input.value.split(',')
            .map((s) => s.trim()).filter(Boolean).sort();
          onChange();
        });
        row.append(el('td', {}, input));
      }
      table.append(row);
    }
    host.append(table, el('p', { class: 'hint' },
                          `cells for ${editor.word}; commas separate nonterminals`));
    return;
  }
  if (editor instanceof DerivationEditor) {
    const list = el('div');
    const redraw = () => {
      list.innerHTML = '';
      editor.steps.forEach((step, idx) => list.append(el('div', {}, `${idx}: ${step}`)));
    };
    const input = el('input', { size: '30' }) as HTMLInputElement;
    const add = el('button', {}, 'add step');
    add.addEventListener('click', () => {
      if (input.value) {
        editor.addStep(input.value);
        input.value = '';
        onChange();
        redraw();
      }
    });
    const undo = el('button', {}, 'remove last');
    undo.addEventListener('click', () => {
      editor.removeLast();
      onChange();
      redraw();
    });
    redraw();
    host.append(list, input, add, undo);
    return;
  }
  // text editors (regex, grammar, while, equivalence justification)
  const area = el('textarea', { rows: '6', cols: '60' });
  const anyEditor = editor as unknown as { text?: string; justification?: string };
  area.value = anyEditor.text ?? anyEditor.justification ?? '';
  const message = el('p', { class: 'validation' });
  area.addEventListener('input', () => {
    if ('text' in editor) anyEditor.text = area.value;
    else anyEditor.justification = area.value;
    const result = editor.validate();
    message.textContent = result.ok ? '' :
      `line ${result.issue.line}, column ${result.issue.column}: ${result.issue.message}`;
    onChange();
  });
  host.append(area, message);
  void view;
}

// ---------------------------------------------------------------------------
// application

export function mount(root: HTMLElement) {
  const baseUrl = (root.dataset.baseUrl ?? 'http://127.0.0.1:8000');
  const tokenInput = el('input', { size: '48', placeholder: 'bearer token' }) as
    HTMLInputElement;
  const connect = el('button', {}, 'connect');
  const nav = el('div', { class: 'nav' });
  const main = el('div', { class: 'main' });
  const feedbackHost = el('div', { class: 'feedback' });
  root.append(el('div', { class: 'topbar' }, tokenInput, connect), nav, main,
              feedbackHost);

  connect.addEventListener('click', async () => {
    const client = new ApiClient(baseUrl, tokenInput.value.trim());
    const model = new NavigationModel(await client.listPosed());
    const drawNav = () => {
      nav.innerHTML = '';
      for (const section of model.sections) {
        const header = el('h3', {}, `${section.collapsed ? '▸' : '▾'} ${section.topic}`);
        header.addEventListener('click', () => {
          model.toggle(section.topic);
          drawNav();
        });
        nav.append(header);
        if (section.collapsed) continue;
        for (const view of section.entries) {
          const row = el('div', { class: 'entry' },
                         `${view.problem.kind} [${view.id}] — ${model.progress(view)}`);
          row.addEventListener('click', () => openProblem(client, view));
          nav.append(row);
        }
      }
    };
    drawNav();
  });

  async function openProblem(client: ApiClient, view: ProblemView) {
    main.innerHTML = '';
    feedbackHost.innerHTML = '';
    main.append(el('h2', {}, `${view.problem.kind} — ${view.max_points} points`));
    const description = view.problem.payload.description;
    if (typeof description === 'string' && description) {
      main.append(el('p', {}, description));
    }
    if (view.problem.kind === 'PumpingGame') {
      renderGame(client, view);
      return;
    }
    const editor = attemptEditor(view.problem);
    const host = el('div');
    renderEditor(editor, view, host, () => undefined);
    const submit = el('button', {}, 'submit attempt');
    submit.addEventListener('click', async () => {
      try {
        const report = await client.submitAttempt(view.id, editor.emit());
        renderFeedback(client, view, report);
      } catch (err) {
        feedbackHost.textContent = err instanceof Error ? err.message : String(err);
      }
    });
    main.append(host, submit);
  }

  function renderFeedback(client: ApiClient, view: ProblemView,
                          report: GradeReportDoc) {
    const panel = new FeedbackPanel(client, view.problem);
    feedbackHost.innerHTML = '';
    feedbackHost.append(el('h3', {}, panel.headline(report)));
    for (const line of panel.lines(report)) {
      const row = el('div', { class: `line ${line.severity}` }, line.text);
      if (line.simulate) {
        const button = el('button', {}, 'simulate');
        button.addEventListener('click', async () => {
          const run = await line.simulate!();
          row.append(el('pre', {}, JSON.stringify(run, null, 2)));
        });
        row.append(button);
      }
      feedbackHost.append(row);
    }
  }

  function renderGame(client: ApiClient, view: ProblemView) {
    const panel = new GamePanel(client, view.id);
    const host = el('div');
    main.append(host);

    const draw = () => {
      host.innerHTML = '';
      const form = panel.form();
      if (panel.lastError) host.append(el('p', { class: 'error' }, panel.lastError));
      if (!form) {
        host.append(el('h3', {}, `winner: ${panel.state.winner}`));
        for (const line of panel.transcript()) host.append(el('div', {}, line));
        return;
      }
      host.append(el('p', {}, form.prompt));
      if (form.fields.includes('claim')) {
        for (const claim of ['regular', 'nonregular'] as const) {
          const button = el('button', {}, claim);
          button.addEventListener('click', async () => { await panel.claim(claim); draw(); });
          host.append(button);
        }
      }
      if (form.fields.includes('n') || form.fields.includes('i')) {
        const input = el('input', { type: 'number', min: form.fields.includes('n') ? '1' : '0', value: '1' }) as HTMLInputElement;
        const go = el('button', {}, 'play');
        go.addEventListener('click', async () => {
          const value = Number(input.value);
          if (form.fields.includes('n')) await panel.chooseN(value);
          else await panel.chooseI(value);
          draw();
        });
        host.append(input, go);
      }
      if (form.fields.includes('word')) {
        const input = el('input', { size: '30' }) as HTMLInputElement;
        const go = el('button', {}, 'play');
        go.addEventListener('click', async () => { await panel.chooseWord(input.value); draw(); });
        host.append(input, go);
      }
      if (form.fields.includes('boundaries') && panel.split) {
        const word = panel.split.word;
        const row = el('div', { class: 'split' });
        const render = () => {
          const { x, y, z } = panel.split!.parts();
          row.textContent = `x = '${x}'   y = '${y}'   z = '${z}'`;
        };
        const first = el('input', { type: 'range', min: '0', max: String(word.length - 1), value: '0' }) as HTMLInputElement;
        const second = el('input', { type: 'range', min: '1', max: String(word.length), value: '1' }) as HTMLInputElement;
        first.addEventListener('input', () => { panel.split!.dragFirst(Number(first.value)); render(); });
        second.addEventListener('input', () => { panel.split!.dragSecond(Number(second.value)); render(); });
        const go = el('button', {}, 'play split');
        go.addEventListener('click', async () => { await panel.chooseSplitFromBoundaries(); draw(); });
        render();
        host.append(el('div', {}, `w = '${word}'`), first, second, row, go);
      }
    };
    draw();
  }
}
