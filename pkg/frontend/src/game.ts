/**
 * Pumping-lemma game panel: server-authoritative turn state plus the
 * legal-move form model for whichever phase the student must answer.
 *
 * The split phase is modeled as two draggable boundaries over the tutor's
 * word; boundary positions translate to the (x, y, z) move.
 */

import { ApiClient } from './client.js';
import type { GameMove, GamePhase, GameStateDoc } from './types.js';

export interface MoveForm {
  phase: GamePhase;
  prompt: string;
  /** input widgets the shell should render for this phase */
  fields: Array<'claim' | 'n' | 'word' | 'boundaries' | 'i'>;
}

const FORMS: Record<Exclude<GamePhase, 'done'>, MoveForm> = {
  claim: {
    phase: 'claim',
    prompt: 'Is the language regular?',
    fields: ['claim'],
  },
  choose_n: {
    phase: 'choose_n',
    prompt: 'Choose the pumping bound n.',
    fields: ['n'],
  },
  choose_word: {
    phase: 'choose_word',
    prompt: 'Choose a word in the language (long enough for the bound).',
    fields: ['word'],
  },
  choose_split: {
    phase: 'choose_split',
    prompt: 'Drag the two boundaries to split the word into x, y and z.',
    fields: ['boundaries'],
  },
  choose_i: {
    phase: 'choose_i',
    prompt: 'Choose how often to pump y.',
    fields: ['i'],
  },
};

export class SplitSelection {
  /** x = word[0..first), y = word[first..second), z = word[second..] */
  first = 0;
  second = 1;

  constructor(readonly word: string) {
    this.second = Math.min(1, word.length);
  }

  dragFirst(to: number) {
    // y stays nonempty: the first boundary cannot reach the word's end
    this.first = Math.max(0, Math.min(to, Math.max(this.word.length - 1, 0)));
    if (this.second < this.first + 1) this.second = Math.min(this.first + 1, this.word.length);
  }

  dragSecond(to: number) {
    this.second = Math.max(this.first + 1, Math.min(to, this.word.length));
  }

  parts(): { x: string; y: string; z: string } {
    return {
      x: this.word.slice(0, this.first),
      y: this.word.slice(this.first, this.second),
      z: this.word.slice(this.second),
    };
  }
}

export class GamePanel {
  state: GameStateDoc = {
    claim: null, phase: 'claim', n: null, w: null, split: null, i: null, winner: null,
  };
  lastError: string | null = null;
  split: SplitSelection | null = null;

  constructor(readonly client: ApiClient, readonly posedId: string) {}

  form(): MoveForm | null {
    if (this.state.phase === 'done') return null;
    return FORMS[this.state.phase];
  }

  /** The transcript lines once the game is over. */
  transcript(): string[] {
    return this.state.transcript ?? [];
  }

  private async play(move: GameMove): Promise<GameStateDoc> {
    try {
      this.state = await this.client.gameMove(this.posedId, move);
      this.lastError = null;
      if (this.state.phase === 'choose_split' && this.state.w) {
        this.split = new SplitSelection(this.state.w);
      }
    } catch (err) {
      // an illegal move leaves the server session untouched; surface the reason
      this.lastError = err instanceof Error ? err.message : String(err);
    }
    return this.state;
  }

  claim(claim: 'regular' | 'nonregular') {
    return this.play({ kind: 'claim', claim });
  }

  chooseN(n: number) {
    return this.play({ kind: 'n', n });
  }

  chooseWord(word: string) {
    return this.play({ kind: 'word', word });
  }

  chooseSplitFromBoundaries() {
    if (!this.split) throw new Error('no split selection active');
    const { x, y, z } = this.split.parts();
    return this.play({ kind: 'split', x, y, z });
  }

  chooseI(i: number) {
    return this.play({ kind: 'i', i });
  }
}
