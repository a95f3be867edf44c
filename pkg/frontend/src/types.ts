/** Document shapes shared with the grading service. */

export type ProblemKind =
  | 'ReWords'
  | 'CfgWords'
  | 'PdaWords'
  | 'ReConstruction'
  | 'CfgConstruction'
  | 'PdaConstruction'
  | 'ReToNfa'
  | 'EquivClassesDecide'
  | 'EquivClassesFind'
  | 'PumpingGame'
  | 'FindDerivation'
  | 'CnfTransform'
  | 'Cyk'
  | 'WhileToTm';

export interface ProblemDoc {
  kind: ProblemKind;
  max_points: number;
  payload: Record<string, unknown>;
}

/** A posed problem as the server shows it to a student: no solution fields. */
export interface ProblemView {
  id: string;
  course_id: string;
  max_points: number;
  max_attempts: number | null;
  start: number | null;
  end: number | null;
  attempts_used: number;
  best_points: number | null;
  problem: ProblemDoc;
}

export interface FeedbackItem {
  severity: 'info' | 'warning' | 'error';
  text: string;
  counterexample?: string | number[];
  location?: unknown[];
}

export interface GradeReportDoc {
  points: number;
  max_points: number;
  fraction: string;
  not_counted: boolean;
  feedback: FeedbackItem[];
  metadata: Record<string, unknown>;
  attempt_id?: string;
  counted?: boolean;
}

export interface PdaTransitionDoc {
  from: string;
  read: string; // 'eps' for the empty word
  pop: string;
  to: string;
  push: string; // first character lands on top
}

export interface PdaDoc {
  states: string[];
  input_alphabet: string[];
  stack_alphabet: string[];
  initial: string;
  initial_stack: string;
  acceptance: 'final' | 'empty';
  accepting: string[];
  transitions: PdaTransitionDoc[];
}

export interface TmTransitionDoc {
  from: string;
  read: string[];
  to: string;
  write: string[];
  move: string[]; // L | R | S per tape
}

export interface TmDoc {
  tapes: number;
  states: string[];
  alphabet: string[];
  blank: string;
  initial: string;
  halting: string[];
  transitions: TmTransitionDoc[];
}

export interface NfaTransitionDoc {
  from: string;
  read: string; // 'eps' allowed
  to: string;
}

export interface BlockDoc {
  label: string;
  entry: string;
  exit: string;
  inner: string[];
}

export interface BlockNfaDoc {
  states: string[];
  alphabet?: string[];
  initial: string;
  accepting: string[];
  transitions: NfaTransitionDoc[];
  blocks: BlockDoc[];
}

export type GamePhase =
  | 'claim'
  | 'choose_n'
  | 'choose_word'
  | 'choose_split'
  | 'choose_i'
  | 'done';

export interface GameStateDoc {
  claim: 'regular' | 'nonregular' | null;
  phase: GamePhase;
  n: number | null;
  w: string | null;
  split: [string, string, string] | null;
  i: number | null;
  winner: 'student' | 'tutor' | null;
  report?: GradeReportDoc;
  transcript?: string[];
}

export type GameMove =
  | { kind: 'claim'; claim: 'regular' | 'nonregular' }
  | { kind: 'n'; n: number }
  | { kind: 'word'; word: string }
  | { kind: 'split'; x: string; y: string; z: string }
  | { kind: 'i'; i: number };

export interface PdaRunStepDoc {
  state: string;
  remaining: string;
  stack: string; // bottom to top
}

export interface PdaRunDoc {
  word: string;
  verdict: 'accepted' | 'rejected' | 'cutoff';
  steps: PdaRunStepDoc[];
}

export interface TmRunDoc {
  input: number[];
  status: string;
  output: number[] | null;
}
