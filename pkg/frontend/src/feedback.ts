/**
 * Feedback panel: points, exact fraction, messages with severity styling, and
 * one-click simulation of counterexamples for PDA and TM problems via the
 * server's trace endpoints.
 */

import { ApiClient } from './client.js';
import type {
  FeedbackItem,
  GradeReportDoc,
  PdaDoc,
  PdaRunDoc,
  ProblemDoc,
  TmDoc,
  TmRunDoc,
} from './types.js';

export interface FeedbackLine {
  severity: FeedbackItem['severity'];
  text: string;
  /** present when the line carries a word/input that can be simulated */
  simulate: (() => Promise<PdaRunDoc | TmRunDoc>) | null;
}

export class FeedbackPanel {
  constructor(
    readonly client: ApiClient,
    readonly problem: ProblemDoc,
    /** the student's machine, when the attempt was one (enables simulate) */
    readonly attempt?: Record<string, unknown>,
  ) {}

  headline(report: GradeReportDoc): string {
    const counted = report.not_counted ? ' (attempt not counted)' : '';
    return `${report.points} / ${report.max_points} points — fraction ${report.fraction}${counted}`;
  }

  lines(report: GradeReportDoc): FeedbackLine[] {
    return report.feedback.map((item) => ({
      severity: item.severity,
      text: item.text,
      simulate: this.simulator(item),
    }));
  }

  private simulator(item: FeedbackItem): (() => Promise<PdaRunDoc | TmRunDoc>) | null {
    if (item.counterexample === undefined || item.counterexample === null) return null;
    const kind = this.problem.kind;
    if ((kind === 'PdaWords' || kind === 'PdaConstruction')
        && typeof item.counterexample === 'string') {
      const word = item.counterexample;
      const machine = (this.attempt?.pda ?? this.problem.payload.pda) as PdaDoc | undefined;
      if (!machine) return null;
      return () => this.client.tracePda(machine, word);
    }
    if (kind === 'WhileToTm' && Array.isArray(item.counterexample)) {
      const input = item.counterexample as number[];
      const machine = this.attempt?.tm as TmDoc | undefined;
      if (!machine) return null;
      return () => this.client.traceTm(machine, input);
    }
    return null;
  }
}
