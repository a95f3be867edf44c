/**
 * Collapsible course navigation grouped by topic, mirroring how problems are
 * presented: one section per topic, each listing its posed problems with the
 * student's progress.
 */

import type { ProblemKind, ProblemView } from './types.js';

export const TOPIC_OF: Record<ProblemKind, string> = {
  ReWords: 'Regular expressions',
  ReConstruction: 'Regular expressions',
  ReToNfa: 'Finite automata',
  EquivClassesDecide: 'Myhill-Nerode equivalence',
  EquivClassesFind: 'Myhill-Nerode equivalence',
  PumpingGame: 'Pumping lemma',
  CfgWords: 'Context-free grammars',
  CfgConstruction: 'Context-free grammars',
  FindDerivation: 'Context-free grammars',
  CnfTransform: 'Normal forms',
  Cyk: 'Normal forms',
  PdaWords: 'Pushdown automata',
  PdaConstruction: 'Pushdown automata',
  WhileToTm: 'Turing machines',
};

export interface TopicSection {
  topic: string;
  collapsed: boolean;
  entries: ProblemView[];
}

export class NavigationModel {
  sections: TopicSection[] = [];

  constructor(views: ProblemView[] = []) {
    this.refresh(views);
  }

  refresh(views: ProblemView[]) {
    const collapsedBefore = new Map(this.sections.map((s) => [s.topic, s.collapsed]));
    const byTopic = new Map<string, ProblemView[]>();
    for (const view of views) {
      const topic = TOPIC_OF[view.problem.kind] ?? 'Other';
      if (!byTopic.has(topic)) byTopic.set(topic, []);
      byTopic.get(topic)!.push(view);
    }
    this.sections = [...byTopic.entries()]
      .sort(([a], [b]) => a.localeCompare(b))
      .map(([topic, entries]) => ({
        topic,
        collapsed: collapsedBefore.get(topic) ?? false,
        entries,
      }));
  }

  toggle(topic: string) {
    const section = this.sections.find((s) => s.topic === topic);
    if (section) section.collapsed = !section.collapsed;
  }

  /** "3/10 points, 2 attempts used" style summary for a listing row. */
  progress(view: ProblemView): string {
    const score = view.best_points === null ? 'no score yet'
      : `${view.best_points}/${view.max_points} points`;
    const attempts = view.max_attempts === null
      ? `${view.attempts_used} attempts used`
      : `${view.attempts_used}/${view.max_attempts} attempts used`;
    return `${score}, ${attempts}`;
  }
}
