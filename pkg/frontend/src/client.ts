/** Typed HTTP client for the grading service. */

import type {
  GameMove,
  GameStateDoc,
  GradeReportDoc,
  PdaDoc,
  PdaRunDoc,
  ProblemDoc,
  ProblemView,
  TmDoc,
  TmRunDoc,
} from './types.js';

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
  }
}

export class ApiClient {
  constructor(readonly baseUrl: string, readonly token: string) {}

  private async call<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      method,
      headers: {
        Authorization: `Bearer ${this.token}`,
        ...(body !== undefined ? { 'Content-Type': 'application/json' } : {}),
      },
      body: body !== undefined ? JSON.stringify(body) : undefined,
    });
    const text = await response.text();
    if (!response.ok) {
      let detail = text;
      try {
        detail = JSON.parse(text).detail ?? text;
      } catch {
        // non-JSON error body, keep the raw text
      }
      throw new ApiError(response.status, String(detail));
    }
    if (response.headers.get('content-type')?.includes('text/csv')) {
      return text as unknown as T;
    }
    return JSON.parse(text) as T;
  }

  createCourse(title: string, password: string) {
    return this.call<{ id: string; title: string }>('POST', '/courses',
                                                    { title, password });
  }

  enroll(courseId: string, password: string) {
    return this.call<{ id: string }>('POST', `/courses/${courseId}/enroll`, { password });
  }

  createProblem(courseId: string, problem: ProblemDoc) {
    return this.call<{ id: string; warnings: string[] }>(
      'POST', `/courses/${courseId}/problems`, problem);
  }

  pose(problemId: string, options: { max_points?: number; max_attempts?: number;
        start?: number; end?: number } = {}) {
    return this.call<{ id: string }>('POST', `/problems/${problemId}/pose`, options);
  }

  listPosed() {
    return this.call<ProblemView[]>('GET', '/posed');
  }

  submitAttempt(posedId: string, attempt: Record<string, unknown>) {
    return this.call<GradeReportDoc>('POST', `/posed/${posedId}/attempts`, attempt);
  }

  gameMove(posedId: string, move: GameMove) {
    return this.call<GameStateDoc>('POST', `/posed/${posedId}/game`, move);
  }

  gradesCsv(courseId: string) {
    return this.call<string>('GET', `/courses/${courseId}/grades.csv`);
  }

  generate(kind: string, options: { d_min?: number; d_max?: number; seed?: number;
            count?: number } = {}) {
    return this.call<ProblemDoc[]>('POST', '/generate', { kind, ...options });
  }

  tracePda(pda: PdaDoc, word: string) {
    return this.call<PdaRunDoc>('POST', '/trace/pda', { pda, word });
  }

  traceTm(tm: TmDoc, input: number[]) {
    return this.call<TmRunDoc>('POST', '/trace/tm', { tm, input });
  }

  health() {
    return this.call<{ status: string }>('GET', '/health');
  }
}
