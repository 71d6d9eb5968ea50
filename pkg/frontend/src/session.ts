/**
 * Session state for the co-creative loop.
 *
 * The state is an immutable value; every transition returns a new state.
 * History is append-only within a session: each server interaction either
 * appends exactly one turn or surfaces exactly one error, never both.
 */

import type { CanvasStroke } from "./capture.js";
import type { NoveltyLevel, ShiftReply, ShiftRequest } from "./wire.js";

export interface Turn {
  request: ShiftRequest;
  reply: ShiftReply;
}

export interface SessionState {
  prompt: string;
  strokes: CanvasStroke[];
  novelty: NoveltyLevel;
  lastReply: ShiftReply | null;
  lastError: string | null;
  history: Turn[];
  pending: boolean;
}

export function newSession(prompt: string, novelty: NoveltyLevel = "intermediate"): SessionState {
  return {
    prompt,
    strokes: [],
    novelty,
    lastReply: null,
    lastError: null,
    history: [],
    pending: false,
  };
}

export function addStroke(state: SessionState, stroke: CanvasStroke): SessionState {
  return { ...state, strokes: [...state.strokes, stroke] };
}

export function setNovelty(state: SessionState, novelty: NoveltyLevel): SessionState {
  return { ...state, novelty };
}

export function beginRequest(state: SessionState): SessionState {
  return { ...state, pending: true, lastError: null };
}

/** A successful exchange appends one history turn and clears any error. */
export function applyReply(
  state: SessionState,
  request: ShiftRequest,
  reply: ShiftReply,
): SessionState {
  return {
    ...state,
    pending: false,
    lastReply: reply,
    lastError: null,
    history: [...state.history, { request, reply }],
  };
}

/** A failed exchange surfaces one error and leaves the drawing untouched. */
export function applyError(state: SessionState, code: string): SessionState {
  return { ...state, pending: false, lastError: code };
}

/** Reset for a new design task; the novelty selection persists. */
export function newTask(state: SessionState, prompt: string): SessionState {
  return newSession(prompt, state.novelty);
}
