/**
 * DOM wiring for the sketching partner client.
 *
 * Left pane: the user draws. Right pane: the service's response sketch with
 * its label. The turn loop is entirely client-side: draw, pick a novelty
 * level, submit, get inspired, keep drawing.
 */

import { ApiError, ShiftClient } from "./api.js";
import { StrokeCapture, toCorpusStrokes } from "./capture.js";
import { renderSketch } from "./render.js";
import {
  addStroke,
  applyError,
  applyReply,
  beginRequest,
  newSession,
  newTask,
  SessionState,
  setNovelty,
} from "./session.js";
import { NOVELTY_LEVELS, NoveltyLevel, ShiftRequest } from "./wire.js";

export interface AppElements {
  userCanvas: HTMLCanvasElement;
  responseCanvas: HTMLCanvasElement;
  labelInput: HTMLInputElement;
  noveltySelect: HTMLSelectElement;
  submitButton: HTMLButtonElement;
  clearButton: HTMLButtonElement;
  promptBanner: HTMLElement;
  promptInput: HTMLInputElement;
  newTaskButton: HTMLButtonElement;
  responseCaption: HTMLElement;
  responseStats: HTMLElement;
  errorLine: HTMLElement;
  historyList: HTMLElement;
  hintLine: HTMLElement;
}

export class PartnerApp {
  state: SessionState;
  private readonly capture = new StrokeCapture();
  private readonly userCtx: CanvasRenderingContext2D | null;
  private readonly responseCtx: CanvasRenderingContext2D | null;

  constructor(
    private readonly el: AppElements,
    private readonly client: ShiftClient,
    initialPrompt = "draw an object for the design task",
  ) {
    this.state = newSession(initialPrompt);
    this.userCtx = el.userCanvas.getContext("2d");
    this.responseCtx = el.responseCanvas.getContext("2d");
    this.bind();
    this.sync();
  }

  private bind(): void {
    const canvas = this.el.userCanvas;
    canvas.addEventListener("pointerdown", (ev) => this.pointerDown(ev));
    canvas.addEventListener("pointermove", (ev) => this.pointerMove(ev));
    canvas.addEventListener("pointerup", () => this.pointerUp());
    canvas.addEventListener("pointerleave", () => this.pointerUp());
    this.el.submitButton.addEventListener("click", () => {
      void this.submit();
    });
    this.el.clearButton.addEventListener("click", () => this.clearCanvas());
    this.el.newTaskButton.addEventListener("click", () => {
      this.startTask(this.el.promptInput.value || "new design task");
    });
    this.el.noveltySelect.addEventListener("change", () => {
      const value = this.el.noveltySelect.value as NoveltyLevel;
      if ((NOVELTY_LEVELS as string[]).includes(value)) {
        this.state = setNovelty(this.state, value);
      }
    });
  }

  private canvasPoint(ev: PointerEvent | MouseEvent): { x: number; y: number } {
    const rect = this.el.userCanvas.getBoundingClientRect();
    const x = ev.offsetX || ev.clientX - rect.left;
    const y = ev.offsetY || ev.clientY - rect.top;
    return { x, y };
  }

  private lastPoint: { x: number; y: number } | null = null;

  private pointerDown(ev: PointerEvent | MouseEvent): void {
    const { x, y } = this.canvasPoint(ev);
    this.capture.begin(x, y);
    this.lastPoint = { x, y };
  }

  private pointerMove(ev: PointerEvent | MouseEvent): void {
    if (!this.capture.drawing) return;
    const { x, y } = this.canvasPoint(ev);
    const added = this.capture.move(x, y);
    if (added && this.lastPoint && this.userCtx) {
      this.userCtx.beginPath();
      this.userCtx.moveTo(this.lastPoint.x, this.lastPoint.y);
      this.userCtx.lineTo(added.x, added.y);
      this.userCtx.stroke();
    }
    if (added) this.lastPoint = added;
  }

  private pointerUp(): void {
    const stroke = this.capture.end();
    this.lastPoint = null;
    if (stroke) {
      this.state = addStroke(this.state, stroke);
      this.sync();
    }
  }

  async submit(): Promise<void> {
    if (this.state.pending) return;
    if (this.state.strokes.length === 0) {
      this.el.hintLine.textContent = "draw something first";
      return;
    }
    const label = this.el.labelInput.value.trim();
    if (!label) {
      this.el.hintLine.textContent = "name your object so the partner can look it up";
      return;
    }
    this.el.hintLine.textContent = "";
    const request: ShiftRequest = {
      label,
      strokes: toCorpusStrokes(
        this.state.strokes,
        this.el.userCanvas.width,
        this.el.userCanvas.height,
      ),
      novelty: this.state.novelty,
    };
    this.state = beginRequest(this.state);
    this.sync();
    try {
      const reply = await this.client.shift(request);
      this.state = applyReply(this.state, request, reply);
    } catch (err) {
      const code = err instanceof ApiError ? err.code : "network_error";
      this.state = applyError(this.state, code);
    }
    this.sync();
  }

  startTask(prompt: string): void {
    this.state = newTask(this.state, prompt);
    this.userCtx?.clearRect(0, 0, this.el.userCanvas.width, this.el.userCanvas.height);
    this.renderResponse();
    this.sync();
  }

  clearCanvas(): void {
    this.state = { ...this.state, strokes: [] };
    this.userCtx?.clearRect(0, 0, this.el.userCanvas.width, this.el.userCanvas.height);
    this.sync();
  }

  private renderResponse(): void {
    const reply = this.state.lastReply;
    const strokes = reply ? reply.sketch : [];
    const segments = renderSketch(
      strokes,
      this.responseCtx,
      this.el.responseCanvas.width,
      this.el.responseCanvas.height,
    );
    this.el.responseCanvas.dataset.segments = String(segments.length);
    if (reply) {
      this.el.responseCaption.textContent = reply.target_label;
      this.el.responseStats.textContent =
        `visual ${reply.visual_similarity.toFixed(3)} | ` +
        `conceptual ${reply.conceptual_similarity.toFixed(3)} | ` +
        `composite ${reply.composite.toFixed(3)}` +
        (reply.fallback_used ? " | fallback" : "");
    } else {
      this.el.responseCaption.textContent = "";
      this.el.responseStats.textContent = "";
    }
  }

  private renderHistory(): void {
    this.el.historyList.textContent = "";
    for (const turn of this.state.history) {
      const item = document.createElement("li");
      item.textContent =
        `${turn.request.label} + ${turn.request.novelty} -> ${turn.reply.target_label}`;
      this.el.historyList.appendChild(item);
    }
  }

  /** Reflect the current state into the DOM. */
  private sync(): void {
    this.el.promptBanner.textContent = this.state.prompt;
    this.el.submitButton.disabled = this.state.pending;
    this.el.errorLine.textContent = this.state.lastError ?? "";
    this.el.noveltySelect.value = this.state.novelty;
    this.renderResponse();
    this.renderHistory();
  }

  /** Test hook: inject pointer samples without synthesizing events. */
  drawStroke(samples: Array<{ x: number; y: number }>): void {
    if (samples.length === 0) return;
    this.capture.begin(samples[0].x, samples[0].y);
    for (const s of samples.slice(1)) this.capture.move(s.x, s.y);
    this.pointerUp();
  }
}

export function mount(doc: Document, baseUrl: string): PartnerApp {
  const byId = <T extends HTMLElement>(id: string): T => {
    const node = doc.getElementById(id);
    if (!node) throw new Error(`missing element #${id}`);
    return node as T;
  };
  const el: AppElements = {
    userCanvas: byId<HTMLCanvasElement>("user-canvas"),
    responseCanvas: byId<HTMLCanvasElement>("response-canvas"),
    labelInput: byId<HTMLInputElement>("label-input"),
    noveltySelect: byId<HTMLSelectElement>("novelty-select"),
    submitButton: byId<HTMLButtonElement>("submit-button"),
    clearButton: byId<HTMLButtonElement>("clear-button"),
    promptBanner: byId<HTMLElement>("prompt-banner"),
    promptInput: byId<HTMLInputElement>("prompt-input"),
    newTaskButton: byId<HTMLButtonElement>("new-task-button"),
    responseCaption: byId<HTMLElement>("response-caption"),
    responseStats: byId<HTMLElement>("response-stats"),
    errorLine: byId<HTMLElement>("error-line"),
    historyList: byId<HTMLElement>("history-list"),
    hintLine: byId<HTMLElement>("hint-line"),
  };
  return new PartnerApp(el, new ShiftClient(baseUrl));
}

declare global {
  interface Window {
    partnerApp?: PartnerApp;
  }
}

// Auto-mount only when loaded into the real page; tests build their own DOM
// and call mount() explicitly.
if (
  typeof window !== "undefined" &&
  typeof document !== "undefined" &&
  document.getElementById("user-canvas") !== null
) {
  const params = new URLSearchParams(window.location.search);
  const base = params.get("api") ?? "";
  window.partnerApp = mount(document, base);
}
