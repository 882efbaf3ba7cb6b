// View state and the server-frame reducer.
//
// Thin-client rule: positions and directions are never computed here;
// every estimate, direction and rendered message is lifted verbatim from
// a server frame. This module stays DOM-free so it is directly testable.

import type { Lang, PlanDoc, RssiMap, ServerFrame } from "./protocol.js";
import { STEP_LENGTH } from "./protocol.js";

export type Connection = "connecting" | "open" | "closed";

export interface Pose {
  x: number;
  y: number;
  heading: number;
}

export interface Estimate {
  x: number;
  y: number;
  poi?: string;
}

export interface LogEntry {
  text: string;
  kind: string;
  lang: Lang;
}

export interface ViewState {
  connection: Connection;
  plan: PlanDoc | null;
  truePose: Pose | null;
  tick: number;
  rssi: RssiMap;
  estimate: Estimate | null;
  lastDirection: string | null;
  activeDest: string | null;
  overlay: { kind: "none" | "dest" | "exit"; route: number[][] };
  lang: Lang;
  log: LogEntry[];
  diagnostics: string[];
  steeringEnabled: boolean;
  toast: string | null;
}

export function initialState(lang: Lang = "en"): ViewState {
  return {
    connection: "connecting",
    plan: null,
    truePose: null,
    tick: 0,
    rssi: {},
    estimate: null,
    lastDirection: null,
    activeDest: null,
    overlay: { kind: "none", route: [] },
    lang,
    log: [],
    diagnostics: [],
    steeringEnabled: true,
    toast: null,
  };
}

export function setConnection(state: ViewState, connection: Connection): ViewState {
  return { ...state, connection };
}

// Only subsequent rendered messages change with the language; the log and
// every marker keep their geometry.
export function setLanguage(state: ViewState, lang: Lang): ViewState {
  return { ...state, lang };
}

// The operator picked a destination: show its predefined route (from the
// plan document the server sent) until an emergency overrides it.
export function beginNavigation(state: ViewState, dest: string): ViewState {
  const route = state.plan?.routes[dest] ?? [];
  return { ...state, activeDest: dest, overlay: { kind: "dest", route: [...route] } };
}

function asNumber(value: unknown): number | null {
  return typeof value === "number" && Number.isFinite(value) ? value : null;
}

function poseFrom(data: Record<string, unknown>): Pose | null {
  const x = asNumber(data.x);
  const y = asNumber(data.y);
  const heading = asNumber(data.heading);
  if (x === null || y === null || heading === null) return null;
  return { x, y, heading };
}

function rssiFrom(data: Record<string, unknown>): RssiMap | null {
  if (typeof data.rssi !== "object" || data.rssi === null) return null;
  return data.rssi as RssiMap;
}

function appended(state: ViewState, frame: ServerFrame): LogEntry[] {
  return [...state.log, { text: frame.message, kind: frame.kind ?? "", lang: state.lang }];
}

export function pushDiagnostic(state: ViewState, note: string): ViewState {
  return { ...state, diagnostics: [...state.diagnostics, note] };
}

export function applyServerFrame(state: ViewState, frame: ServerFrame): ViewState {
  if (frame.status === "error") {
    const next: ViewState = { ...state, toast: frame.error_code ?? frame.message };
    if (frame.error_code === "sim_disabled") next.steeringEnabled = false;
    return next; // previous estimate and markers are retained
  }

  const data = frame.data;
  switch (frame.kind) {
    case "sim.state":
    case "sim.move": {
      const next: ViewState = { ...state, toast: null };
      const pose = poseFrom(data);
      if (pose) next.truePose = pose;
      const tick = asNumber(data.tick);
      if (tick !== null) next.tick = tick;
      const rssi = rssiFrom(data);
      if (rssi) next.rssi = rssi;
      if (frame.kind === "sim.state" && typeof data.plan === "object" && data.plan !== null) {
        next.plan = data.plan as unknown as PlanDoc;
      }
      return next;
    }
    case "locate": {
      const x = asNumber(data.x);
      const y = asNumber(data.y);
      if (x === null || y === null) return pushDiagnostic(state, "locate frame without position");
      const poi = typeof data.poi === "string" ? data.poi : undefined;
      return { ...state, toast: null, estimate: { x, y, poi }, log: appended(state, frame) };
    }
    case "navigate": {
      const x = asNumber(data.x);
      const y = asNumber(data.y);
      const direction = typeof data.direction === "string" ? data.direction : null;
      const next: ViewState = {
        ...state,
        toast: null,
        lastDirection: direction,
        log: appended(state, frame),
      };
      if (x !== null && y !== null) next.estimate = { x, y, poi: state.estimate?.poi };
      if (direction === "arrived") {
        next.activeDest = null;
        next.overlay = { kind: "none", route: [] };
      }
      return next;
    }
    case "emergency": {
      const route = Array.isArray(data.route) ? (data.route as number[][]) : [];
      const dest = typeof data.dest === "string" ? data.dest : "exit";
      return {
        ...state,
        toast: null,
        activeDest: dest,
        overlay: { kind: "exit", route },
        log: appended(state, frame),
      };
    }
    case "temperature":
    case "occupancy":
    case "weather":
      return { ...state, toast: null, log: appended(state, frame) };
    default:
      return pushDiagnostic(state, `unexpected frame kind ${String(frame.kind)}`);
  }
}

// Arrow keys map to one axis-aligned stride of the virtual user.
export function keyToMove(key: string): { dx: number; dy: number } | null {
  switch (key) {
    case "ArrowUp":
      return { dx: 0, dy: STEP_LENGTH };
    case "ArrowDown":
      return { dx: 0, dy: -STEP_LENGTH };
    case "ArrowLeft":
      return { dx: -STEP_LENGTH, dy: 0 };
    case "ArrowRight":
      return { dx: STEP_LENGTH, dy: 0 };
    default:
      return null;
  }
}

// Keeps at most one sim.move outstanding; a key held down collapses into
// the latest queued stride, sent once the in-flight response settles.
export class MoveCoalescer {
  private outstanding = false;
  private queued: { dx: number; dy: number } | null = null;

  constructor(private readonly send: (dx: number, dy: number) => void) {}

  press(dx: number, dy: number): void {
    if (this.outstanding) {
      this.queued = { dx, dy };
      return;
    }
    this.outstanding = true;
    this.send(dx, dy);
  }

  settle(): void {
    if (this.queued !== null) {
      const { dx, dy } = this.queued;
      this.queued = null;
      this.send(dx, dy);
      return;
    }
    this.outstanding = false;
  }

  get busy(): boolean {
    return this.outstanding;
  }
}
