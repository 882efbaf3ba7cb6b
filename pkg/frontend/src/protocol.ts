// Frame grammar shared with the control-unit service: one JSON object per
// WebSocket message, one response per request.

export type Lang = "en" | "ar";

export interface PlanPoi {
  key: string;
  name_en: string;
  name_ar: string;
  x: number;
  y: number;
}

export interface PlanDoc {
  bounds: { w: number; h: number };
  beacons: { id: number; x: number; y: number }[];
  pois: PlanPoi[];
  routes: Record<string, number[][]>;
  exit_poi: string;
}

export type RssiMap = Record<string, number>;

export interface ServerFrame {
  v: number;
  status: "ok" | "error";
  kind: string | null;
  message: string;
  data: Record<string, unknown>;
  error_code?: string;
}

// Virtual-user stride per arrow key press, in meters.
export const STEP_LENGTH = 2;

export function parseFrame(text: string): ServerFrame | null {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch {
    return null;
  }
  if (typeof raw !== "object" || raw === null) return null;
  const frame = raw as Record<string, unknown>;
  if (frame.v !== 1) return null;
  if (frame.status !== "ok" && frame.status !== "error") return null;
  return {
    v: 1,
    status: frame.status,
    kind: typeof frame.kind === "string" ? frame.kind : null,
    message: typeof frame.message === "string" ? frame.message : "",
    data:
      typeof frame.data === "object" && frame.data !== null
        ? (frame.data as Record<string, unknown>)
        : {},
    error_code: typeof frame.error_code === "string" ? frame.error_code : undefined,
  };
}

function frame(body: Record<string, unknown>): string {
  return JSON.stringify({ v: 1, ...body });
}

export function stateFrame(): string {
  return frame({ type: "sim.state" });
}

export function moveFrame(dx: number, dy: number): string {
  return frame({ type: "sim.move", move: { dx, dy } });
}

export function locateFrame(lang: Lang, rssi: RssiMap): string {
  return frame({ type: "locate", lang, rssi });
}

export function navigateFrame(lang: Lang, dest: string, rssi: RssiMap): string {
  return frame({ type: "navigate", lang, dest, rssi });
}

export function emergencyFrame(lang: Lang, rssi: RssiMap): string {
  return frame({ type: "emergency", lang, rssi });
}

export function temperatureFrame(lang: Lang, room: string): string {
  return frame({ type: "temperature", lang, room });
}

export function occupancyFrame(lang: Lang, room: string): string {
  return frame({ type: "occupancy", lang, room });
}

export function weatherFrame(lang: Lang): string {
  return frame({ type: "weather", lang });
}
