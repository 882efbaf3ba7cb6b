// Canvas renderer: meters to pixels at one uniform scale, y axis up.

import type { ViewState } from "./state.js";

const PADDING = 28;

export function drawPlan(canvas: HTMLCanvasElement, state: ViewState): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const plan = state.plan;
  if (!plan) {
    ctx.fillStyle = "#777";
    ctx.font = "14px sans-serif";
    ctx.fillText("waiting for floor plan…", 16, 24);
    return;
  }

  const { w, h } = plan.bounds;
  const scale = Math.min(
    (canvas.width - 2 * PADDING) / w,
    (canvas.height - 2 * PADDING) / h,
  );
  const px = (x: number) => PADDING + x * scale;
  const py = (y: number) => canvas.height - PADDING - y * scale;

  ctx.strokeStyle = "#555";
  ctx.lineWidth = 1.5;
  ctx.strokeRect(px(0), py(h), w * scale, h * scale);

  if (state.overlay.kind !== "none" && state.overlay.route.length > 0) {
    ctx.strokeStyle = state.overlay.kind === "exit" ? "#d33" : "#28c";
    ctx.lineWidth = 3;
    ctx.setLineDash([8, 6]);
    ctx.beginPath();
    const start = state.truePose ?? { x: state.overlay.route[0][0], y: state.overlay.route[0][1] };
    ctx.moveTo(px(start.x), py(start.y));
    for (const [x, y] of state.overlay.route) ctx.lineTo(px(x), py(y));
    ctx.stroke();
    ctx.setLineDash([]);
  }

  ctx.font = "12px sans-serif";
  for (const beacon of plan.beacons) {
    ctx.fillStyle = "#3a6";
    ctx.beginPath();
    ctx.arc(px(beacon.x), py(beacon.y), 6, 0, Math.PI * 2);
    ctx.fill();
    ctx.fillStyle = "#222";
    ctx.fillText(String(beacon.id), px(beacon.x) + 8, py(beacon.y) - 8);
  }

  for (const poi of plan.pois) {
    ctx.fillStyle = "#a40";
    ctx.beginPath();
    ctx.rect(px(poi.x) - 4, py(poi.y) - 4, 8, 8);
    ctx.fill();
    ctx.fillStyle = "#222";
    ctx.fillText(poi.key, px(poi.x) + 7, py(poi.y) + 4);
  }

  // estimate and true pose stay visually distinct; the connecting line
  // makes the reported error directly visible
  if (state.truePose && state.estimate) {
    ctx.strokeStyle = "#bbb";
    ctx.beginPath();
    ctx.moveTo(px(state.truePose.x), py(state.truePose.y));
    ctx.lineTo(px(state.estimate.x), py(state.estimate.y));
    ctx.stroke();
  }

  if (state.estimate) {
    ctx.strokeStyle = "#c2b";
    ctx.lineWidth = 2.5;
    const ex = px(state.estimate.x);
    const ey = py(state.estimate.y);
    ctx.beginPath();
    ctx.moveTo(ex - 7, ey - 7);
    ctx.lineTo(ex + 7, ey + 7);
    ctx.moveTo(ex - 7, ey + 7);
    ctx.lineTo(ex + 7, ey - 7);
    ctx.stroke();
  }

  if (state.truePose) {
    const { x, y, heading } = state.truePose;
    const cx = px(x);
    const cy = py(y);
    ctx.fillStyle = "#16c";
    ctx.beginPath();
    // heading is counter-clockwise in meters, y-flip negates the angle
    const a = -heading;
    ctx.moveTo(cx + 11 * Math.cos(a), cy + 11 * Math.sin(a));
    ctx.lineTo(cx + 9 * Math.cos(a + 2.5), cy + 9 * Math.sin(a + 2.5));
    ctx.lineTo(cx + 9 * Math.cos(a - 2.5), cy + 9 * Math.sin(a - 2.5));
    ctx.closePath();
    ctx.fill();
  }
}
