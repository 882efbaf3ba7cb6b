import { drawPlan } from "./canvas.js";
import { hasLabel, isRTL, t } from "./i18n.js";
import {
  emergencyFrame,
  locateFrame,
  moveFrame,
  navigateFrame,
  occupancyFrame,
  parseFrame,
  stateFrame,
  temperatureFrame,
  weatherFrame,
  type Lang,
} from "./protocol.js";
import {
  MoveCoalescer,
  applyServerFrame,
  beginNavigation,
  initialState,
  keyToMove,
  pushDiagnostic,
  setConnection,
  setLanguage,
  type ViewState,
} from "./state.js";
import { SessionSocket } from "./ws.js";

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
};

let state: ViewState = initialState();
let socket: SessionSocket | null = null;

const canvas = $<HTMLCanvasElement>("plan");
const els = {
  address: $<HTMLInputElement>("address"),
  connect: $<HTMLButtonElement>("connect"),
  status: $<HTMLSpanElement>("status"),
  lang: $<HTMLSelectElement>("lang"),
  dest: $<HTMLSelectElement>("dest"),
  room: $<HTMLSelectElement>("room"),
  locate: $<HTMLButtonElement>("locate"),
  navigate: $<HTMLButtonElement>("navigate"),
  emergency: $<HTMLButtonElement>("emergency"),
  temperature: $<HTMLButtonElement>("temperature"),
  occupancy: $<HTMLButtonElement>("occupancy"),
  weather: $<HTMLButtonElement>("weather"),
  bars: $<HTMLDivElement>("bars"),
  log: $<HTMLDivElement>("log"),
  diagnostics: $<HTMLDivElement>("diagnostics"),
  toast: $<HTMLDivElement>("toast"),
  hint: $<HTMLDivElement>("hint"),
};

const coalescer = new MoveCoalescer((dx, dy) => {
  socket?.send(moveFrame(dx, dy));
});

function update(next: ViewState): void {
  state = next;
  render();
}

function labels(): void {
  for (const key of ["locate", "navigate", "emergency", "temperature", "occupancy", "weather"]) {
    if (hasLabel(state.lang, key)) $(key).textContent = t(state.lang, key);
  }
  els.connect.textContent = t(state.lang, "connect");
  els.hint.textContent = state.steeringEnabled
    ? t(state.lang, "steeringHint")
    : t(state.lang, "steeringDisabled");
}

function render(): void {
  const statusKey =
    state.connection === "open" ? "connected" : state.connection === "closed" ? "disconnected" : "connecting";
  els.status.textContent = t(state.lang, statusKey);
  els.status.className = `status ${state.connection}`;
  labels();

  if (state.plan && els.dest.options.length === 0) {
    for (const poi of state.plan.pois) {
      const name = state.lang === "ar" ? poi.name_ar : poi.name_en;
      els.dest.add(new Option(`${name} (${poi.key})`, poi.key));
      els.room.add(new Option(`${name} (${poi.key})`, poi.key));
    }
  }

  els.bars.replaceChildren();
  const ids = Object.keys(state.rssi).sort();
  if (ids.length === 0) {
    els.bars.textContent = t(state.lang, "noSignal");
  }
  for (const id of ids) {
    const value = state.rssi[id];
    const row = document.createElement("div");
    row.className = "bar-row";
    const label = document.createElement("span");
    label.textContent = `${id}: ${value.toFixed(1)} dBm`;
    const bar = document.createElement("div");
    bar.className = "bar";
    const fill = document.createElement("div");
    fill.className = "bar-fill" + (value < -90 ? " weak" : "");
    const fraction = Math.max(0, Math.min(1, (value + 100) / 60));
    fill.style.width = `${Math.round(fraction * 100)}%`;
    bar.appendChild(fill);
    row.append(label, bar);
    els.bars.appendChild(row);
  }

  els.log.replaceChildren();
  for (const entry of state.log.slice(-60)) {
    const line = document.createElement("div");
    line.textContent = entry.text;
    line.dir = isRTL(entry.lang) ? "rtl" : "ltr";
    line.className = `log-line ${entry.kind}`;
    els.log.appendChild(line);
  }
  els.log.scrollTop = els.log.scrollHeight;

  els.diagnostics.replaceChildren();
  for (const note of state.diagnostics.slice(-10)) {
    const line = document.createElement("div");
    line.textContent = note;
    els.diagnostics.appendChild(line);
  }

  els.toast.textContent = state.toast ?? "";
  els.toast.style.display = state.toast ? "block" : "none";

  drawPlan(canvas, state);
}

function onFrame(text: string): void {
  const frame = parseFrame(text);
  if (frame === null) {
    update(pushDiagnostic(state, `unparseable frame: ${text.slice(0, 120)}`));
    return;
  }
  if (frame.kind === "sim.move") {
    coalescer.settle();
  }
  update(applyServerFrame(state, frame));
}

function connect(): void {
  socket?.close();
  socket = new SessionSocket(els.address.value, {
    onFrame,
    onStatus: (status) => {
      update(setConnection(state, status));
      if (status === "open") socket?.send(stateFrame());
    },
  });
  socket.open();
}

els.connect.addEventListener("click", connect);

els.lang.addEventListener("change", () => {
  update(setLanguage(state, els.lang.value as Lang));
});

window.addEventListener("keydown", (event) => {
  if (!state.steeringEnabled) return;
  const move = keyToMove(event.key);
  if (!move) return;
  event.preventDefault();
  coalescer.press(move.dx, move.dy);
});

els.locate.addEventListener("click", () => {
  socket?.send(locateFrame(state.lang, state.rssi));
});

els.navigate.addEventListener("click", () => {
  const dest = els.dest.value;
  if (!dest) return;
  update(beginNavigation(state, dest));
  socket?.send(navigateFrame(state.lang, dest, state.rssi));
});

els.emergency.addEventListener("click", () => {
  socket?.send(emergencyFrame(state.lang, state.rssi));
});

els.temperature.addEventListener("click", () => {
  if (els.room.value) socket?.send(temperatureFrame(state.lang, els.room.value));
});

els.occupancy.addEventListener("click", () => {
  if (els.room.value) socket?.send(occupancyFrame(state.lang, els.room.value));
});

els.weather.addEventListener("click", () => {
  socket?.send(weatherFrame(state.lang));
});

render();
connect();
