import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { SessionSocket } from "../src/ws.js";

// Scripted stand-in for the browser WebSocket.
class FakeWebSocket {
  static instances: FakeWebSocket[] = [];
  static OPEN = 1;
  onopen: (() => void) | null = null;
  onmessage: ((event: { data: string }) => void) | null = null;
  onclose: (() => void) | null = null;
  onerror: (() => void) | null = null;
  readyState = 0;
  sent: string[] = [];

  constructor(public url: string) {
    FakeWebSocket.instances.push(this);
  }

  send(data: string) {
    this.sent.push(data);
  }

  close() {
    this.readyState = 3;
    this.onclose?.();
  }

  acceptConnection() {
    this.readyState = FakeWebSocket.OPEN;
    this.onopen?.();
  }
}

describe("session socket", () => {
  beforeEach(() => {
    FakeWebSocket.instances = [];
    vi.useFakeTimers();
    vi.stubGlobal("WebSocket", FakeWebSocket);
  });

  afterEach(() => {
    vi.unstubAllGlobals();
    vi.useRealTimers();
  });

  it("reports status transitions and delivers frames", () => {
    const frames: string[] = [];
    const statuses: string[] = [];
    const session = new SessionSocket("ws://x/ws", {
      onFrame: (f) => frames.push(f),
      onStatus: (s) => statuses.push(s),
    });
    session.open();
    const socket = FakeWebSocket.instances[0];
    socket.acceptConnection();
    socket.onmessage?.({ data: '{"v":1}' });
    expect(statuses).toEqual(["connecting", "open"]);
    expect(frames).toEqual(['{"v":1}']);
    expect(session.send("hello")).toBe(true);
    expect(socket.sent).toEqual(["hello"]);
  });

  it("reconnects automatically after the service goes away", () => {
    const statuses: string[] = [];
    const session = new SessionSocket("ws://x/ws", {
      onFrame: () => undefined,
      onStatus: (s) => statuses.push(s),
    });
    session.open();
    const first = FakeWebSocket.instances[0];
    first.acceptConnection();
    first.close(); // service restart
    expect(statuses).toEqual(["connecting", "open", "closed"]);
    vi.advanceTimersByTime(2000);
    expect(FakeWebSocket.instances).toHaveLength(2);
    FakeWebSocket.instances[1].acceptConnection();
    expect(statuses).toEqual(["connecting", "open", "closed", "connecting", "open"]);
  });

  it("stops retrying once closed deliberately", () => {
    const session = new SessionSocket("ws://x/ws", {
      onFrame: () => undefined,
      onStatus: () => undefined,
    });
    session.open();
    session.close();
    vi.advanceTimersByTime(10000);
    expect(FakeWebSocket.instances).toHaveLength(1);
    expect(session.send("x")).toBe(false);
  });
});
