// WebSocket session with automatic reconnect.

export interface SessionHooks {
  onFrame: (text: string) => void;
  onStatus: (status: "connecting" | "open" | "closed") => void;
}

const RETRY_MS = 1500;

export class SessionSocket {
  private socket: WebSocket | null = null;
  private timer: ReturnType<typeof setTimeout> | null = null;
  private closed = false;

  constructor(private readonly url: string, private readonly hooks: SessionHooks) {}

  open(): void {
    this.closed = false;
    this.connect();
  }

  private connect(): void {
    this.hooks.onStatus("connecting");
    const socket = new WebSocket(this.url);
    this.socket = socket;
    socket.onopen = () => this.hooks.onStatus("open");
    socket.onmessage = (event) => this.hooks.onFrame(String(event.data));
    socket.onclose = () => {
      this.hooks.onStatus("closed");
      this.scheduleRetry();
    };
    socket.onerror = () => {
      socket.close();
    };
  }

  private scheduleRetry(): void {
    if (this.closed || this.timer !== null) return;
    this.timer = setTimeout(() => {
      this.timer = null;
      if (!this.closed) this.connect();
    }, RETRY_MS);
  }

  send(line: string): boolean {
    if (this.socket !== null && this.socket.readyState === WebSocket.OPEN) {
      this.socket.send(line);
      return true;
    }
    return false;
  }

  close(): void {
    this.closed = true;
    if (this.timer !== null) clearTimeout(this.timer);
    this.socket?.close();
  }
}
