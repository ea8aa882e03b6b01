/**
 * Line-oriented JSON protocol client.
 *
 * Every request is {"id": n, "method": m, "params": {...}} and every
 * response carries the same id with either a "result" or an "error"
 * object.  The transport is pluggable so tests can replay recorded
 * traces without a network.
 */

export interface Transport {
  send(line: string): void;
  onMessage(cb: (line: string) => void): void;
  onClose(cb: () => void): void;
  close(): void;
}

export interface Diagnostic {
  start: number;
  end: number;
  message: string;
}

export interface GoalView {
  theorem: string;
  vars: [string, string][];
  hyps: [string, string][];
  conclusion: string;
  tacticStart: number;
}

export interface CheckResult {
  revision: number;
  checkedItems: number;
  diagnostics: Diagnostic[];
}

export type PollResult =
  | { state: "Running" }
  | {
      state: "Done";
      abyText: string;
      usedAxioms: string[];
      replaceSpan: [number, number];
    }
  | { state: "Failed"; reason: string };

export class ProtocolError extends Error {
  constructor(
    public code: string,
    message: string,
  ) {
    super(`${code}: ${message}`);
  }
}

export class DisconnectedError extends Error {
  constructor() {
    super("connection lost");
  }
}

interface Pending {
  resolve: (value: unknown) => void;
  reject: (err: Error) => void;
}

export class ProtocolClient {
  private nextId = 1;
  private pending = new Map<number, Pending>();
  private closeHandlers: (() => void)[] = [];
  closed = false;

  constructor(private transport: Transport) {
    transport.onMessage((line) => this.dispatch(line));
    transport.onClose(() => this.handleClose());
  }

  onClose(cb: () => void): void {
    this.closeHandlers.push(cb);
  }

  close(): void {
    this.transport.close();
  }

  private handleClose(): void {
    if (this.closed) return;
    this.closed = true;
    for (const p of this.pending.values()) {
      p.reject(new DisconnectedError());
    }
    this.pending.clear();
    for (const cb of this.closeHandlers) cb();
  }

  private dispatch(line: string): void {
    let msg: { id?: number; result?: unknown; error?: { code: string; message: string } };
    try {
      msg = JSON.parse(line);
    } catch {
      return; // not addressed to any request
    }
    if (typeof msg.id !== "number") return;
    const p = this.pending.get(msg.id);
    if (!p) return; // stale or duplicate response
    this.pending.delete(msg.id);
    if (msg.error) {
      p.reject(new ProtocolError(msg.error.code, msg.error.message));
    } else {
      p.resolve(msg.result);
    }
  }

  request<T>(method: string, params: Record<string, unknown>): Promise<T> {
    if (this.closed) {
      return Promise.reject(new DisconnectedError());
    }
    const id = this.nextId++;
    const line = JSON.stringify({ id, method, params });
    return new Promise<T>((resolve, reject) => {
      this.pending.set(id, { resolve: resolve as (v: unknown) => void, reject });
      this.transport.send(line);
    });
  }

  open(text: string): Promise<{ sessionId: string }> {
    return this.request("open", { text });
  }

  edit(
    sessionId: string,
    start: number,
    end: number,
    newText: string,
  ): Promise<{ revision: number }> {
    return this.request("edit", { sessionId, start, end, newText });
  }

  checkPrefix(sessionId: string, offset?: number): Promise<CheckResult> {
    const params: Record<string, unknown> = { sessionId };
    if (offset !== undefined) params.offset = offset;
    return this.request("checkPrefix", params);
  }

  goalAt(sessionId: string, offset: number): Promise<GoalView> {
    return this.request("goalAt", { sessionId, offset });
  }

  hammerAt(
    sessionId: string,
    offset: number,
    mode: "bushy" | "chainy" = "chainy",
  ): Promise<{ jobId: string }> {
    return this.request("hammerAt", { sessionId, offset, mode });
  }

  poll(jobId: string): Promise<PollResult> {
    return this.request("poll", { jobId });
  }

  closeSession(sessionId: string): Promise<{ closed: boolean }> {
    return this.request("close", { sessionId });
  }
}
