import { describe, expect, it } from "vitest";

import { BufferView, byteLength, spliceBytes } from "../src/buffer.js";
import {
  DisconnectedError,
  ProtocolClient,
  ProtocolError,
  type Transport,
} from "../src/protocol.js";
import { Workbench } from "../src/workbench.js";

/** In-memory transport driven by a scripted responder. */
class FakeTransport implements Transport {
  sent: { id: number; method: string; params: Record<string, unknown> }[] = [];
  private messageCb: ((line: string) => void) | null = null;
  private closeCb: (() => void) | null = null;
  closed = false;

  constructor(
    private responder: (req: {
      id: number;
      method: string;
      params: Record<string, unknown>;
    }) => unknown | { __error: { code: string; message: string } } | null,
  ) {}

  send(line: string): void {
    const req = JSON.parse(line);
    this.sent.push(req);
    const result = this.responder(req);
    if (result === null) return; // deliberately never answered
    const payload =
      typeof result === "object" && result !== null && "__error" in result
        ? { id: req.id, error: (result as { __error: unknown }).__error }
        : { id: req.id, result };
    queueMicrotask(() => this.messageCb?.(JSON.stringify(payload)));
  }

  onMessage(cb: (line: string) => void): void {
    this.messageCb = cb;
  }

  onClose(cb: () => void): void {
    this.closeCb = cb;
  }

  close(): void {
    this.closed = true;
    this.closeCb?.();
  }

  /** Simulate the server side dropping the connection. */
  dropConnection(): void {
    this.closeCb?.();
  }
}

const SCRIPT =
  "Theorem t : forall A:prop, A -> A.\nlet A. assume H. exact H.\nQed.\n";

function scriptedServer() {
  let revision = 0;
  return (req: { method: string; params: Record<string, unknown> }): unknown => {
    switch (req.method) {
      case "open":
        return { sessionId: "s1" };
      case "edit":
        revision += 1;
        return { revision };
      case "checkPrefix":
        return { revision, checkedItems: 1, diagnostics: [] };
      case "goalAt":
        return {
          theorem: "t",
          vars: [["A", "prop"]],
          hyps: [["H", "A"]],
          conclusion: "A",
          tacticStart: 42,
        };
      case "hammerAt":
        return { jobId: "j1" };
      case "poll":
        return {
          state: "Done",
          abyText: "aby H.",
          usedAxioms: ["H"],
          replaceSpan: [52, 61],
        };
      case "close":
        return { closed: true };
      default:
        return { __error: { code: "BadRequest", message: req.method } };
    }
  };
}

describe("byte splicing", () => {
  it("replaces byte ranges, not string indices", () => {
    const text = "héllo wörld";
    const bytes = byteLength("héllo ");
    expect(spliceBytes(text, bytes, byteLength(text), "x")).toBe("héllo x");
  });

  it("rejects out-of-range spans", () => {
    expect(() => spliceBytes("abc", 2, 99, "x")).toThrow(RangeError);
  });
});

describe("protocol client", () => {
  it("correlates responses by id", async () => {
    const t = new FakeTransport(scriptedServer());
    const c = new ProtocolClient(t);
    const [a, b] = await Promise.all([c.open(SCRIPT), c.goalAt("s1", 42)]);
    expect(a.sessionId).toBe("s1");
    expect(b.conclusion).toBe("A");
    expect(t.sent.map((r) => r.id)).toEqual([1, 2]);
  });

  it("surfaces protocol errors with their code", async () => {
    const t = new FakeTransport(() => ({
      __error: { code: "UnknownSession", message: "s9" },
    }));
    const c = new ProtocolClient(t);
    await expect(c.checkPrefix("s9")).rejects.toMatchObject({
      code: "UnknownSession",
    });
  });

  it("rejects in-flight requests on disconnect", async () => {
    const t = new FakeTransport(() => null);
    const c = new ProtocolClient(t);
    const p = c.checkPrefix("s1");
    t.dropConnection();
    await expect(p).rejects.toBeInstanceOf(DisconnectedError);
    await expect(c.open("x")).rejects.toBeInstanceOf(DisconnectedError);
  });
});

describe("buffer view", () => {
  it("drops stale goal responses", () => {
    const v = new BufferView();
    v.revision = 3;
    const goal = {
      theorem: "t",
      vars: [] as [string, string][],
      hyps: [] as [string, string][],
      conclusion: "A",
      tacticStart: 0,
    };
    expect(v.showGoal(goal, 2)).toBe(false);
    expect(v.goal).toBeNull();
    expect(v.showGoal(goal, 3)).toBe(true);
    expect(v.goal).toBe(goal);
  });

  it("clears the goal panel when the revision moves on", () => {
    const v = new BufferView();
    v.showGoal(
      { theorem: "t", vars: [], hyps: [], conclusion: "A", tacticStart: 0 },
      0,
    );
    v.setRevision(1);
    expect(v.goal).toBeNull();
  });

  it("refuses edits while read-only", () => {
    const v = new BufferView();
    v.text = "abc";
    v.markDisconnected();
    expect(() => v.applyEdit(0, 1, "x")).toThrow();
    expect(v.text).toBe("abc");
  });
});

describe("workbench trace replay", () => {
  it("accepts an aby result via the documented edit path only", async () => {
    const t = new FakeTransport(scriptedServer());
    const bench = new Workbench(new ProtocolClient(t));
    await bench.open(SCRIPT);
    bench.view.cursor = 52;
    const result = await bench.runHammerAtCursor();
    expect(result.state).toBe("Done");
    await bench.acceptAby(result);
    const expected = spliceBytes(SCRIPT, 52, 61, "aby H.");
    expect(bench.view.text).toBe(expected);
    expect(bench.view.diagnostics).toEqual([]);
    expect(bench.view.pendingJob).toBeNull();
    // every mutation went through documented methods
    const methods = t.sent.map((r) => r.method);
    expect(methods).toEqual([
      "open",
      "hammerAt",
      "poll",
      "edit",
      "checkPrefix",
    ]);
  });

  it("does not insert anything when the connection drops mid-job", async () => {
    const t = new FakeTransport((req) => {
      if (req.method === "open") return { sessionId: "s1" };
      if (req.method === "hammerAt") return { jobId: "j1" };
      if (req.method === "poll") return null; // job never finishes
      return { __error: { code: "BadRequest", message: req.method } };
    });
    const bench = new Workbench(new ProtocolClient(t));
    await bench.open(SCRIPT);
    bench.view.cursor = 52;
    const pending = bench.runHammerAtCursor();
    while (bench.view.pendingJob === null) {
      await new Promise((r) => setTimeout(r, 1));
    }
    t.dropConnection();
    const result = await pending;
    expect(result.state).toBe("Failed");
    expect(bench.view.text).toBe(SCRIPT);
    expect(bench.view.pendingJob).toBeNull();
    expect(bench.view.readOnly).toBe(true);
  });

  it("hammer failure leaves the buffer untouched", async () => {
    const t = new FakeTransport((req) => {
      if (req.method === "open") return { sessionId: "s1" };
      if (req.method === "hammerAt") return { jobId: "j1" };
      if (req.method === "poll")
        return { state: "Failed", reason: "ScheduleExhausted(mock:GaveUp)" };
      return { __error: { code: "BadRequest", message: req.method } };
    });
    const bench = new Workbench(new ProtocolClient(t));
    await bench.open(SCRIPT);
    const result = await bench.runHammerAtCursor();
    expect(result.state).toBe("Failed");
    expect(await bench.acceptAby(result)).toBe(false);
    expect(bench.view.text).toBe(SCRIPT);
  });
});
