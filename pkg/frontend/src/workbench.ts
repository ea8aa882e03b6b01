/**
 * Orchestration between the protocol client and the buffer view.  All
 * proof state lives on the server; this class only sends documented
 * protocol messages and applies returned edits.
 */

import { BufferView } from "./buffer.js";
import {
  DisconnectedError,
  ProtocolClient,
  type PollResult,
} from "./protocol.js";

function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

export class Workbench {
  readonly view: BufferView;
  private sessionId: string | null = null;

  constructor(private client: ProtocolClient, view?: BufferView) {
    this.view = view ?? new BufferView();
    client.onClose(() => this.view.markDisconnected());
  }

  get session(): string {
    if (this.sessionId === null) throw new Error("no open session");
    return this.sessionId;
  }

  async open(text: string): Promise<void> {
    const { sessionId } = await this.client.open(text);
    this.sessionId = sessionId;
    this.view.text = text;
    this.view.revision = 0;
  }

  /** Apply an edit locally and mirror it to the server. */
  async syncEdit(start: number, end: number, newText: string): Promise<void> {
    this.view.applyEdit(start, end, newText);
    const { revision } = await this.client.edit(
      this.session,
      start,
      end,
      newText,
    );
    this.view.setRevision(revision);
  }

  async checkPrefix(): Promise<void> {
    const out = await this.client.checkPrefix(this.session);
    this.view.setDiagnostics(out.diagnostics);
  }

  async showGoalAtCursor(): Promise<boolean> {
    const requestRevision = this.view.revision;
    const goal = await this.client.goalAt(this.session, this.view.cursor);
    return this.view.showGoal(goal, requestRevision);
  }

  async invokeHammer(mode: "bushy" | "chainy" = "chainy"): Promise<string> {
    const { jobId } = await this.client.hammerAt(
      this.session,
      this.view.cursor,
      mode,
    );
    this.view.pendingJob = jobId;
    return jobId;
  }

  /**
   * Poll a hammer job to completion.  Disconnection clears the pending
   * indicator (via the client close handler) and surfaces as a rejection,
   * so nothing is ever inserted for a job that outlived the connection.
   */
  async awaitHammer(jobId: string, intervalMs = 50): Promise<PollResult> {
    for (;;) {
      const out = await this.client.poll(jobId);
      if (out.state !== "Running") {
        if (this.view.pendingJob === jobId) this.view.pendingJob = null;
        return out;
      }
      await sleep(intervalMs);
    }
  }

  /**
   * Insert a finished job's `aby` call into the buffer and re-check.
   * The insertion happens client-side through the ordinary edit path.
   */
  async acceptAby(result: PollResult): Promise<boolean> {
    if (result.state !== "Done") {
      return false;
    }
    const [start, end] = result.replaceSpan;
    await this.syncEdit(start, end, result.abyText);
    await this.checkPrefix();
    return true;
  }

  async runHammerAtCursor(
    mode: "bushy" | "chainy" = "chainy",
  ): Promise<PollResult> {
    const jobId = await this.invokeHammer(mode);
    try {
      return await this.awaitHammer(jobId);
    } catch (err) {
      if (err instanceof DisconnectedError) {
        return { state: "Failed", reason: "connection lost" };
      }
      throw err;
    }
  }
}
