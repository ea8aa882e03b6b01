/**
 * Client-side view of one editing session.
 *
 * All protocol offsets are byte offsets into the UTF-8 encoding of the
 * text, so edits go through an encode/splice/decode cycle rather than
 * JavaScript string indices.
 */

import type { Diagnostic, GoalView } from "./protocol.js";

const encoder = new TextEncoder();
const decoder = new TextDecoder();

export function spliceBytes(
  text: string,
  start: number,
  end: number,
  newText: string,
): string {
  const bytes = encoder.encode(text);
  if (start < 0 || end < start || end > bytes.length) {
    throw new RangeError(`bad byte range [${start}, ${end})`);
  }
  const insert = encoder.encode(newText);
  const out = new Uint8Array(bytes.length - (end - start) + insert.length);
  out.set(bytes.subarray(0, start), 0);
  out.set(insert, start);
  out.set(bytes.subarray(end), start + insert.length);
  return decoder.decode(out);
}

export function byteLength(text: string): number {
  return encoder.encode(text).length;
}

export class BufferView {
  text = "";
  cursor = 0; // byte offset
  revision = 0;
  diagnostics: Diagnostic[] = [];
  goal: GoalView | null = null;
  pendingJob: string | null = null;
  readOnly = false;

  /** revision the displayed goal was computed against */
  private goalRevision = -1;

  applyEdit(start: number, end: number, newText: string): void {
    if (this.readOnly) {
      throw new Error("buffer is read-only (disconnected)");
    }
    this.text = spliceBytes(this.text, start, end, newText);
  }

  /** Record the server-assigned revision after a synced edit. */
  setRevision(revision: number): void {
    this.revision = revision;
    if (this.goalRevision !== revision) {
      this.goal = null;
    }
  }

  /**
   * Install a goal response.  `requestRevision` is the buffer revision at
   * the time the request was sent; stale responses are dropped so the
   * panel always reflects the current revision.
   */
  showGoal(goal: GoalView, requestRevision: number): boolean {
    if (requestRevision !== this.revision) {
      return false;
    }
    this.goal = goal;
    this.goalRevision = requestRevision;
    return true;
  }

  setDiagnostics(diags: Diagnostic[]): void {
    this.diagnostics = diags;
  }

  markDisconnected(): void {
    this.pendingJob = null;
    this.readOnly = true;
  }

  markReconnected(): void {
    this.readOnly = false;
  }
}
