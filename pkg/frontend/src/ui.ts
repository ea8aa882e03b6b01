/**
 * Plain-textarea workbench UI.  Rendering and insertion only; every
 * state change flows through the session protocol.
 */

import { BufferView, byteLength } from "./buffer.js";
import { ProtocolClient, type Transport } from "./protocol.js";
import { Workbench } from "./workbench.js";

class BrowserSocketTransport implements Transport {
  private messageCb: ((line: string) => void) | null = null;
  private closeCb: (() => void) | null = null;

  constructor(private socket: WebSocket) {
    socket.onmessage = (ev) => this.messageCb?.(String(ev.data));
    socket.onclose = () => this.closeCb?.();
  }

  send(line: string): void {
    this.socket.send(line);
  }

  onMessage(cb: (line: string) => void): void {
    this.messageCb = cb;
  }

  onClose(cb: () => void): void {
    this.closeCb = cb;
  }

  close(): void {
    this.socket.close();
  }
}

function connect(addr: string): Promise<Transport> {
  return new Promise((resolve, reject) => {
    const socket = new WebSocket(addr);
    socket.onopen = () => resolve(new BrowserSocketTransport(socket));
    socket.onerror = () => reject(new Error(`cannot reach ${addr}`));
  });
}

function renderGoal(view: BufferView): string {
  if (view.goal === null) return "(no goal)";
  const g = view.goal;
  const vars = g.vars.map(([n, ty]) => `${n} : ${ty}`).join("\n");
  const hyps = g.hyps.map(([n, p]) => `${n} : ${p}`).join("\n");
  return [vars, hyps, "----------", g.conclusion]
    .filter((s) => s.length > 0)
    .join("\n");
}

function renderDiagnostics(view: BufferView): string {
  if (view.diagnostics.length === 0) return "no diagnostics";
  return view.diagnostics
    .map((d) => `[${d.start}, ${d.end}) ${d.message}`)
    .join("\n");
}

export async function mount(root: HTMLElement, addr: string): Promise<void> {
  const editor = document.createElement("textarea");
  editor.rows = 30;
  editor.cols = 100;
  const goalPanel = document.createElement("pre");
  const diagPanel = document.createElement("pre");
  const banner = document.createElement("div");
  const status = document.createElement("div");
  const hammerBtn = document.createElement("button");
  hammerBtn.textContent = "hammer at cursor";
  const checkBtn = document.createElement("button");
  checkBtn.textContent = "check";
  root.append(banner, editor, hammerBtn, checkBtn, status, goalPanel, diagPanel);

  const transport = await connect(addr);
  const client = new ProtocolClient(transport);
  const bench = new Workbench(client);
  const view = bench.view;

  client.onClose(() => {
    banner.textContent = "connection lost; buffer is read-only";
    editor.readOnly = true;
    refresh();
  });

  function refresh(): void {
    if (editor.value !== view.text) editor.value = view.text;
    goalPanel.textContent = renderGoal(view);
    diagPanel.textContent = renderDiagnostics(view);
    status.textContent = view.pendingJob
      ? `hammer job ${view.pendingJob} running`
      : "";
  }

  async function syncFromTextarea(): Promise<void> {
    // whole-document replacement keeps the textarea logic trivial
    const old = byteLength(view.text);
    await bench.syncEdit(0, old, editor.value);
    await bench.checkPrefix();
    refresh();
  }

  editor.addEventListener("change", () => {
    void syncFromTextarea();
  });

  editor.addEventListener("click", () => {
    view.cursor = byteLength(editor.value.slice(0, editor.selectionStart));
    void bench.showGoalAtCursor().then(refresh, refresh);
  });

  checkBtn.addEventListener("click", () => {
    void bench.checkPrefix().then(refresh);
  });

  hammerBtn.addEventListener("click", () => {
    void (async () => {
      refresh();
      const result = await bench.runHammerAtCursor();
      if (result.state === "Done") {
        await bench.acceptAby(result);
      } else if (result.state === "Failed") {
        status.textContent = `hammer failed: ${result.reason}`;
      }
      refresh();
    })();
  });

  await bench.open(editor.value);
  refresh();
}
