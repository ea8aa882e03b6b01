"""Interactive session service: incremental prefix checking, goal display,
and hammer-at-point over a line-delimited JSON protocol.

One mutator per session: edits are serialized under a lock and bump a
revision counter.  Hammer jobs run in worker threads against immutable text
snapshots; a job whose revision no longer matches the session is reported
as stale instead of delivering a result.
"""

from __future__ import annotations

import itertools
import json
import os
import socketserver
import sys
import tempfile
import threading
from dataclasses import dataclass, field
from typing import Optional

from .basis import bootstrap, classical_frontier
from .driver import ProverSpec, run_schedule
from .hammer import Candidate, aby_line, citations_from_result, gen_candidates
from .kernel import Context, DefEntry, ThmEntry, check_proof
from .script import (
    Definition, Development, ElaboratedTheorem, ScriptError, Span,
    check_script, elaborate_theorem, parse_script,
)
from .syntax import ScriptSyntaxError, term_str, type_str


class SessionError(Exception):
    code = "BadRequest"


class UnknownSession(SessionError):
    code = "UnknownSession"


class StaleRevision(SessionError):
    code = "StaleRevision"


class NoGoal(SessionError):
    code = "NoGoal"


class BeforeFrontier(SessionError):
    code = "BeforeFrontier"


class UnknownJob(SessionError):
    code = "UnknownJob"


@dataclass
class _CachedItem:
    src: str                   # exact source slice of the item
    sig_len_before: int
    item: object               # Definition | ElaboratedTheorem


@dataclass
class _Session:
    id: str
    text: str
    revision: int = 0
    sig: object = None                  # grows/truncates with the cache
    cache: list = field(default_factory=list)
    diagnostics: list = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)


@dataclass
class _Job:
    id: str
    session_id: str
    revision: int
    state: str = "Running"             # Running | Done | Failed
    aby_text: str = ""
    used_axioms: list = field(default_factory=list)
    replace_span: Optional[tuple[int, int]] = None
    reason: str = ""


class SessionManager:
    def __init__(self, specs: Optional[list[ProverSpec]] = None,
                 timeout: float = 10.0, jobs: Optional[int] = None):
        self.specs = specs or []
        self.timeout = timeout
        self.jobs = jobs
        self._sessions: dict[str, _Session] = {}
        self._jobs: dict[str, _Job] = {}
        self._counter = itertools.count(1)
        self._lock = threading.Lock()

    # -- session lifecycle ---------------------------------------------------

    def open(self, text: str) -> str:
        sid = f"s{next(self._counter)}"
        s = _Session(sid, text, sig=bootstrap())
        with self._lock:
            self._sessions[sid] = s
        return sid

    def close(self, sid: str) -> None:
        with self._lock:
            if sid not in self._sessions:
                raise UnknownSession(sid)
            del self._sessions[sid]

    def _get(self, sid: str) -> _Session:
        s = self._sessions.get(sid)
        if s is None:
            raise UnknownSession(sid)
        return s

    def edit(self, sid: str, start: int, end: int, new_text: str) -> dict:
        s = self._get(sid)
        with s.lock:
            data = s.text.encode("utf-8")
            if not (0 <= start <= end <= len(data)):
                raise SessionError(f"edit range {start}..{end} out of bounds")
            s.text = (data[:start] + new_text.encode("utf-8")
                      + data[end:]).decode("utf-8")
            s.revision += 1
            # items whose source is unchanged are reused on the next check;
            # everything from the first changed item on is re-elaborated
            return {"revision": s.revision}

    # -- checking --------------------------------------------------------------

    def check_prefix(self, sid: str, offset: Optional[int] = None) -> dict:
        s = self._get(sid)
        with s.lock:
            return self._check_locked(s, offset)

    def _check_locked(self, s: _Session, offset: Optional[int]) -> dict:
        data = s.text.encode("utf-8")
        limit = len(data) if offset is None else offset
        diagnostics = []
        try:
            items = parse_script(s.text)
        except ScriptSyntaxError as exc:
            return {"revision": s.revision, "checkedItems": 0,
                    "diagnostics": [{"start": exc.offset, "end": exc.offset + 1,
                                     "message": exc.msg}]}
        # reuse the cached prefix where item source slices are unchanged
        reuse = 0
        for i, it in enumerate(items):
            src = data[it.span.start:it.span.end].decode("utf-8")
            if i < len(s.cache) and s.cache[i].src == src:
                reuse += 1
            else:
                break
        if reuse < len(s.cache):
            s.sig.truncate(s.cache[reuse].sig_len_before)
            del s.cache[reuse:]
        checked = reuse
        for it in items[reuse:]:
            span = it.span
            if span.start >= limit:
                break
            src = data[span.start:span.end].decode("utf-8")
            sig_len = len(s.sig)
            try:
                if isinstance(it, Definition):
                    from .syntax import elab_term
                    from .kernel import typecheck
                    if it.ty is not None:
                        body = elab_term(s.sig, Context(), it.body, it.ty)
                        ty = it.ty
                    else:
                        body = elab_term(s.sig, Context(), it.body)
                        ty = typecheck(s.sig, Context(), body)
                    s.sig.add(DefEntry(it.name, ty, body))
                    s.cache.append(_CachedItem(src, sig_len, it))
                else:
                    th = elaborate_theorem(s.sig, it)
                    check_proof(s.sig, Context(), th.proof, th.prop)
                    s.sig.add(ThmEntry(th.name, th.prop, th.proof))
                    s.cache.append(_CachedItem(src, sig_len, th))
                checked += 1
            except Exception as exc:
                sp = getattr(exc, "span", None)
                start = sp.start if sp is not None else span.start
                end = sp.end if sp is not None else span.end
                diagnostics.append({"start": start, "end": end,
                                    "message": getattr(exc, "msg", str(exc))})
                s.sig.truncate(sig_len)
                break
        return {"revision": s.revision, "checkedItems": checked,
                "diagnostics": diagnostics}

    # -- goals ------------------------------------------------------------------

    def _record_at(self, s: _Session, offset: int):
        """Nearest tactic record at or before `offset` in its theorem."""
        best = None
        for ci in s.cache:
            th = ci.item
            if not isinstance(th, ElaboratedTheorem):
                continue
            if not (th.decl.span.start <= offset <= th.decl.span.end):
                continue
            for rec in th.records:
                if rec.kind == "bullet":
                    continue
                if rec.span.start <= offset and (
                        best is None or rec.span.start > best[1].span.start):
                    best = (th, rec)
        return best

    def goal_at(self, sid: str, offset: int) -> dict:
        s = self._get(sid)
        with s.lock:
            self._check_locked(s, None)
            found = self._record_at(s, offset)
            if found is None:
                raise NoGoal(f"no goal at byte {offset}")
            th, rec = found
            g = rec.goal
            names = [n for n, _ in g.ctx.vars]
            return {
                "theorem": th.name,
                "vars": [[n, type_str(t)] for n, t in g.ctx.vars],
                "hyps": [[h, term_str(g.ctx.hyp_prop(h), list(names))]
                         for h in (hh[0] for hh in g.ctx.hyps)],
                "conclusion": term_str(g.conclusion, list(names)),
                "tacticStart": rec.span.start,
            }

    # -- hammer ------------------------------------------------------------------

    def hammer_at(self, sid: str, offset: int, mode: str = "chainy") -> dict:
        s = self._get(sid)
        with s.lock:
            self._check_locked(s, None)
            found = self._record_at(s, offset)
            if found is None:
                raise NoGoal(f"no goal at byte {offset}")
            th, rec = found
            frontier = classical_frontier(s.sig)
            if th.sig_index <= frontier:
                raise BeforeFrontier(
                    f"{th.name} precedes the classical frontier")
            snapshot = s.text
            revision = s.revision
        jid = f"j{next(self._counter)}"
        job = _Job(jid, sid, revision)
        with self._lock:
            self._jobs[jid] = job
        t = threading.Thread(target=self._run_job,
                             args=(job, snapshot, offset, mode), daemon=True)
        t.start()
        return {"jobId": jid}

    def _run_job(self, job: _Job, text: str, offset: int, mode: str) -> None:
        try:
            dev = check_script(text, bootstrap())
            cands = gen_candidates(dev, mode)
            cand = None
            for c in cands:
                if c.span.start <= offset <= c.span.end:
                    if cand is None or c.span.start > cand.span.start:
                        cand = c
            if cand is None:
                job.state, job.reason = "Failed", "no candidate at offset"
                return
            if not self.specs:
                job.state, job.reason = "Failed", "no provers configured"
                return
            from .tptp import to_th0
            with tempfile.TemporaryDirectory() as d:
                path = os.path.join(d, f"{cand.problem_id}.p")
                with open(path, "w") as f:
                    f.write(to_th0(cand.bundle))
                results = run_schedule([path], self.specs, self.timeout,
                                       jobs=self.jobs)
            win = next((r for r in results if r.status == "Theorem"), None)
            if win is None:
                attempts = "; ".join(f"{r.prover}:{r.status}" for r in results)
                job.state = "Failed"
                job.reason = f"ScheduleExhausted({attempts})"
                return
            gs, hs = citations_from_result(cand, win)
            job.aby_text = aby_line(gs, hs)
            job.used_axioms = gs + hs
            job.replace_span = (cand.span.start, cand.span.end)
            job.state = "Done"
        except Exception as exc:
            job.state = "Failed"
            job.reason = f"{type(exc).__name__}: {exc}"

    def poll(self, jid: str) -> dict:
        job = self._jobs.get(jid)
        if job is None:
            raise UnknownJob(jid)
        if job.state == "Running":
            return {"state": "Running"}
        s = self._sessions.get(job.session_id)
        if s is not None and s.revision != job.revision:
            return {"state": "Failed", "reason": "stale revision"}
        if job.state == "Done":
            return {"state": "Done", "abyText": job.aby_text,
                    "usedAxioms": job.used_axioms,
                    "replaceSpan": list(job.replace_span)}
        return {"state": "Failed", "reason": job.reason}


# ---------------------------------------------------------------------------
# protocol dispatch

class Dispatcher:
    """Line-delimited JSON messages: {"id": n, "method": m, "params": {...}}
    answered by {"id": n, "result": {...}} or {"id": n, "error": {...}}."""

    def __init__(self, manager: SessionManager):
        self.m = manager

    def handle(self, msg: dict) -> dict:
        mid = msg.get("id")
        try:
            method = msg["method"]
            p = msg.get("params", {})
            if method == "open":
                result = {"sessionId": self.m.open(p["text"])}
            elif method == "edit":
                result = self.m.edit(p["sessionId"], p["start"], p["end"],
                                     p["newText"])
            elif method == "checkPrefix":
                result = self.m.check_prefix(p["sessionId"], p.get("offset"))
            elif method == "goalAt":
                result = self.m.goal_at(p["sessionId"], p["offset"])
            elif method == "hammerAt":
                result = self.m.hammer_at(p["sessionId"], p["offset"],
                                          p.get("mode", "chainy"))
            elif method == "poll":
                result = self.m.poll(p["jobId"])
            elif method == "close":
                self.m.close(p["sessionId"])
                result = {"closed": True}
            else:
                raise SessionError(f"unknown method {method!r}")
            return {"id": mid, "result": result}
        except SessionError as exc:
            return {"id": mid, "error": {"code": exc.code, "message": str(exc)}}
        except (KeyError, TypeError) as exc:
            return {"id": mid,
                    "error": {"code": "BadRequest", "message": repr(exc)}}

    def handle_line(self, line: str) -> str:
        try:
            msg = json.loads(line)
        except json.JSONDecodeError as exc:
            return json.dumps({"id": None, "error": {
                "code": "BadRequest", "message": f"bad JSON: {exc}"}})
        return json.dumps(self.handle(msg))


def serve_stdio(manager: SessionManager) -> None:
    d = Dispatcher(manager)
    for line in sys.stdin:
        line = line.strip()
        if not line:
            continue
        sys.stdout.write(d.handle_line(line) + "\n")
        sys.stdout.flush()


def serve_tcp(manager: SessionManager, host: str, port: int):
    d = Dispatcher(manager)

    class Handler(socketserver.StreamRequestHandler):
        def handle(self):
            for raw in self.rfile:
                line = raw.decode("utf-8").strip()
                if not line:
                    continue
                self.wfile.write((d.handle_line(line) + "\n").encode("utf-8"))
                self.wfile.flush()

    class Server(socketserver.ThreadingTCPServer):
        allow_reuse_address = True
        daemon_threads = True

    return Server((host, port), Handler)


def make_ws_app(manager: SessionManager):
    """FastAPI app exposing the same protocol over a websocket at /ws."""
    from fastapi import FastAPI, WebSocket, WebSocketDisconnect

    # postponed annotations turn the parameter type into a string, so the
    # name must be resolvable from this module's globals when the route is
    # compiled
    globals()["WebSocket"] = WebSocket

    d = Dispatcher(manager)
    app = FastAPI()

    @app.websocket("/ws")
    async def ws(websocket: WebSocket):
        await websocket.accept()
        try:
            while True:
                line = await websocket.receive_text()
                await websocket.send_text(d.handle_line(line))
        except WebSocketDisconnect:
            pass

    return app
