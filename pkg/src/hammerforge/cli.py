"""Command line interface.

Problem files are TH0 (`<mode>_<theorem>_<seq>.p`); prover results are
line-delimited JSON (see docs/results-schema.md); the report command writes
a text table, a CSV, and a PNG chart next to each other.
"""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click

from .basis import bootstrap
from .driver import read_results, load_registry, run_schedule, write_results
from .script import ScriptError, check_script
from .syntax import ScriptSyntaxError


@click.group()
def main():
    """Proof scripts with ATP-backed automation."""


def _load_dev(script_path: str):
    text = Path(script_path).read_text("utf-8")
    try:
        return text, check_script(text, bootstrap())
    except (ScriptError, ScriptSyntaxError) as exc:
        raise click.ClickException(f"{script_path}: {exc}")


@main.command()
@click.argument("script", type=click.Path(exists=True))
def check(script):
    """Parse and elaborate a proof script, reporting each item."""
    text, dev = _load_dev(script)
    for item in dev.items:
        name = getattr(item, "name", "?")
        kind = "Definition" if not hasattr(item, "records") else "Theorem"
        click.echo(f"{kind} {name}: ok")
    holes = dev.aby_requests
    click.echo(f"{len(dev.items)} items, {len(dev.theorems)} theorems, "
               f"{len(holes)} aby call(s)")


def _generate(script, outdir, mode, literal_defs):
    from .hammer import gen_candidates, write_problems
    text, dev = _load_dev(script)
    cands = gen_candidates(dev, mode)
    paths = write_problems(cands, outdir, literal_defs=literal_defs)
    click.echo(f"wrote {len(paths)} {mode} problems to {outdir}")


@main.command()
@click.argument("script", type=click.Path(exists=True))
@click.option("-o", "--outdir", required=True, type=click.Path())
@click.option("--literal-defs", is_flag=True,
              help="Render connectives definitionally instead of natively.")
def bushy(script, outdir, literal_defs):
    """Generate one pruned-premise problem per tactic site."""
    _generate(script, outdir, "bushy", literal_defs)


@main.command()
@click.argument("script", type=click.Path(exists=True))
@click.option("-o", "--outdir", required=True, type=click.Path())
@click.option("--literal-defs", is_flag=True)
def chainy(script, outdir, literal_defs):
    """Generate one whole-development problem per tactic site."""
    _generate(script, outdir, "chainy", literal_defs)


@main.command()
@click.argument("directory", type=click.Path(exists=True, file_okay=False))
@click.option("--registry", type=click.Path(), default=None,
              help="Prover registry (INI); HAMMERFORGE_PROVERS overrides.")
@click.option("--timeout", type=float, default=60.0, show_default=True)
@click.option("--jobs", type=int, default=None, help="Concurrent problems.")
@click.option("--results", "results_path", type=click.Path(),
              default="results.jsonl", show_default=True)
@click.option("--keep-going", is_flag=True,
              help="Run every prover even after one proves the problem.")
def solve(directory, registry, timeout, jobs, results_path, keep_going):
    """Run the registered provers over every problem in DIRECTORY."""
    try:
        specs = load_registry(registry)
    except Exception as exc:
        raise click.ClickException(str(exc))
    paths = sorted(str(p) for p in Path(directory).glob("*.p"))
    if not paths:
        raise click.ClickException(f"no .p files in {directory}")
    results = run_schedule(paths, specs, timeout, jobs=jobs,
                           stop_on_theorem=not keep_going)
    write_results(results, results_path)
    solved = len({r.problem_id for r in results if r.status == "Theorem"})
    total = len(paths)
    click.echo(f"{solved}/{total} problems solved; results in {results_path}")


@main.command()
@click.argument("script", type=click.Path(exists=True))
@click.option("--results", "results_path", required=True,
              type=click.Path(exists=True))
@click.option("-o", "--output", required=True, type=click.Path())
@click.option("--mode", type=click.Choice(["bushy", "chainy"]),
              default="bushy", show_default=True)
@click.option("--pin", multiple=True, help="Problem ids to always select.")
@click.option("--exclude", multiple=True, help="Problem ids to never select.")
def minimize(script, results_path, output, mode, pin, exclude):
    """Rewrite solved subproofs as aby calls, largest spans first."""
    from .hammer import minimize_script
    text = Path(script).read_text("utf-8")
    results = read_results(results_path)
    new_text, selected = minimize_script(text, results, mode=mode,
                                         pin=pin, exclude=exclude)
    Path(output).write_text(new_text, "utf-8")
    saved = len(text.encode()) - len(new_text.encode())
    click.echo(f"replaced {len(selected)} subproof(s), {saved} bytes saved; "
               f"wrote {output}")


@main.command()
@click.argument("results_path", type=click.Path(exists=True))
@click.option("--mode", type=click.Choice(["bushy", "chainy", "aby"]),
              required=True)
@click.option("--script", type=click.Path(exists=True), default=None,
              help="Source script (required for --mode aby).")
@click.option("-o", "--outdir", type=click.Path(), default=".",
              show_default=True)
def report(results_path, mode, script, outdir):
    """Coverage tables from a results file: text, CSV, and a PNG chart."""
    from .hammer import (aby_coverage_report, coverage_report, render_csv,
                         render_png, render_table)
    results = read_results(results_path)
    if mode == "aby":
        if script is None:
            raise click.ClickException("--mode aby needs --script")
        rep = aby_coverage_report(Path(script).read_text("utf-8"), results)
    else:
        rep = coverage_report(results, mode)
    d = Path(outdir)
    d.mkdir(parents=True, exist_ok=True)
    table = render_table(rep)
    (d / "report.txt").write_text(table)
    (d / "report.csv").write_text(render_csv(rep))
    render_png(rep, str(d / "report.png"))
    click.echo(table, nl=False)
    click.echo(f"wrote {d / 'report.txt'}, {d / 'report.csv'}, {d / 'report.png'}")


@main.command()
@click.argument("proof", type=click.Path(exists=True))
@click.option("--problem", required=True, type=click.Path(exists=True),
              help="The TH0 problem file the proof answers.")
@click.option("--goal-at", "goal_at", type=int, default=None,
              help="Byte offset of the goal site (checked against the "
                   "problem's origin header).")
@click.option("--json", "as_json", is_flag=True)
def reconstruct(proof, problem, goal_at, as_json):
    """Scaffold a kernel proof skeleton from Dedukti prover output."""
    from .kernel import Context, Prim
    from .reconstruct import (NoFalsumStep, audit_skeleton, parse_dedukti,
                              recover_names, scaffold)
    from .script import Goal
    from .tptp import ProblemBundle, parse_th0

    parsed = parse_th0(Path(problem).read_text("utf-8"))
    conj = parsed.conjecture()
    if conj is None:
        raise click.ClickException(f"{problem} has no conjecture")
    if goal_at is not None and parsed.origin:
        stated = parsed.origin.rsplit("@", 1)[-1]
        if stated != str(goal_at):
            raise click.ClickException(
                f"--goal-at {goal_at} does not match origin {parsed.origin}")

    sig = bootstrap()
    formulas = []
    for cname, ty in parsed.decls.items():
        if cname not in sig:
            sig.add(Prim(cname, ty))
    ctx = Context()
    names = set()
    theorem = (parsed.origin or "goal").rsplit("@", 1)[0]
    names.add(theorem)
    from .tptp import recover_formula_name, unmangle, UnmangleError
    from .tptp import ProblemFormula
    for fname, role, t in parsed.formulas:
        if role == "conjecture":
            continue
        # best-effort source name: strip role prefix and trailing ordinal
        core = fname
        for pre in ("axiom_c_", "axiom_", "def_", "conj_"):
            if core.startswith(pre):
                kind = "hyp" if pre == "axiom_c_" else "axiom"
                core = core[len(pre):]
                break
        else:
            kind = "axiom"
        src = core.rstrip("0123456789") or core
        try:
            src = unmangle(src)
        except UnmangleError:
            pass
        names.add(src)
        formulas.append(ProblemFormula(src, t, kind))
        if kind == "hyp" or src not in sig:
            ctx = ctx.push_hyp(src, t)
    bundle = ProblemBundle(parsed.problem_id or Path(problem).stem,
                           parsed.mode or "bushy", theorem,
                           int(goal_at or 0), list(parsed.decls.items()),
                           formulas, conj)
    goal = Goal(ctx, conj, int(goal_at or 0))
    decls = parse_dedukti(Path(proof).read_text("utf-8"))
    recovery = recover_names(decls, bundle, sig, goal)
    try:
        sk = scaffold(sig, goal, decls, recovery)
    except NoFalsumStep as exc:
        raise click.ClickException(str(exc))
    rep = audit_skeleton(sig, sk)
    out = {
        "problem": bundle.problem_id,
        "mapping": recovery.mapping,
        "unmatched": recovery.unmatched,
        "steps": rep.total,
        "holes": rep.holes,
        "checked": rep.checked,
        "complete": rep.complete,
    }
    if as_json:
        click.echo(json.dumps(out, indent=2, sort_keys=True))
    else:
        click.echo(f"problem {out['problem']}: {rep.total} step(s), "
                   f"{rep.holes} hole(s), {rep.checked} checked")
        for k, v in sorted(recovery.mapping.items()):
            click.echo(f"  {k} -> {v}")
        for u in recovery.unmatched:
            click.echo(f"  {u} -> ? (unmatched)")
    sys.exit(0 if rep.complete else 1)


@main.command()
@click.option("--listen", default=None, metavar="HOST:PORT",
              help="Serve the protocol over TCP.")
@click.option("--stdio", is_flag=True, help="Serve over stdin/stdout.")
@click.option("--ws", type=int, default=None, metavar="PORT",
              help="Also expose a websocket bridge at ws://127.0.0.1:PORT/ws.")
@click.option("--registry", type=click.Path(), default=None)
@click.option("--timeout", type=float, default=60.0, show_default=True)
@click.option("--jobs", type=int, default=None)
def serve(listen, stdio, ws, registry, timeout, jobs):
    """Run the interactive session service (see docs/protocol.md)."""
    from .session import SessionManager, make_ws_app, serve_stdio, serve_tcp
    specs = []
    if registry or os.environ.get("HAMMERFORGE_PROVERS"):
        specs = load_registry(registry)
    manager = SessionManager(specs=specs, timeout=timeout, jobs=jobs)
    if ws is not None:
        import threading
        import uvicorn
        app = make_ws_app(manager)
        config = uvicorn.Config(app, host="127.0.0.1", port=ws,
                                log_level="warning")
        server = uvicorn.Server(config)
        if not (listen or stdio):
            server.run()
            return
        threading.Thread(target=server.run, daemon=True).start()
    if stdio:
        serve_stdio(manager)
    elif listen:
        host, _, port = listen.rpartition(":")
        srv = serve_tcp(manager, host or "127.0.0.1", int(port))
        click.echo(f"listening on {host or '127.0.0.1'}:{port}", err=True)
        srv.serve_forever()
    elif ws is None:
        raise click.ClickException("choose --listen, --stdio, or --ws")


if __name__ == "__main__":
    main()
