"""Command-line surface over the workbench.

Subcommands: check, extract, zero, witness, play, serve, modulus,
update-zero, epsilon.  Every command accepts ``--format json`` for
machine-readable output and exits nonzero with a diagnostic on errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

from .convergence import (
    PHI, FunChain, modulus_report, modulus_rows, state_to_fun,
    zero_via_moduli_report, _oracle_predicates,
)
from .epsilon import eps_normalize, formula_truth, h_process, parse_criticals
from .games import GameSession, RealizerEloise, Transcript
from .kernel import KernelError, NAT
from .logic import ProofError, check_proof, print_formula
from .oracle import OracleTerm, export_trace, zero_loop
from .prooffile import load_prelude, parse_proof_file
from .realizer import extract, extract_witness
from .service import DEFAULT_PORT_ENV, build_app, preset_session
from .sexpr import SExpr, SyntaxError_, parse_all
from .states import EMPTY, LearningSignature
from .syntax import parse_state, print_state, print_term
from .update import (
    export_learning_trace, learning_process, parse_procedure,
    validate_update_procedure, zero_br,
)


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _load_function_table(path: str) -> dict[int, int]:
    items = parse_all(_read(path))
    table: dict[int, int] = {}
    for item in items:
        if isinstance(item, list) and item and item[0] == "table":
            table.update({i: int(v) for i, v in enumerate(item[1:])})
        else:
            raise SyntaxError_(f"bad sample file entry", 0)
    return table


def _load_term_file(src: str):
    """Term files: optional (prelude ...) clauses plus one (term ...)."""
    from .logic import _atom_term
    sig = LearningSignature()
    sig.register(PHI, NAT >> NAT)  # the function oracle is always in scope
    term = None
    chain_states = None
    for item in parse_all(src):
        if isinstance(item, list) and item and item[0] == "prelude":
            load_prelude(item[1:], sig)
        elif isinstance(item, list) and item and item[0] == "term" and len(item) == 2:
            term = _atom_term(item[1], {}, sig)
        elif isinstance(item, list) and item and item[0] == "chain":
            chain_states = [parse_state_sexpr_helper(x) for x in item[1:]]
        else:
            raise SyntaxError_("bad term file entry", 0)
    if term is None:
        raise SyntaxError_("term file lacks a (term ...) clause", 0)
    return OracleTerm(term, sig), chain_states


def parse_state_sexpr_helper(e: SExpr):
    from .syntax import parse_state_sexpr
    return parse_state_sexpr(e)


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text, end="" if text.endswith("\n") else "\n")


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_check(args) -> int:
    pf = parse_proof_file(_read(args.proof))
    checked = check_proof(pf.proof, pf.sig)
    conclusion = print_formula(checked.conclusion)
    opens = {k: print_formula(v) for k, v in checked.assumptions.items()}
    _emit(args, {"ok": True, "conclusion": conclusion, "assumptions": opens},
          f"OK: {conclusion}" + (f"  [open: {opens}]" if opens else ""))
    return 0


def cmd_extract(args) -> int:
    pf = parse_proof_file(_read(args.proof))
    checked = check_proof(pf.proof, pf.sig)
    realizer = extract(checked)
    from .kernel import typecheck
    ty = typecheck(realizer.term, {}, pf.sig)
    _emit(args, {"realizer": print_term(realizer.term), "type": repr(ty)},
          print_term(realizer.term))
    return 0


def cmd_zero(args) -> int:
    t, _ = _load_term_file(_read(args.term))
    s0 = parse_state(args.s0) if args.s0 else EMPTY
    result = zero_loop(t, s0=s0, fuel=args.fuel)
    payload = {
        "zeroState": print_state(result.zero_state),
        "steps": result.steps,
        "trace": [print_state(s) for s in result.trace],
    }
    _emit(args, payload,
          f"zero state: {print_state(result.zero_state)} after {result.steps} steps\n"
          + export_trace(result))
    return 0


def cmd_witness(args) -> int:
    tables = {"f": _load_function_table(args.f)} if args.f else None
    pf = parse_proof_file(_read(args.proof), function_tables=tables)
    checked = check_proof(pf.proof, pf.sig)
    realizer = extract(checked)
    out = extract_witness(realizer, checked.conclusion, args.a)
    payload = {
        "n": args.a,
        "witness": out.witness,
        "steps": out.steps,
        "zeroState": print_state(out.zero_state),
        "trace": [print_state(s) for s in out.zero.trace],
    }
    _emit(args, payload,
          f"witness: {out.witness} (after {out.steps} learning steps)\n"
          f"final state: {print_state(out.zero_state)}")
    return 0


def normalized_records(transcript: Transcript) -> list[str]:
    lines = [json.dumps(r.as_dict(), sort_keys=True, separators=(",", ":"))
             for r in transcript.records]
    summary = {"winner": transcript.winner,
               "finalKnowledge": print_state(transcript.final_state),
               "backtracks": transcript.eloise_backtracks}
    lines.append(json.dumps(summary, sort_keys=True, separators=(",", ":")))
    return lines


def cmd_play(args) -> int:
    formula, sig, realizer = preset_session(args.preset)
    game = GameSession(formula, RealizerEloise(realizer), sig,
                       max_moves=args.max_moves)
    game.advance()
    script = []
    if args.abelard:
        for tok in args.abelard.split(","):
            tok = tok.strip()
            script.append(tok if tok in ("left", "right") else int(tok))
    for move in script:
        if game.finished:
            break
        game.offer_abelard(move)
    if not game.finished and not game.awaiting_abelard():
        game.advance()
    if not game.finished:
        game.resign()  # script exhausted: concede the rest
    transcript = game.transcript()
    lines = normalized_records(transcript)
    _emit(args, {"transcript": lines}, "\n".join(lines))
    return 0


def cmd_serve(args) -> int:
    import uvicorn
    port = args.port or int(os.environ.get(DEFAULT_PORT_ENV, "8000"))
    uvicorn.run(build_app(), host=args.host, port=port, log_level="warning")
    return 0


def cmd_modulus(args) -> int:
    t, chain_states = _load_term_file(_read(args.term))
    sig = t.sig
    if not sig.has(PHI):
        sig.register(PHI, NAT >> NAT)
    if chain_states is None:
        raise SyntaxError_("modulus needs a (chain {s} ...) clause", 0)
    preds = sorted(sig.predicates)
    fns = [state_to_fun(sig, preds, s) for s in chain_states]
    chain = FunChain(lambda i: fns[min(i, len(fns) - 1)])
    rows = modulus_rows(t.term, chain, sig, zs=range(0, args.zmax + 1))
    table = modulus_report(rows)
    _emit(args, {"rows": [r.__dict__ | {"value": str(r.value)} for r in rows]},
          table)
    return 0


def cmd_update_zero(args) -> int:
    proc = parse_procedure(_read(args.proc))
    violations = validate_update_procedure(proc, probes=args.probes)
    if args.method == "loop":
        run = learning_process(proc)
        family = run.zero
        trace = export_learning_trace(run)
    else:
        family = zero_br(proc)
        trace = ""
    support = [[list(code), n, m] for code, n, m in family.support()]
    check = proc(family) is None
    _emit(args, {"method": args.method, "support": support, "zero": check,
                 "conditionViolations": violations},
          f"zero family support: {support}\nU(zero) empty: {check}\n"
          f"condition probe violations: {violations}\n" + trace)
    return 0 if check else 1


def cmd_epsilon(args) -> int:
    crits = parse_criticals(_read(args.criticals))
    out = h_process(crits)
    assignment = [[repr(e), v] for e, v in out.substitution.items()]
    all_true = all(
        formula_truth(eps_normalize(c.formula(), out.substitution))  # type: ignore[arg-type]
        for c in crits)
    _emit(args, {"assignment": assignment, "steps": out.run.steps,
                 "allCriticalsTrue": all_true},
          f"substitution ({out.run.steps} repair steps):\n"
          + "\n".join(f"  {e} -> {v}" for e, v in assignment)
          + f"\nall criticals true: {all_true}")
    return 0 if all_true else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="realizability",
        description="program extraction from classical proofs, backtracking "
                    "games, moduli of convergence, update procedures")
    parser.add_argument("--format", choices=["text", "json"], default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="check a natural-deduction proof file")
    p.add_argument("proof")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("extract", help="extract the realizer of a proof")
    p.add_argument("proof")
    p.set_defaults(fn=cmd_extract)

    p = sub.add_parser("zero", help="run the learning zero loop on a state term")
    p.add_argument("term")
    p.add_argument("--s0", default=None, help="starting state literal")
    p.add_argument("--fuel", type=int, default=10**6)
    p.set_defaults(fn=cmd_zero)

    p = sub.add_parser("witness", help="extract a witness from a forall-exists proof")
    p.add_argument("proof")
    p.add_argument("--f", default=None, help="sample function table file")
    p.add_argument("--a", type=int, required=True, help="outer universal instance")
    p.set_defaults(fn=cmd_witness)

    p = sub.add_parser("play", help="batch backtracking game transcript")
    p.add_argument("--preset", choices=["em1", "minimum", "coquand"], required=True)
    p.add_argument("--abelard", default="", help="comma-separated opponent script")
    p.add_argument("--max-moves", type=int, default=10_000)
    p.set_defaults(fn=cmd_play)

    p = sub.add_parser("serve", help="run the interactive game service")
    p.add_argument("--port", type=int, default=None)
    p.add_argument("--host", default="127.0.0.1")
    p.set_defaults(fn=cmd_serve)

    p = sub.add_parser("modulus", help="modulus-of-convergence report for a term")
    p.add_argument("term")
    p.add_argument("--zmax", type=int, default=8)
    p.set_defaults(fn=cmd_modulus)

    p = sub.add_parser("update-zero", help="zero of an update procedure file")
    p.add_argument("proc")
    p.add_argument("--method", choices=["loop", "bar"], default="loop")
    p.add_argument("--probes", type=int, default=100)
    p.set_defaults(fn=cmd_update_zero)

    p = sub.add_parser("epsilon", help="epsilon substitution repair process")
    p.add_argument("criticals")
    p.set_defaults(fn=cmd_epsilon)

    return parser


def run_cli(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ProofError, SyntaxError_, KernelError, FileNotFoundError,
            AssertionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:  # console entry point
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
