"""Command-line front end: ``gva --spec algebra.json <command> [flags]``.

Exit codes: 0 when the value was computed or the identity holds, 1 when a
violation was found, 2 on input errors.  Output is buffered so nothing is
written to stdout when a command fails.
"""

from __future__ import annotations

import argparse
import io
import json
import random
import sys
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

from gmpy2 import mpq

from . import engine, lattice, modules
from .engine import AlgebraInstance
from .errors import GVAError
from .fock import FockState
from .formal import ExponentWindow
from .lattice import CocycleData, CocycleReport, SubgroupSpec
from .parse import (
    AlgebraSpec,
    format_series,
    format_state,
    format_value,
    load_spec,
    matrix_json,
    parse_rational,
    parse_vector,
    parse_vectors,
    series_json,
    vector_text,
)
from .scalar import format_scalar

HOLDS, VIOLATED, COMPUTED, ERROR = "holds", "violated", "computed", "error"


class UsageError(GVAError):
    """Bad command-line usage."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # raise instead of exiting so suites can recover
        raise UsageError(message)


@dataclass
class Outcome:
    status: str
    text: str
    data: dict = field(default_factory=dict)


@dataclass
class Plan:
    """Parsed operands and a thunk that performs the computation."""

    operands: dict
    run: Callable[[], Outcome]


# ---------------------------------------------------------------- argument parsing

_STATE_FLAGS = ("a", "b", "c")
_RATIONAL_FLAGS = ("n", "m", "k", "L", "window")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    p.add_argument("--window", default=argparse.SUPPRESS)
    p.add_argument("--spec", default=argparse.SUPPRESS)


def _states(p, *names) -> None:
    for n in names:
        p.add_argument(f"--{n}", required=True, metavar="STATE")


def _rationals(p, *names, required: bool = True) -> None:
    for n in names:
        p.add_argument(f"--{n}", required=required, metavar="Q")


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="gva", description="Exact computations in lattice-type generalized vertex algebras.")
    _common(top)
    top.add_argument("--suite", default=None, help="JSON list of command requests")
    sub = top.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("mode", help="a_(n) c")
    _common(p); _states(p, "a", "c"); _rationals(p, "n")
    p = sub.add_parser("apply", help="Y(a, z) c up to the window")
    _common(p); _states(p, "a", "c")
    p = sub.add_parser("locality-order", help="N(a, b)")
    _common(p); _states(p, "a", "b")

    chk = sub.add_parser("check", help="identity checks").add_subparsers(dest="sub", parser_class=_Parser)
    p = chk.add_parser("locality"); _common(p); _states(p, "a", "b", "c"); _rationals(p, "n", required=False)
    p = chk.add_parser("skew"); _common(p); _states(p, "a", "b")
    p = chk.add_parser("borcherds"); _common(p); _states(p, "a", "b", "c"); _rationals(p, "m", "n", "k")
    p = chk.add_parser("jacobi"); _common(p); _states(p, "a", "b", "c"); _rationals(p, "n")
    p = chk.add_parser("assoc"); _common(p); _states(p, "a", "b", "c"); _rationals(p, "L", required=False)
    p = chk.add_parser("translation"); _common(p)
    p.add_argument("--a", required=True, metavar="STATE")
    p.add_argument("--c", action="append", metavar="STATE", help="sample state (repeatable)")

    coc = sub.add_parser("cocycle", help="cocycle tools").add_subparsers(dest="sub", parser_class=_Parser)
    p = coc.add_parser("construct"); _common(p)
    p.add_argument("--omega", help="invariant matrix, rows separated by ';'")
    p = coc.add_parser("verify"); _common(p)
    p.add_argument("--triples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p = coc.add_parser("invariant"); _common(p)
    p.add_argument("--alpha"); p.add_argument("--beta")
    p = coc.add_parser("extend"); _common(p)
    p.add_argument("--P", help="generators of P, separated by ';'")
    p.add_argument("--reps", help="coset representatives, separated by ';'")

    p = sub.add_parser("dual-group", help="Hermite basis of the dual group"); _common(p)
    p = sub.add_parser("twist", help="eta after twisting by the cocycle"); _common(p)

    mod = sub.add_parser("module", help="coset modules").add_subparsers(dest="sub", parser_class=_Parser)
    p = mod.add_parser("mode"); _common(p); _states(p, "a", "c"); _rationals(p, "n")
    p = mod.add_parser("check"); _common(p); _states(p, "a", "b", "c"); _rationals(p, "m", "n", "k")
    tw = sub.add_parser("twisted", help="twisted modules").add_subparsers(dest="sub", parser_class=_Parser)
    p = tw.add_parser("check"); _common(p); _states(p, "a", "b", "c"); _rationals(p, "m", "n", "k")
    return top


def normalize_argv(argv: list[str]) -> list[str]:
    """Glue values that start with '-' (like ``-1/2``) to their flag."""
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if (tok.startswith("--") and "=" not in tok and i + 1 < len(argv)
                and argv[i + 1].startswith("-") and not argv[i + 1].startswith("--")
                and argv[i + 1] not in ("-h",)):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


# ---------------------------------------------------------------- helpers


class Context:
    def __init__(self, spec: AlgebraSpec) -> None:
        self.spec = spec
        self._alg: Optional[AlgebraInstance] = None

    @property
    def names(self):
        return self.spec.names

    @property
    def lattice(self):
        return self.spec.lattice

    @property
    def algebra(self) -> AlgebraInstance:
        if self._alg is None:
            self._alg = AlgebraInstance(self.spec.lattice, self.spec.cocycle)
        return self._alg

    def state(self, text: str) -> FockState:
        return self.spec.state(text)

    def fmt(self, v) -> str:
        return format_value(v, self.names)


def _window(args, default) -> mpq:
    w = getattr(args, "window", None)
    return default if w is None else parse_rational(w)


def _report_outcome(ctx: Context, rep) -> Outcome:
    if isinstance(rep, CocycleReport):
        data = {"checked": rep.checked}
        if rep.holds:
            return Outcome(HOLDS, f"holds, {rep.checked} triples", data)
        wit = [vector_text(v) for v in rep.witness]
        data["witness"] = {"exponents": wit, "difference": rep.message}
        return Outcome(VIOLATED, f"violated at ({'; '.join(wit)}): {rep.message}", data)
    data = {"compared": rep.compared}
    if rep.holds:
        return Outcome(HOLDS, f"holds, {rep.compared} compared", data)
    wit = rep.witness if isinstance(rep.witness, tuple) else (rep.witness,)
    exps = [str(x) for x in wit]
    diff = ctx.fmt(rep.difference)
    data["witness"] = {"exponents": exps, "difference": diff}
    return Outcome(VIOLATED, f"violated at ({', '.join(exps)}): difference {diff}", data)


def _value(text: str, data) -> Outcome:
    return Outcome(COMPUTED, text, {"result": data})


def _matrix_text(M) -> str:
    return "\n".join(" ".join(str(x) for x in row) for row in M)


def _cocycle_or_default(ctx: Context) -> CocycleData:
    if ctx.spec.cocycle is not None:
        return ctx.spec.cocycle
    return lattice.construct_cocycle(lattice.omega_superalgebra(ctx.lattice),
                                     ctx.lattice.subgroup.basis)


def _module_P(ctx: Context) -> tuple[SubgroupSpec, list]:
    rep = ctx.spec.coset_rep
    if rep is None:
        raise GVAError("the spec has no module section")
    return SubgroupSpec(tuple(ctx.lattice.subgroup.basis) + (rep,)), [rep]


# ---------------------------------------------------------------- commands


def plan_command(ctx: Context, args) -> Plan:
    cmd = args.command
    sub = getattr(args, "sub", None)
    key = cmd if sub is None else f"{cmd} {sub}"
    if cmd in ("check", "cocycle", "module", "twisted") and sub is None:
        raise UsageError(f"'{cmd}' needs a subcommand")
    ops: dict = {}
    st: dict = {}
    for name in _STATE_FLAGS:
        val = getattr(args, name, None)
        if isinstance(val, str):
            st[name] = ctx.state(val)
            ops[name] = format_state(st[name], ctx.names)
    rat: dict = {}
    for name in _RATIONAL_FLAGS:
        val = getattr(args, name, None)
        if val is not None:
            rat[name] = parse_rational(val)
            ops[name] = str(rat[name])
    alg = ctx.algebra

    if key == "mode":
        def run():
            v = ctx.fmt(engine.mode(alg, st["a"], rat["n"], st["c"]))
            return _value(v, v)

        return Plan(ops, run)
    if key == "apply":
        span = _window(args, mpq(6))

        def run():
            s = engine.field_apply(alg, st["a"], st["c"])
            terms = s.terms(ExponentWindow(s.lo + span))
            terms = {e: v for e, v in terms.items() if v}
            return _value(format_series(terms, ctx.names), series_json(terms, ctx.names))

        return Plan(ops, run)
    if key == "locality-order":
        def run():
            N = engine.locality_order(alg, st["a"], st["b"])
            return _value(str(N), str(N))

        return Plan(ops, run)
    if key == "check locality":
        span = _window(args, mpq(engine.DEFAULT_SPAN))

        def run():
            N = rat.get("n")
            if N is None:
                N = engine.locality_order(alg, st["a"], st["b"])
            w = engine.natural_window(alg, st["a"], st["b"], st["c"], span)
            return _report_outcome(ctx, engine.check_locality(alg, st["a"], st["b"], st["c"], N, w))

        return Plan(ops, run)
    if key == "check skew":
        span = _window(args, mpq(engine.DEFAULT_SPAN))

        def run():
            lo = engine.field_floor(alg, st["a"], st["b"])
            return _report_outcome(ctx, engine.check_skew_symmetry(alg, st["a"], st["b"],
                                                                   ExponentWindow(lo + span)))

        return Plan(ops, run)
    if key == "check borcherds":
        return Plan(ops, lambda: _report_outcome(ctx, engine.check_borcherds(
            alg, st["a"], st["b"], st["c"], rat["m"], rat["n"], rat["k"])))
    if key == "check jacobi":
        span = _window(args, mpq(engine.DEFAULT_SPAN))

        def run():
            w = engine.natural_window(alg, st["a"], st["b"], st["c"], span)
            return _report_outcome(ctx, engine.check_jacobi_window(alg, st["a"], st["b"], st["c"],
                                                                   rat["n"], w))

        return Plan(ops, run)
    if key == "check assoc":
        span = _window(args, mpq(3))

        def run():
            a, b, c = st["a"], st["b"], st["c"]
            L = rat.get("L")
            if L is None:
                L = engine.locality_order(alg, a, c)
            w = ExponentWindow(engine.field_floor(alg, a, b) + L + span,
                               engine.field_floor(alg, b, c) + span)
            return _report_outcome(ctx, engine.check_associativity(alg, a, b, c, L, w))

        return Plan(ops, run)
    if key == "check translation":
        samples = [ctx.state(t) for t in (args.c or [])] or [alg.vacuum()]
        ops["c"] = [format_state(s, ctx.names) for s in samples]
        span = _window(args, mpq(engine.DEFAULT_SPAN))

        def run():
            a = st["a"]
            total = 0
            for c in samples:
                lo = engine.field_floor(alg, a, c)
                rep = engine.check_translation_covariance(alg, a, [c], ExponentWindow(lo + span))
                total += rep.compared
                if not rep.holds:
                    return _report_outcome(ctx, rep)
            rep = engine.check_vacuum_translation(alg, a)
            rep.compared += total
            return _report_outcome(ctx, rep)

        return Plan(ops, run)
    if key == "cocycle construct":
        omega_text = args.omega
        if omega_text is not None:
            rows = parse_vectors(omega_text)
            omega = CocycleData(rows)
            ops["omega"] = matrix_json(omega.matrix)
        else:
            omega = None

        def run():
            om = omega if omega is not None else lattice.omega_superalgebra(ctx.lattice)
            eps = lattice.construct_cocycle(om, ctx.lattice.subgroup.basis)
            return _value(_matrix_text(eps.matrix), matrix_json(eps.matrix))

        return Plan(ops, run)
    if key == "cocycle verify":
        ops["triples"] = args.triples
        ops["seed"] = args.seed

        def run():
            eps = _cocycle_or_default(ctx)
            basis = ctx.lattice.subgroup.basis
            triples = lattice.generator_triples(basis)
            triples += lattice.random_triples(ctx.lattice.subgroup, args.triples,
                                              rng=random.Random(args.seed))
            return _report_outcome(ctx, lattice.verify_cocycle(eps, triples))

        return Plan(ops, run)
    if key == "cocycle invariant":
        pair = None
        if (args.alpha is None) != (args.beta is None):
            raise UsageError("--alpha and --beta go together")
        if args.alpha is not None:
            pair = (ctx.spec.space.check_vector(parse_vector(args.alpha)),
                    ctx.spec.space.check_vector(parse_vector(args.beta)))
            ops["alpha"], ops["beta"] = vector_text(pair[0]), vector_text(pair[1])

        def run():
            om = lattice.canonical_invariant(_cocycle_or_default(ctx))
            if pair is None:
                return _value(_matrix_text(om.matrix), matrix_json(om.matrix))
            v = format_scalar(om.value(*pair))
            return _value(v, v)

        return Plan(ops, run)
    if key == "cocycle extend":
        if args.P is not None:
            P = SubgroupSpec(tuple(ctx.spec.space.check_vector(v) for v in parse_vectors(args.P)))
            reps = [ctx.spec.space.check_vector(v) for v in parse_vectors(args.reps or "")]
        else:
            P, reps = _module_P(ctx)
        ops["P"] = [vector_text(v) for v in P.basis]
        ops["reps"] = [vector_text(v) for v in reps]

        def run():
            eps = lattice.extend_cocycle(_cocycle_or_default(ctx), ctx.lattice, P, reps)
            return _value(_matrix_text(eps.matrix), matrix_json(eps.matrix))

        return Plan(ops, run)
    if key == "dual-group":
        def run():
            D = lattice.dual_group(ctx.spec.space, ctx.lattice.subgroup)
            idx = lattice.dual_index(ctx.spec.space, ctx.lattice.subgroup)
            text = "\n".join(vector_text(v) for v in D.basis) + f"\nindex {idx}"
            return _value(text, {"basis": [[str(x) for x in v] for v in D.basis], "index": idx})

        return Plan(ops, run)
    if key == "twist":
        def run():
            eps = _cocycle_or_default(ctx)
            tw = lattice.eta_twist(ctx.lattice, eps)
            return _value(_matrix_text(tw.eta_matrix), matrix_json(tw.eta_matrix))

        return Plan(ops, run)
    if key in ("module mode", "module check", "twisted check"):
        rep = ctx.spec.coset_rep
        if rep is None:
            raise GVAError("the spec has no module section")
        ops["coset_rep"] = vector_text(rep)

        def module():
            if key == "twisted check":
                P, reps = _module_P(ctx)
                sa = modules.superalgebra_instance(ctx.lattice, P, reps)
                return modules.CosetModule(sa, rep)
            return modules.CosetModule(alg, rep)

        if key == "module mode":
            def run():
                v = modules.module_mode(module(), st["a"], rat["n"], st["c"])
                return _value(ctx.fmt(v), ctx.fmt(v))
        elif key == "module check":
            def run():
                return _report_outcome(ctx, modules.check_module_borcherds(
                    module(), st["a"], st["b"], st["c"], rat["m"], rat["n"], rat["k"]))
        else:
            def run():
                mod = module()
                view = modules.build_twisted_view(mod.algebra, mod)
                return _report_outcome(ctx, modules.check_twisted_borcherds(
                    view, st["a"], st["b"], st["c"], rat["n"], rat["m"], rat["k"]))
        return Plan(ops, run)
    raise UsageError(f"unknown command {key!r}")


# ---------------------------------------------------------------- output


def render(outcome: Outcome, operands: dict, elapsed_ms: int, fmt: str) -> str:
    if fmt == "json":
        doc = {"status": outcome.status}
        doc.update(outcome.data)
        doc["operands"] = operands
        doc["elapsed_ms"] = elapsed_ms
        return json.dumps(doc, sort_keys=True)
    return outcome.text


def _exit_code(status: str) -> int:
    return {HOLDS: 0, COMPUTED: 0, VIOLATED: 1}.get(status, 2)


def execute(argv: list[str], spec_path: Optional[str] = None) -> tuple[int, str, str]:
    """Run one command; returns ``(exit code, stdout text, stderr text)``."""
    try:
        args = build_parser().parse_args(normalize_argv(argv))
        fmt = getattr(args, "format", "text")
        spec_path = getattr(args, "spec", None) or spec_path
        if args.suite:
            return run_suite(args.suite, spec_path, fmt)
        if not args.command:
            raise UsageError("no command given")
        if spec_path is None:
            raise UsageError("--spec is required")
        ctx = Context(load_spec(spec_path))
        plan = plan_command(ctx, args)
        t0 = time.perf_counter()
        outcome = plan.run()
        ms = int((time.perf_counter() - t0) * 1000)
        return _exit_code(outcome.status), render(outcome, plan.operands, ms, fmt) + "\n", ""
    except (GVAError, ZeroDivisionError, ValueError) as exc:
        return 2, "", f"error: {exc}\n"


def run_suite(path: str, spec_path: Optional[str], fmt: str) -> tuple[int, str, str]:
    """Run each request of a suite file in order and aggregate the exit codes."""
    try:
        with open(path) as fh:
            requests = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise GVAError(f"cannot read suite file: {exc}") from None
    if not isinstance(requests, list):
        raise GVAError("a suite file must hold a list of requests")
    results = []
    codes = []
    errors = io.StringIO()
    for i, req in enumerate(requests):
        if not isinstance(req, dict) or "command" not in req:
            code, out, err = 2, "", "error: request needs a 'command'\n"
        else:
            argv = str(req["command"]).split()
            for k, v in (req.get("args") or {}).items():
                for item in (v if isinstance(v, list) else [v]):
                    argv.append(f"--{k}={item}")
            argv.append("--format=json")
            code, out, err = execute(argv, req.get("spec", spec_path))
        codes.append(code)
        if code == 2:
            errors.write(f"[{i}] {err}")
            results.append({"index": i, "status": ERROR, "error": err.strip()})
        else:
            doc = json.loads(out)
            doc["index"] = i
            results.append(doc)
    total = 1 if 1 in codes else (2 if 2 in codes else 0)
    if fmt == "json":
        for r in results:
            r.pop("elapsed_ms", None)
        out = json.dumps({"status": {0: HOLDS, 1: VIOLATED, 2: ERROR}[total],
                          "results": results}, sort_keys=True)
    else:
        out = "\n".join(f"[{r['index']}] {r['status']}" for r in results)
    return total, out + "\n", errors.getvalue()


def main(argv: Optional[list[str]] = None) -> int:
    code, out, err = execute(sys.argv[1:] if argv is None else list(argv))
    if out:
        sys.stdout.write(out)
    if err:
        sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
