"""``fqforge`` command line.

Every command writes a JSON report (``--report``, ``-`` for stdout) and a
one-line summary.  Exit status: 0 PASS, 1 FAIL or inconclusive, 2 usage
error, 3 parse error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from fractions import Fraction
from typing import Any, Sequence

from . import __version__
from .construct import (
    FIXTURE_NAMES,
    ConstructionError,
    audit,
    build_tower_oracle,
    fixture_text,
    manifest,
    oracle_for,
    stage_words,
    construct_ghat,
)
from .dsl import Document, parse_document
from .gog import GogError
from .oracles import Verdict, default_budget
from .presentations import ParseError, Presentation, Word, parse_word

SCHEMA = 1
EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_PARSE = 0, 1, 2, 3


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# inputs


class Source:
    """A DSL document read from a file or a packaged fixture."""

    def __init__(self, ref: str):
        self.ref = ref
        if ref.startswith("fixtures:"):
            name = ref.split(":", 1)[1]
            if name not in FIXTURE_NAMES:
                raise UsageError(f"unknown fixture {name!r}; try 'fixtures --list'")
            self.text = fixture_text(name)
        else:
            try:
                with open(ref, encoding="utf-8") as fh:
                    self.text = fh.read()
            except OSError as exc:
                raise UsageError(f"cannot read {ref}: {exc.strerror}") from None
        self.sha256 = hashlib.sha256(self.text.encode()).hexdigest()
        self.doc: Document = parse_document(self.text)

    def group(self, name: str | None = None) -> Presentation:
        try:
            return self.doc.group(name)
        except KeyError:
            raise UsageError(f"{self.ref} defines no group {name or ''}".rstrip()) from None

    def gog(self, name: str | None = None):
        if not self.doc.gogs:
            raise UsageError(f"{self.ref} defines no graph of groups")
        if name is None:
            return next(iter(self.doc.gogs.values()))
        if name not in self.doc.gogs:
            raise UsageError(f"{self.ref} defines no graph of groups {name!r}")
        return self.doc.gogs[name]


def _words(text: str, p: Presentation, named: dict[str, Word] | None = None) -> list[Word]:
    out = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        if named and part in named:
            out.append(named[part])
        else:
            out.append(parse_word(part, p.generators))
    return out


# ---------------------------------------------------------------------------
# report helpers


def _jsonable(x: Any) -> Any:
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "value") and hasattr(x, "name") and not isinstance(x, (int, str)):
        return x.value
    return x


def _write_report(args, report: dict) -> None:
    text = json.dumps(_jsonable(report), sort_keys=True, indent=2) + "\n"
    if args.report == "-":
        sys.stdout.write(text)
    else:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(text)


def _base_report(args, verdict: str, sources: Sequence[Source], results: dict) -> dict:
    flags = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "report", "out")}
    return {
        "schema": SCHEMA,
        "tool": "fqforge",
        "version": __version__,
        "command": args.command,
        "flags": flags,
        "inputs": {s.ref: s.sha256 for s in sources},
        "budget": args.budget if args.budget is not None else default_budget(),
        "verdict": verdict,
        "results": results,
    }


def _finish(args, verdict: str, sources, results: dict, summary: str) -> int:
    _write_report(args, _base_report(args, verdict, sources, results))
    stream = sys.stderr if args.report == "-" else sys.stdout
    print(f"{verdict} {args.command}: {summary}", file=stream)
    return EXIT_PASS if verdict == "PASS" else EXIT_FAIL


def _targets(args):
    from .finite import cyclic, symmetric

    out = [cyclic(m) for m in range(2, args.order_bound + 1)]
    top = args.symmetric if args.symmetric is not None else 3
    out.extend(symmetric(k) for k in range(3, top + 1))
    return out


# ---------------------------------------------------------------------------
# commands


def cmd_fixtures(args) -> int:
    if args.show:
        if args.show not in FIXTURE_NAMES:
            raise UsageError(f"unknown fixture {args.show!r}")
        sys.stdout.write(fixture_text(args.show))
        return EXIT_PASS
    for name in FIXTURE_NAMES:
        print(name)
    return EXIT_PASS


def cmd_construct(args) -> int:
    src = Source(args.input)
    G = src.group(args.name)
    rec = construct_ghat(G, args.n)
    items = audit(rec, build_tower_oracle(rec), args.budget)
    text = manifest(rec)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    ok = all(i.ok for i in items)
    results = {
        "ranks": {k: p.rank for k, p in rec.stages.items()},
        "relators": {k: len(p.relators) for k, p in rec.stages.items()},
        "ledger": dict(rec.ledger()),
        "audit": [{"check": i.name, "ok": i.ok, "detail": i.detail} for i in items],
        "manifest_sha256": hashlib.sha256(text.encode()).hexdigest(),
    }
    summary = f"Ghat has {rec.ghat.rank} generators, {len(rec.ghat.relators)} relators; audit {sum(i.ok for i in items)}/{len(items)}"
    return _finish(args, "PASS" if ok else "FAIL", [src], results, summary)


def _hom_json(r):
    return {"target": r.target, "order": r.order, "homomorphisms": r.count,
            "nontrivial": len(r.nontrivial()), "complete": r.complete, "nodes": r.nodes}


def cmd_quotients(args) -> int:
    from .quotients import certify_no_finite_quotients

    src = Source(args.group)
    P = src.group(args.name)
    cert = certify_no_finite_quotients(P, targets=_targets(args), max_index=args.max_index,
                                       budget=args.budget, jobs=args.jobs)
    results = {"presentation": P.name, "abelianization": list(cert.abelianization),
               "homomorphisms": [_hom_json(r) for r in cert.reports],
               "witness": cert.witness, "notes": list(cert.notes), "inventory": cert.inventory()}
    if cert.low_index is not None:
        li = cert.low_index
        results["low_index"] = {"max_index": li.max_index, "subgroups": len(li.subgroups),
                                "complete": li.complete, "method": li.method}
    return _finish(args, cert.status.value, [src], results, cert.witness or "; ".join(cert.notes))


def cmd_dead_element(args) -> int:
    from .quotients import verify_dead_element

    src = Source(args.group)
    P = src.group(args.name)
    (w,) = _words(args.word, P)
    try:
        oracle = oracle_for(P)
    except ConstructionError:
        oracle = None
    rep = verify_dead_element(P, w, targets=_targets(args), oracle=oracle, budget=args.budget, jobs=args.jobs)
    results = {"word": P.format(w), "nontrivial": rep.nontrivial.value if rep.nontrivial else None,
               "homomorphisms": [_hom_json(r) for r in rep.reports], "survivors": list(rep.survivors),
               "notes": list(rep.notes)}
    summary = (f"{P.format(w)} dies in {len(rep.reports)} targets" if not rep.survivors
               else f"survives in {', '.join(rep.survivors)}")
    return _finish(args, rep.status.value, [src], results, summary)


def _ambient(args):
    """``(oracle, presentation, named words, sources, ambient gens or None)``."""
    if args.tower:
        src = Source(args.tower)
        rec = construct_ghat(src.group(args.name), args.n)
        if args.stage not in rec.stages:
            raise UsageError(f"unknown stage {args.stage!r}; stages are {', '.join(rec.stages)}")
        orc = build_tower_oracle(rec)
        P = rec.stages[args.stage]
        named = stage_words(rec, args.stage)
        astar = list(rec.astar) if args.stage == "G1" else None
        return orc.stage(args.stage), P, named, [src], astar
    if not args.group:
        raise UsageError("give --group or --tower")
    src = Source(args.group)
    P = src.group(args.name)
    try:
        return oracle_for(P), P, {}, [src], None
    except ConstructionError as exc:
        raise UsageError(str(exc)) from None


def cmd_isometric(args) -> int:
    from .metrics import Embedding, EmbeddingVerdict, distortion_profile

    oracle, P, named, sources, astar = _ambient(args)
    sub = _words(args.sub, P, named)
    if args.ambient in (None, ""):
        amb = [(g + 1,) for g in range(P.rank)]
    elif args.ambient == "A*":
        if astar is None:
            raise UsageError("--ambient A* needs --tower with --stage G1")
        amb = astar
    else:
        amb = _words(args.ambient, P, named)
    prof = distortion_profile(Embedding(sub, oracle, amb), args.radius, args.budget)
    cert = prof.certificate
    results = {
        "subgroup": [P.format(w) for w in sub],
        "ambient": [P.format(w) for w in amb],
        "radius": args.radius,
        "isometric": cert.verdict.value,
        "table": [{"expression": ex, "d_sub": dh, "d_ambient": dg} for ex, dh, dg in cert.table],
        "witness": cert.witness,
        "lambda": cert.lam,
        "epsilon": cert.eps,
        "profile": [{"radius": R, "lambda": lam, "epsilon": eps, "mu": mu} for R, lam, eps, mu in prof.per_radius],
        "detail": cert.detail,
    }
    verdict = {EmbeddingVerdict.ISOMETRIC: "PASS", EmbeddingVerdict.DISTORTED: "FAIL"}.get(cert.verdict, "INCONCLUSIVE")
    summary = f"{cert.verdict.value}({args.radius})"
    if cert.verdict is EmbeddingVerdict.DISTORTED:
        summary += f", lambda {cert.lam}, epsilon {cert.eps}"
    return _finish(args, verdict, sources, results, summary)


def cmd_ball(args) -> int:
    from .metrics import BallError, cayley_ball

    oracle, P, named, sources, astar = _ambient(args)
    gens = _words(args.gens, P, named) if args.gens else [(g + 1,) for g in range(P.rank)]
    try:
        ball = cayley_ball(oracle, gens, args.radius, args.budget)
    except BallError as exc:
        return _finish(args, "INCONCLUSIVE", sources, {"error": str(exc)}, str(exc))
    results = {"generators": [P.format(w) for w in gens], "radius": args.radius, "size": len(ball),
               "spheres": ball.sphere_sizes(),
               "elements": [{"word": P.format(ball.word(k)), "distance": ball.distances[k]} for k in range(len(ball))]}
    return _finish(args, "PASS", sources, results, f"ball of radius {args.radius} has {len(ball)} elements")


def _cert_json(P, cert):
    return {"word": P.format(cert.word), "area": cert.area, "diameter": cert.diameter,
            "max_intermediate": cert.max_intermediate, "length_cap": cert.length_cap,
            "replays": cert.verify(), "method": cert.method,
            "factors": [{"conjugator": P.format(f.conjugator), "relator": f.relator, "sign": f.sign}
                        for f in cert.factors]}


def cmd_dehn(args) -> int:
    from .dehn import AreaStatus, check_composite_bounds, dehn_sample, min_area

    budget = args.area_budget if args.area_budget is not None else args.budget
    if args.gog:
        src = Source(args.gog)
        g = src.gog(args.name)
        try:
            rep = check_composite_bounds(g, args.length_bound, budget=budget)
        except GogError as exc:
            return _finish(args, "FAIL", [src], {"graph": g.name, "refused": str(exc)}, f"refused: {exc}")
        results = {
            "graph": g.name, "length_bound": args.length_bound, "words": len(rep.rows),
            "complete": rep.complete,
            "vertex_dehn": {k: s.areas for k, s in rep.vertex_samples.items()},
            "vertex_diameter": {k: s.diameters for k, s in rep.vertex_samples.items()},
            "max_certificate_area": max((r.area for r in rep.rows), default=0),
            "max_certificate_diameter": max((r.diameter for r in rep.rows), default=0),
            "violations": [{"word": list(r.word), "area": r.area, "bound": r.area_bound,
                            "diameter": r.diameter, "diameter_bound": r.diameter_bound,
                            "min_area": r.min_area} for r in rep.violations],
            "failures": rep.failures,
            "diameter_definition": "longest conjugator in the certificate",
        }
        verdict = "PASS" if rep.ok else ("FAIL" if rep.violations or rep.failures else "INCONCLUSIVE")
        return _finish(args, verdict, [src], results, f"{len(rep.rows)} words, {len(rep.violations)} violations")
    if not args.group:
        raise UsageError("give --group or --gog")
    src = Source(args.group)
    P = src.group(args.name)
    if args.word:
        (w,) = _words(args.word, P)
        res = min_area(P, w, budget)
        results = {"status": res.status.value, "reason": res.reason, "explored": res.explored}
        if res.certificate:
            results["certificate"] = _cert_json(P, res.certificate)
        verdict = {AreaStatus.FILLED: "PASS", AreaStatus.NOT_NULLHOMOTOPIC: "FAIL"}.get(res.status, "INCONCLUSIVE")
        summary = f"area {res.area}" if res.certificate else res.reason
        return _finish(args, verdict, [src], results, summary)
    try:
        oracle = oracle_for(P)
    except ConstructionError as exc:
        raise UsageError(str(exc)) from None
    s = dehn_sample(P, args.length_bound, oracle, budget)
    results = {"length_bound": s.bound, "dehn": s.areas, "diameter": s.diameters,
               "witnesses": [P.format(w) if w is not None else None for w in s.witnesses],
               "counts": s.counts, "complete": s.complete,
               "diameter_definition": "longest conjugator in the certificate"}
    verdict = "PASS" if s.complete else "INCONCLUSIVE"
    return _finish(args, verdict, [src], results, f"f({s.bound}) = {s.areas[-1]}")


def cmd_certify(args) -> int:
    from .quotients import certify_no_finite_quotients

    src = Source(args.input)
    rec = construct_ghat(src.group(args.name), args.n)
    items = audit(rec, build_tower_oracle(rec), args.budget)
    cert = certify_no_finite_quotients(rec.ghat, targets=_targets(args), max_index=args.max_index,
                                       budget=args.budget, jobs=args.jobs)
    ok = all(i.ok for i in items)
    verdict = cert.status.value if ok else "FAIL"
    results = {"audit": [{"check": i.name, "ok": i.ok, "detail": i.detail} for i in items],
               "abelianization": list(cert.abelianization),
               "homomorphisms": [_hom_json(r) for r in cert.reports],
               "witness": cert.witness, "notes": list(cert.notes), "inventory": cert.inventory()}
    if cert.low_index is not None:
        li = cert.low_index
        results["low_index"] = {"max_index": li.max_index, "subgroups": len(li.subgroups),
                                "complete": li.complete, "method": li.method}
    return _finish(args, verdict, [src], results, "; ".join(cert.inventory()))


# ---------------------------------------------------------------------------
# argument parsing


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fqforge", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"fqforge {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, report=True):
        p.add_argument("--budget", type=_positive, default=None,
                       help="step budget per query (default: FQFORGE_BUDGET or 10^6)")
        p.add_argument("--jobs", type=_positive, default=1, help="worker processes (default 1)")
        p.add_argument("--name", default=None, help="group or graph name inside the input file")
        if report:
            p.add_argument("--report", default=None, help="JSON report path, '-' for stdout")

    def quotient_flags(p, order=6):
        p.add_argument("--order-bound", type=int, default=order, help="cyclic targets Z/2..Z/N")
        p.add_argument("--symmetric", type=int, default=None, help="symmetric targets S3..Sk (default S3)")

    p = sub.add_parser("fixtures", help="list or print the packaged fixtures")
    p.add_argument("--list", action="store_true")
    p.add_argument("--show", metavar="NAME")
    p.set_defaults(func=cmd_fixtures)

    p = sub.add_parser("construct", help="run the embedding pipeline and write every stage")
    p.add_argument("--input", required=True)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--out")
    common(p)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("quotients", help="search for finite quotients")
    p.add_argument("--group", required=True)
    p.add_argument("--max-index", type=int, default=3)
    quotient_flags(p)
    common(p)
    p.set_defaults(func=cmd_quotients)

    p = sub.add_parser("dead-element", help="check a word is nontrivial but dies in finite quotients")
    p.add_argument("--group", required=True)
    p.add_argument("--word", required=True)
    quotient_flags(p, 8)
    common(p)
    p.set_defaults(func=cmd_dead_element)

    for name, fn, helptext in (("isometric", cmd_isometric, "compare subgroup and ambient word metrics"),
                               ("ball", cmd_ball, "breadth-first Cayley ball")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--group")
        p.add_argument("--tower", help="base group for the pipeline; use with --stage")
        p.add_argument("--stage", default="Ghat")
        p.add_argument("--n", type=int, default=2)
        p.add_argument("--radius", type=int, default=4)
        if name == "isometric":
            p.add_argument("--sub", required=True, help="subgroup generators, ';'-separated")
            p.add_argument("--ambient", help="ambient generators, ';'-separated, or A*")
        else:
            p.add_argument("--gens", help="generators, ';'-separated")
        common(p)
        p.set_defaults(func=fn)

    p = sub.add_parser("dehn", help="minimal areas, Dehn samples and composite bounds")
    p.add_argument("--group")
    p.add_argument("--gog", help="graph-of-groups document for the composite bound check")
    p.add_argument("--word")
    p.add_argument("--length-bound", type=int, default=8)
    p.add_argument("--area-budget", type=_positive, default=None)
    common(p)
    p.set_defaults(func=cmd_dehn)

    p = sub.add_parser("certify", help="pipeline plus finite-quotient certificate for Ghat")
    p.add_argument("--input", required=True)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--max-index", type=int, default=3)
    quotient_flags(p, 12)
    common(p)
    p.set_defaults(func=cmd_certify)
    return ap


def run(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_PASS
    if getattr(args, "report", "") is None:
        args.report = f"{args.command}.report.json"
    if getattr(args, "budget", None) is not None:
        os.environ["FQFORGE_BUDGET"] = str(args.budget)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"fqforge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"fqforge: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE


def main() -> None:
    sys.exit(run())
