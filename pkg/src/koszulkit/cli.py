"""Command-line front end.

``koszulkit <command> [--doc FILE] [--seed N] [--count N] [--bound N]
[--out FILE] [--format text|structured]``

Exit codes: 0 pass, 1 fail, 2 usage or input error, 3 inconclusive.
Structured output is one JSON document per run; it carries every object
needed to re-check the result (certificates are embedded as document text
and can be fed back to ``koszulkit verify``).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time

from . import matrix as mx
from . import witness as wt
from .complexes import PreconditionError, homology, shift
from .cubes import is_admissible, totalize, verify_totisom
from .document import Document, ParseError, parse_document, parse_text
from .groebner import Ideal
from .koszul import (
    DEFAULT_BOUND,
    Inconclusive,
    MMParams,
    is_total_quasi_iso,
    koszul_report,
    quasi_split_witness,
    wgp_check,
)
from .snf import smith_normal_form
from .suite import PROPERTIES, run_suite

EXIT = {"pass": 0, "fail": 1, "error": 2, "inconclusive": 3}
FORMAT_VERSION = 1


class UsageError(Exception):
    """Bad arguments or an input document that does not fit the command."""


class Report:
    """Outcome of one command: checks plus data, serialized deterministically."""

    def __init__(self, command, digest=None, seed=None):
        self.command = command
        self.digest = digest
        self.seed = seed
        self.checks = []
        self.data = {}
        self.timings = None
        self.forced = None

    def check(self, name, result, detail=""):
        """Record a check; ``result`` is True, False or None (inconclusive)."""
        self.checks.append({"name": name, "result": _result(result), "detail": detail})
        return result

    @property
    def outcome(self):
        if self.forced:
            return self.forced
        results = {c["result"] for c in self.checks}
        if "fail" in results:
            return "fail"
        if "inconclusive" in results:
            return "inconclusive"
        return "pass"

    def to_dict(self):
        out = {
            "format": "koszulkit-report",
            "version": FORMAT_VERSION,
            "command": self.command,
            "inputs_digest": self.digest,
            "seed": self.seed,
            "outcome": self.outcome,
            "checks": self.checks,
            "data": self.data,
        }
        if self.timings is not None:
            out["timings"] = self.timings
        return out

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    def to_text(self):
        lines = [f"command: {self.command}", f"outcome: {self.outcome}"]
        if self.digest:
            lines.append(f"inputs: sha256:{self.digest}")
        if self.seed is not None:
            lines.append(f"seed: {self.seed}")
        for c in self.checks:
            tail = f"  ({c['detail']})" if c["detail"] else ""
            lines.append(f"  [{c['result']}] {c['name']}{tail}")
        for key in sorted(self.data):
            value = self.data[key]
            if isinstance(value, str) and "\n" in value:
                lines.append(f"{key}:")
                lines.extend("  " + ln for ln in value.rstrip("\n").split("\n"))
            elif isinstance(value, (dict, list)):
                lines.append(f"{key}: {json.dumps(value, sort_keys=True, ensure_ascii=False)}")
            else:
                lines.append(f"{key}: {value}")
        if self.timings is not None:
            lines.append(f"timings: {json.dumps(self.timings, sort_keys=True)}")
        return "\n".join(lines) + "\n"


def _result(r):
    return {True: "pass", False: "fail", None: "inconclusive"}[r]


# ---------------------------------------------------------------------------
# helpers


def _standalone(ring, *items):
    """Serialize entities into a self-contained document."""
    doc = Document(ring)
    for name, kind, obj in items:
        doc.add(name, kind, obj)
    return doc.serialize()


def _module_text(R, M):
    rel = M.relations
    if rel.shape[1] == 0:
        return f"free of rank {M.ngens}"
    from .document import format_matrix

    return f"{M.ngens} generators, relations {format_matrix(R, rel)}"


def _homology_table(K):
    R = K.ring
    out = {}
    for n in K.degrees():
        H = homology(K, n)
        out[str(n)] = "0" if H.is_zero() else _module_text(R, H)
    return out


def _need(doc, kind, name=None):
    if doc is None:
        raise UsageError(f"this command needs --doc with a {kind}")
    try:
        return doc.first(kind, name)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None


def _optional(doc, kind, name=None):
    try:
        return doc.first(kind, name)
    except KeyError:
        if name is not None:
            raise UsageError(f"unresolved reference {name!r}") from None
        return None


# ---------------------------------------------------------------------------
# commands


def cmd_check_koszul(doc, args, rep):
    x = _need(doc, "cube", args.name)
    fs = _need(doc, "sequence", args.sequence)
    try:
        kr = koszul_report(x, fs, args.bound)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    for reason in kr.reasons:
        rep.check(reason, None if "no power" in reason else False)
    rep.check("koszul cube", None if kr.inconclusive and kr.ok else kr.ok)
    rep.data["exponents"] = {f"{''.join(x.ordered(T)) or '-'}:{k}": m
                             for (T, k), m in sorted(kr.exponents.items(), key=lambda t: (sorted(t[0][0]), t[0][1]))}


def cmd_check_admissible(doc, args, rep):
    x = _need(doc, "cube", args.name)
    rep.check("admissible", is_admissible(x))


def cmd_tot(doc, args, rep):
    x = _need(doc, "cube", args.name)
    T = totalize(x)
    rep.check("d squares to zero", T.is_complex())
    rep.data["tot"] = _standalone(x.ring, ("Tot", "complex", T))
    rep.data["homology"] = _homology_table(T)
    if is_admissible(x):
        tr = verify_totisom(x)
        rep.check("higher homology vanishes", not tr.failing_degrees, str(tr.failing_degrees or ""))
        rep.check("H0(Tot x) is H0^S(x)", tr.h0_iso)


def cmd_homology(doc, args, rep):
    K = _need(doc, "complex", args.name)
    rep.check("d squares to zero", K.is_complex())
    rep.data["homology"] = _homology_table(K)


def cmd_tq(doc, args, rep):
    f = _need(doc, "cubemap", args.name)
    params = _optional(doc, "params", args.params)
    fs = _optional(doc, "sequence", args.sequence)
    try:
        ok = is_total_quasi_iso(f, params, fs, check=params is not None and fs is not None)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rep.check("total quasi-isomorphism", ok)


def _certificate_data(rep, cert, ring):
    rep.data["certificate"] = _standalone(ring, ("Z", "certificate", cert))
    rep.data["tags"] = [f"{o} {t}" for o, t in cert.tags()]
    rep.data["header"] = {k: cert.header[k] for k in sorted(cert.header)}


def cmd_zigzag(doc, args, rep):
    X = _need(doc, "double", args.name)
    cert = wt.zigzag_to_tot(X, verify=False)
    bad = cert.failures()
    rep.check("every step verifies", not bad, f"failing steps {bad}" if bad else "")
    m = cert.header.get("outer_degree")
    if m is not None:
        target = wt.DoubleComplex.concentrated(shift(wt.tot_outer(X), m), m)
        rep.check("endpoint is the shifted total complex", cert.end == target)
    _certificate_data(rep, cert, X.ring)


def cmd_cone_compare(doc, args, rep):
    F = _need(doc, "doublemap", args.name)
    cert = wt.cone_compare(F, verify=False)
    bad = cert.failures()
    rep.check("every step verifies", not bad, f"failing steps {bad}" if bad else "")
    _certificate_data(rep, cert, F.domain.ring)


def cmd_solid(doc, args, rep):
    F = _need(doc, "doublemap", args.name)
    try:
        cert = wt.solid_witness(F)
    except PreconditionError as exc:
        raise UsageError(str(exc)) from None
    rep.check("every step verifies", cert.verify())
    rep.check("endpoint is levelwise acyclic", cert.end.is_levelwise_acyclic())
    _certificate_data(rep, cert, F.domain.ring)


def cmd_wgp(doc, args, rep):
    x = _need(doc, "cube", args.name)
    fs = _optional(doc, "sequence", args.sequence)
    try:
        w = wgp_check(x, fs, args.bound)
    except Inconclusive as exc:
        rep.check("koszul cube", None, str(exc))
        return
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rep.check("quotient is a chain map", w.chain_map)
    rep.check("higher homology vanishes", w.higher_vanish)
    rep.check("H0 isomorphism", w.h0_iso)
    rep.check("agrees with the totalization report", w.totisom_agrees)


def cmd_quasi_split(doc, args, rep):
    x = _need(doc, "cube", args.name)
    fs = _need(doc, "sequence", args.sequence)
    params = _optional(doc, "params", args.params) or MMParams(frozenset(), tuple(x.directions), 0)
    try:
        q = quasi_split_witness(x, params, fs, twist_seed=args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rep.check("objectwise short exact", q.exact, f"offending {q.offending}" if q.offending else "")
    rep.check("H0^V(r(x)) = 0", q.r_trivial)
    rep.check("r(x) lies in the expected category", q.r_member)
    rep.check("alpha and beta exist and are unique", q.alpha_beta)
    rep.data["witness"] = _standalone(x.ring, ("r", "cube", q.r), ("s", "cube", q.s),
                                      ("A", "cubemap", q.A), ("C", "cubemap", q.C))


def cmd_gb(doc, args, rep):
    gens = _need(doc, "ideal", args.name)
    R = doc.ring
    if not hasattr(R, "ngens"):
        raise UsageError("gb needs a polynomial ring over a field")
    I = Ideal(R, gens)
    rep.data["groebner_basis"] = [R.format(g) for g in I.groebner]
    members = {}
    for name in doc.names("poly"):
        members[name] = I.contains(doc.get(name))
    rep.data["membership"] = members
    rep.check("basis generates the ideal", I == Ideal(R, I.groebner))


def cmd_snf(doc, args, rep):
    M = _need(doc, "matrix", args.name)
    R = doc.ring
    try:
        U, D, V = smith_normal_form(M, R)
    except (TypeError, ValueError, NotImplementedError) as exc:
        raise UsageError(f"snf: {exc}") from None
    rep.check("U M V = D", mx.equal(mx.mul(R, mx.mul(R, U, M), V), D))
    diag = [D[i, i] for i in range(min(D.shape)) if D[i, i]]
    rep.check("diagonal entries divide successively", all(R.divides(a, b) for a, b in zip(diag, diag[1:])))
    rep.data["invariant_factors"] = [R.format(a) for a in diag]
    rep.data["smith_form"] = _standalone(R, ("U", "matrix", U), ("D", "matrix", D), ("V", "matrix", V))


def cmd_verify(doc, args, rep):
    cert = _need(doc, "certificate", args.name)
    bad = cert.failures()
    rep.check("every step verifies", not bad, f"failing steps {bad}" if bad else "")
    chained = all(a.right == b.left for a, b in zip(cert.steps, cert.steps[1:]))
    ends = not cert.steps or (cert.steps[0].left == cert.start and cert.steps[-1].right == cert.end)
    rep.check("steps form a chain from start to end", chained and ends)


def cmd_suite(doc, args, rep):
    cfg = {}
    if doc is not None:
        cfg = dict(_optional(doc, "suite", args.name) or {})
    seed = args.seed if args.seed is not None else cfg.pop("seed", 0)
    cfg.pop("seed", None)
    count = args.count if args.count is not None else cfg.pop("count", 10)
    cfg.pop("count", None)
    budget = args.budget if args.budget is not None else cfg.pop("budget", None)
    cfg.pop("budget", None)
    unknown = [k for k in cfg if k not in PROPERTIES]
    if unknown:
        raise UsageError(f"unknown suite keys {unknown}")
    props = args.property or None
    if props:
        missing = [p for p in props if p not in PROPERTIES]
        if missing:
            raise UsageError(f"unknown properties {missing}; known: {', '.join(PROPERTIES)}")
    if count < 0:
        raise UsageError("--count must be non-negative")
    rep.seed = seed
    records, tallies, exceeded = run_suite(seed=seed, count=count, properties=props, counts=cfg,
                                           mutate=args.mutate, budget=budget)
    for p, t in tallies.items():
        if t["total"] == 0:
            continue
        result = False if t["fail"] else (None if t["inconclusive"] else True)
        rep.check(p, result, f"{t['pass']}/{t['total']} pass")
    if exceeded:
        rep.check("budget", None, f"stopped after {len(records)} samples")
    rep.data["tallies"] = tallies
    rep.data["records"] = records if args.records else [r for r in records if r["status"] != "pass"]
    if args.mutate:
        rep.data["mutation"] = args.mutate


COMMANDS = {
    "check-koszul": cmd_check_koszul,
    "check-admissible": cmd_check_admissible,
    "tot": cmd_tot,
    "homology": cmd_homology,
    "tq": cmd_tq,
    "zigzag": cmd_zigzag,
    "cone-compare": cmd_cone_compare,
    "solid": cmd_solid,
    "wgp": cmd_wgp,
    "quasi-split": cmd_quasi_split,
    "gb": cmd_gb,
    "snf": cmd_snf,
    "suite": cmd_suite,
    "verify": cmd_verify,
}


# ---------------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="koszulkit", description="Exact checks for Koszul cubes and weak equivalences.")
    p.add_argument("command", choices=sorted(COMMANDS), help="what to run")
    p.add_argument("--doc", help="input document (a report produced with --format structured is also accepted)")
    p.add_argument("--seed", type=int, help="random seed (suite, quasi-split twist)")
    p.add_argument("--count", type=int, help="samples per suite property")
    p.add_argument("--bound", type=int, default=DEFAULT_BOUND, help="search bound for power annihilation")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--format", choices=("text", "structured"), default="text")
    p.add_argument("--name", help="entity to use (default: first of the required kind)")
    p.add_argument("--sequence", help="sequence entity name")
    p.add_argument("--params", help="params entity name")
    p.add_argument("--property", action="append", help="suite property to run (repeatable)")
    p.add_argument("--mutate", choices=("cone-sign",), help="inject a known bug into the suite run")
    p.add_argument("--budget", type=float, help="suite time budget in seconds")
    p.add_argument("--records", action="store_true", help="include passing suite records")
    p.add_argument("--timings", action="store_true", help="include wall-clock timings (breaks byte reproducibility)")
    return p


def load_input(path):
    """Parse a document file, or pull the embedded document out of a JSON report."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise UsageError(f"{path}: invalid JSON: {exc}") from None
        embedded = data.get("data", {})
        for key in ("certificate", "witness", "smith_form", "tot"):
            if key in embedded:
                return parse_text(embedded[key])
        raise UsageError(f"{path}: report carries no embedded document")
    return parse_text(text)


def run_command(doc, command, args):
    """Run ``command`` on ``doc`` and return a :class:`Report`."""
    if command not in COMMANDS:
        raise UsageError(f"unknown command {command!r}")
    digest = doc.digest() if doc is not None else None
    rep = Report(command, digest, args.seed)
    start = time.perf_counter()
    try:
        COMMANDS[command](doc, args, rep)
    except Inconclusive as exc:
        rep.check("bound", None, str(exc))
    if getattr(args, "timings", False):
        rep.timings = {"seconds": round(time.perf_counter() - start, 6)}
    if digest is None and command == "suite":
        blob = json.dumps({"seed": rep.seed, "count": args.count, "properties": args.property,
                           "mutate": args.mutate}, sort_keys=True)
        rep.digest = hashlib.sha256(blob.encode()).hexdigest()
    return rep


def _emit(rep, args):
    text = rep.to_json() if args.format == "structured" else rep.to_text()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    doc = None
    try:
        if args.doc:
            doc = load_input(args.doc)
        rep = run_command(doc, args.command, args)
    except (UsageError, ParseError, OSError, ValueError, KeyError) as exc:
        rep = Report(args.command, seed=args.seed)
        rep.forced = "error"
        rep.data["error"] = str(exc)
        _emit(rep, args)
        print(f"koszulkit: error: {exc}", file=sys.stderr)
        return EXIT["error"]
    _emit(rep, args)
    return EXIT[rep.outcome]


if __name__ == "__main__":
    sys.exit(main())
