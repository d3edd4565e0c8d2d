"""Command line front end: term expressions in, JSON documents out.

Every invocation writes a single JSON document to stdout, except
`realize`, which keeps the plain index/code line format so fixtures can
be diffed.  Diagnostics go to stderr with a caret under the offending
span.  Exit codes: 0 for a completed command, 1 for a diagnostic, 2 when
the result itself is a refusal (an impossible gluing, a search NotFound).

Grammar of expressions:

    expr   := term ('+' term)*
    term   := factor ('*' factor)*
    factor := 'w' | 'eta' | 'zeta' | NAT
            | 'rev(' expr ')' | 'z^(' expr ')' | 'w^(' expr ')'
            | '(' expr ')'

`A * B` is the product with B as index, so `w*2` reads as omega doubled,
not two omegas interleaved.  `zeta` abbreviates `z^(1)`; `w^(e)` expands
through the normal form of the ordinal e and is rejected when e is not
an ordinal or needs an infinite exponent tower.
"""

from __future__ import annotations

import argparse
import hashlib
import itertools
import json
import os
import random
import sys
from typing import List, Optional, Tuple

from .cnf import CNF, format_cnf, omega_power
from .coded import CodedOrder, realize
from .epi import (ConvexPart, EpiWitness, Piece, check_epi_on_prefix,
                  def_pieces, family_mash, lk_onto_l, prod_epi)
from .oracle import chain, emb_count, epi_count, quotient_epi_fin
from .search import NotFound, epi_search
from .terms import (ETA, OMEGA, Fin, OrderTerm, Prod, Rev, Sum, ZetaPow,
                    classify, cnf_to_term, format_term, ordinal_value,
                    reduce_map, sts_verdict)
from .zeta_epi import revord_plus_ord_epi, zeta_segment_epi


class Diagnostic(Exception):
    """A user-facing error, optionally pointing into the source text."""

    def __init__(self, message: str, text: str = "",
                 span: Optional[Tuple[int, int]] = None):
        super().__init__(message)
        self.message = message
        self.text = text
        self.span = span


# ---------------------------------------------------------------------------
# expression parser

_SYMS = "+*^()"


def _tokens(text: str):
    out = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            out.append(("nat", text[i:j], i, j))
            i = j
            continue
        if ch.isalpha():
            j = i
            while j < n and text[j].isalpha():
                j += 1
            out.append(("name", text[i:j], i, j))
            i = j
            continue
        if ch in _SYMS:
            out.append((ch, ch, i, i + 1))
            i += 1
            continue
        raise Diagnostic(f"stray character {ch!r}", text, (i, i + 1))
    out.append(("end", "", n, n))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokens(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind: str, what: str):
        t = self.take()
        if t[0] != kind:
            raise Diagnostic(f"expected {what}", self.text, (t[2], t[3]))
        return t

    def expr(self) -> OrderTerm:
        parts = [self.term()]
        while self.peek()[0] == "+":
            self.take()
            parts.append(self.term())
        return parts[0] if len(parts) == 1 else Sum(tuple(parts))

    def term(self) -> OrderTerm:
        f = self.factor()
        while self.peek()[0] == "*":
            self.take()
            f = Prod(f, self.factor())
        return f

    def factor(self) -> OrderTerm:
        kind, val, a, b = self.take()
        if kind == "nat":
            n = int(val)
            if n == 0:
                raise Diagnostic("no term denotes the empty order",
                                 self.text, (a, b))
            return Fin(n)
        if kind == "name":
            if val == "w":
                if self.peek()[0] == "^":
                    return self._omega_power()
                return OMEGA
            if val == "eta":
                return ETA
            if val == "zeta":
                return ZetaPow(Fin(1))
            if val == "rev":
                self.expect("(", "'(' after rev")
                e = self.expr()
                self.expect(")", "closing ')'")
                return Rev(e)
            if val == "z":
                self.expect("^", "'^' after z")
                self.expect("(", "'(' after z^")
                e = self.expr()
                self.expect(")", "closing ')'")
                return ZetaPow(e)
            raise Diagnostic(f"unknown name {val!r}", self.text, (a, b))
        if kind == "(":
            e = self.expr()
            self.expect(")", "closing ')'")
            return e
        raise Diagnostic("expected a factor", self.text, (a, b))

    def _omega_power(self) -> OrderTerm:
        self.expect("^", "'^'")
        self.expect("(", "'(' after w^")
        a = self.peek()[2]
        e = self.expr()
        close = self.expect(")", "closing ')'")
        span = (a, close[2])
        v = ordinal_value(e)
        if v is None:
            raise Diagnostic("exponent does not denote an ordinal",
                             self.text, span)
        try:
            return cnf_to_term(omega_power(v))
        except ValueError as ex:
            raise Diagnostic(str(ex), self.text, span)


def parse_term(text: str) -> OrderTerm:
    """Parse an expression, raising Diagnostic with a span on bad input."""
    p = _Parser(text)
    t = p.expr()
    tok = p.peek()
    if tok[0] != "end":
        raise Diagnostic("unexpected trailing input", text,
                         (tok[2], len(text)))
    return t


def _parse_realized(text: str) -> CodedOrder:
    return realize(parse_term(text))


# ---------------------------------------------------------------------------
# witness store

def _store_dir() -> str:
    return os.environ.get("LINORDER_WITNESS_DIR", ".linorder-witnesses")


def _save_recipe(recipe: dict) -> str:
    blob = json.dumps(recipe, sort_keys=True, separators=(",", ":"))
    wid = hashlib.blake2s(blob.encode()).hexdigest()[:12]
    d = _store_dir()
    os.makedirs(d, exist_ok=True)
    with open(os.path.join(d, wid + ".json"), "w") as f:
        f.write(blob + "\n")
    return wid


def _load_recipe(wid: str) -> dict:
    path = os.path.join(_store_dir(), wid + ".json")
    if not os.path.exists(path):
        raise Diagnostic(f"unknown witness id {wid!r}")
    with open(path) as f:
        return json.load(f)


def _cnf_arg(text: str) -> CNF:
    # ordinal arguments admit zero even though no term denotes the
    # empty order
    if text.strip() == "0":
        return CNF()
    v = ordinal_value(parse_term(text))
    if v is None:
        raise Diagnostic(f"{text!r} does not denote an ordinal")
    return v


def _dict_sigma(d: dict):
    table = {int(k): v for k, v in d.items()}

    def sigma(x: int) -> int:
        if x not in table:
            raise Diagnostic(f"piece map is not defined at {x}")
        return table[x]

    return sigma


def _build_witness(recipe: dict) -> Optional[EpiWitness]:
    kind = recipe["kind"]
    if kind == "pieces":
        K = _parse_realized(recipe["k"])
        L = _parse_realized(recipe["l"])
        ps = [Piece(ConvexPart(p["src"][0], p["src"][1]),
                    ConvexPart(p["tgt"][0], p["tgt"][1]),
                    _dict_sigma(p["map"]))
              for p in recipe["pieces"]]
        return def_pieces(K, L, ps)
    if kind == "mash":
        K = _parse_realized(recipe["k"])
        L = _parse_realized(recipe["l"])
        if isinstance(recipe["family"], str):
            return family_mash(K, _parse_realized(recipe["family"]), L)
        fam = [tuple(p) for p in recipe["family"]]
        sigmas = [_dict_sigma(d) for d in recipe["maps"]]
        return family_mash(K, fam, L, sigmas)
    if kind == "lk":
        return lk_onto_l(parse_term(recipe["l"]), parse_term(recipe["k"]))
    if kind == "zeta-seg":
        gs = tuple(_cnf_arg(g) for g in recipe["gammas"])
        return zeta_segment_epi(gs, _cnf_arg(recipe["beta0"]),
                                _cnf_arg(recipe["beta1"]))
    if kind == "revord":
        return revord_plus_ord_epi(_cnf_arg(recipe["gamma"]), recipe["n"],
                                   _cnf_arg(recipe["delta"]), recipe["m"],
                                   recipe["side"])
    if kind == "prod":
        phi = _build_witness(_load_recipe(recipe["phi"]))
        if phi is None:
            raise Diagnostic("inner witness cannot be rebuilt")
        return prod_epi(parse_term(recipe["l"]), phi)
    if kind == "search":
        res = epi_search(_parse_realized(recipe["l"]),
                         _parse_realized(recipe["k"]), recipe["budget"])
        if not isinstance(res, EpiWitness):
            raise Diagnostic("stored search no longer yields a witness")
        return res
    raise Diagnostic(f"unknown witness kind {kind!r}")


# ---------------------------------------------------------------------------
# commands

def _emit(doc) -> None:
    sys.stdout.write(json.dumps(doc, separators=(",", ":")) + "\n")


def _json_arg(text: str):
    if text.startswith("@"):
        try:
            with open(text[1:]) as f:
                text = f.read()
        except OSError as ex:
            raise Diagnostic(str(ex))
    try:
        return json.loads(text)
    except json.JSONDecodeError as ex:
        raise Diagnostic(f"bad JSON argument: {ex}")


def _cmd_classify(args) -> int:
    c = classify(parse_term(args.expr))
    _emit({
        "scattered": c.scattered,
        "wellOrder": c.well_order,
        "revWellOrder": c.rev_well_order,
        "hasMin": c.has_min,
        "hasMax": c.has_max,
        "scatteredInit": c.scattered_init,
        "scatteredFinal": c.scattered_final,
        "rankUpper": None if c.rank_upper is None else format_cnf(c.rank_upper),
    })
    return 0


def _cmd_sts(args) -> int:
    v = sts_verdict(parse_term(args.expr))
    _emit({"verdict": v.outcome, "ruleTrace": list(v.rule_trace)})
    return 0


def _cmd_rank(args) -> int:
    c = classify(parse_term(args.expr))
    _emit({"rankUpper":
           None if c.rank_upper is None else format_cnf(c.rank_upper)})
    return 0


def _cmd_realize(args) -> int:
    o = _parse_realized(args.expr)
    for i, c in enumerate(itertools.islice(o.stream(), args.emit)):
        sys.stdout.write(f"{i}\t{c}\n")
    return 0


def _cmd_cmp(args) -> int:
    o = _parse_realized(args.expr)
    for c in (args.a, args.b):
        if not o.contains(c):
            raise Diagnostic(f"code {c} is not a member of {o.name}")
    _emit({"cmp": o.cmp(args.a, args.b)})
    return 0


def _cmd_build(args) -> int:
    kind = args.kind

    def need(flag: str):
        v = getattr(args, flag.replace("-", "_"))
        if v is None:
            raise Diagnostic(f"--{flag} is required for kind {kind}")
        return v

    if kind == "pieces":
        recipe = {"kind": "pieces", "k": need("k"), "l": need("l"),
                  "pieces": _json_arg(need("spec"))}
    elif kind == "mash":
        if args.family is not None:
            recipe = {"kind": "mash", "k": need("k"), "l": need("l"),
                      "family": args.family}
        else:
            spec = _json_arg(need("spec"))
            recipe = {"kind": "mash", "k": need("k"), "l": need("l"),
                      "family": spec["family"], "maps": spec["maps"]}
    elif kind == "lk":
        recipe = {"kind": "lk", "l": need("l"), "k": need("k")}
    elif kind == "zeta-seg":
        recipe = {"kind": "zeta-seg",
                  "gammas": [g.strip() for g in need("gammas").split(";")],
                  "beta0": need("beta0"), "beta1": need("beta1")}
    elif kind == "revord":
        recipe = {"kind": "revord", "gamma": need("gamma"), "n": need("n"),
                  "delta": need("delta"), "m": need("m"),
                  "side": need("side")}
    else:
        recipe = {"kind": "prod", "l": need("l"), "phi": need("phi")}

    try:
        w = _build_witness(recipe)
    except ValueError as ex:
        raise Diagnostic(str(ex))
    if w is None:
        _emit({"result": "bot"})
        return 2
    wid = _save_recipe(recipe)
    _emit({"result": "witness", "witness": wid, "provenance": w.provenance,
           "source": w.source.name, "target": w.target.name})
    return 0


def _rebuilt(wid: str) -> EpiWitness:
    try:
        w = _build_witness(_load_recipe(wid))
    except ValueError as ex:
        raise Diagnostic(str(ex))
    if w is None:
        raise Diagnostic("stored recipe no longer glues to a witness")
    return w


def _cmd_check(args) -> int:
    w = _rebuilt(args.witness)
    n_tgt = args.targets if args.targets is not None \
        else min(50, args.prefix)
    rep = check_epi_on_prefix(w, args.prefix, n_tgt, args.bound)
    _emit({
        "pairsChecked": rep.pairs_checked,
        "monotoneViolations": [list(v) for v in rep.monotone_violations],
        "targetsCovered": rep.targets_covered,
        "targetsMissed": rep.targets_missed,
        "verdict": rep.verdict,
    })
    return 0


def _cmd_eval(args) -> int:
    w = _rebuilt(args.witness)
    if not w.source.contains(args.code):
        raise Diagnostic(f"code {args.code} is not a source member")
    _emit({"value": w(args.code)})
    return 0


def _cmd_search(args) -> int:
    try:
        res = epi_search(_parse_realized(args.l), _parse_realized(args.k),
                         args.budget)
    except ValueError as ex:
        raise Diagnostic(str(ex))
    if isinstance(res, EpiWitness):
        wid = _save_recipe({"kind": "search", "l": args.l, "k": args.k,
                            "budget": args.budget})
        _emit({"result": "witness", "witness": wid,
               "provenance": res.provenance})
        return 0
    if isinstance(res, NotFound):
        _emit({"result": "notFound", "reason": res.reason})
        return 2
    _emit({"result": "exhausted", "reason": res.reason})
    return 0


def _cmd_oracle(args) -> int:
    try:
        if args.oraclecmd == "emb-count":
            _emit({"count": emb_count(chain(args.m), chain(args.n))})
        elif args.oraclecmd == "epi-count":
            _emit({"count": epi_count(chain(args.m), chain(args.n))})
        else:
            phi = {int(k): v for k, v in _json_arg(args.phi).items()}
            psi = quotient_epi_fin(chain(args.l), chain(args.k),
                                   chain(args.j), phi)
            _emit({"psi": {str(k): v for k, v in sorted(psi.items())}})
    except ValueError as ex:
        raise Diagnostic(str(ex))
    return 0


def _cmd_reduce(args) -> int:
    first = parse_term(args.expr)
    second = parse_term(args.expr2) if args.expr2 is not None else None
    try:
        image = reduce_map(args.kind, first, second)
    except ValueError as ex:
        raise Diagnostic(str(ex))
    _emit({"term": format_term(image)})
    return 0


# ---------------------------------------------------------------------------
# argument wiring

def _make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="linorder",
        description="Classify, realize, and map countable linear orders "
                    "given as terms.")
    ap.add_argument("--seed", type=int, default=None,
                    help="seed the shared RNG for reproducible fuzzing")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("classify", help="structural predicates of a term")
    p.add_argument("expr")
    p = sub.add_parser("sts", help="strong surjectivity verdict with trace")
    p.add_argument("expr")
    p = sub.add_parser("rank", help="scattered rank upper bound")
    p.add_argument("expr")
    p = sub.add_parser("realize", help="enumerate codes of the realization")
    p.add_argument("expr")
    p.add_argument("--emit", type=int, default=20,
                   help="number of index/code lines (default 20)")
    p = sub.add_parser("cmp", help="compare two member codes")
    p.add_argument("expr")
    p.add_argument("a", type=int)
    p.add_argument("b", type=int)

    pe = sub.add_parser("epi", help="build, check, evaluate, search maps")
    esub = pe.add_subparsers(dest="epicmd", required=True)
    b = esub.add_parser("build", help="construct a witness and store it")
    b.add_argument("--kind", required=True,
                   choices=["pieces", "mash", "lk", "zeta-seg", "revord",
                            "prod"])
    b.add_argument("--k", help="source term (pieces, mash, lk)")
    b.add_argument("--l", help="target term")
    b.add_argument("--spec", help="JSON or @file with pieces or family maps")
    b.add_argument("--family", help="index term for a copy family (mash)")
    b.add_argument("--gammas", help="';'-separated block exponents "
                                    "(zeta-seg)")
    b.add_argument("--beta0", help="segment base exponent (zeta-seg)")
    b.add_argument("--beta1", help="segment top exponent (zeta-seg)")
    b.add_argument("--gamma", help="reversed-part exponent (revord)")
    b.add_argument("--n", type=int, help="reversed-part coefficient")
    b.add_argument("--delta", help="ordinal-part exponent (revord)")
    b.add_argument("--m", type=int, help="ordinal-part coefficient")
    b.add_argument("--side", choices=["left", "right"],
                   help="kept summand (revord)")
    b.add_argument("--phi", help="witness id of the index epi (prod)")
    c = esub.add_parser("check", help="prefix-check a stored witness")
    c.add_argument("witness")
    c.add_argument("--prefix", type=int, default=100,
                   help="source prefix length")
    c.add_argument("--targets", type=int, default=None,
                   help="target prefix length (default min(50, prefix))")
    c.add_argument("--bound", type=int, default=5000,
                   help="evaluation budget for coverage")
    ev = esub.add_parser("eval", help="apply a stored witness to a code")
    ev.add_argument("witness")
    ev.add_argument("code", type=int)
    s = esub.add_parser("search", help="three-way search for an epi")
    s.add_argument("l", help="target term")
    s.add_argument("k", help="source term")
    s.add_argument("--budget", type=int, default=10000)

    po = sub.add_parser("oracle", help="exhaustive counts on small chains")
    osub = po.add_subparsers(dest="oraclecmd", required=True)
    for nm in ("emb-count", "epi-count"):
        q = osub.add_parser(nm)
        q.add_argument("m", type=int)
        q.add_argument("n", type=int)
    q = osub.add_parser("quotient")
    q.add_argument("l", type=int)
    q.add_argument("k", type=int)
    q.add_argument("j", type=int)
    q.add_argument("--phi", required=True,
                   help="JSON map on product codes, or @file")

    p = sub.add_parser("reduce", help="hardness reduction images")
    p.add_argument("kind", choices=["wo", "nonscat", "main"])
    p.add_argument("expr")
    p.add_argument("expr2", nargs="?")
    return ap


_HANDLERS = {
    "classify": _cmd_classify,
    "sts": _cmd_sts,
    "rank": _cmd_rank,
    "realize": _cmd_realize,
    "cmp": _cmd_cmp,
    "oracle": _cmd_oracle,
    "reduce": _cmd_reduce,
}

_EPI_HANDLERS = {
    "build": _cmd_build,
    "check": _cmd_check,
    "eval": _cmd_eval,
    "search": _cmd_search,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = _make_parser().parse_args(argv)
    if args.seed is not None:
        random.seed(args.seed)
    try:
        if args.cmd == "epi":
            return _EPI_HANDLERS[args.epicmd](args)
        return _HANDLERS[args.cmd](args)
    except Diagnostic as d:
        sys.stderr.write(f"error: {d.message}\n")
        if d.span is not None and d.text:
            a, b = d.span
            sys.stderr.write("  " + d.text + "\n")
            sys.stderr.write("  " + " " * a + "^" * max(1, b - a) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
