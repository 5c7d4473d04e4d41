"""Command-line front end.

Input documents are JSON::

    {"field": 2,
     "ring": {"vars": ["x", "y"], "relations": ["x*y"]},
     "modules": {"M": {"kind": "cokernel", "twists": [0], "relations": [["x+y"]]}}}

``ring`` may instead be ``{"stanley_reisner": {"vertices": 3, "edges": [[1, 2], [2, 3]]}}``.
Module kinds: ``residue_field``, ``free`` (``twists``), ``cokernel`` (``twists``,
``relations`` as one polynomial per generator), ``veronese-piece`` (``of``,
``d``, ``piece``), ``pushforward`` (``of``, ``e``, ``piece`` or ``"all"``) and
``stanley_reisner`` (the ring itself as a module).  The names ``R`` and ``k``
are always defined.

Homomorphism documents: ``{"order": 2, "target": "self", "images": ["x^2", "y^2"]}``;
``target`` may be an inline ring description.
"""

import argparse
import csv
import io
import json
import sys
import time
from fractions import Fraction

from . import __version__
from .errors import GradedRegError, InputError, ParseError, WindowError
from .exactlinalg import ExactMatrix, FieldSpec
from .gradedcat import (free_module, pushforward, quotient_module, residue_field,
                        veronese_algebra, veronese_piece)
from .polyring import RingDesc, build_algebra_table, stanley_reisner_ring
from .regmorph import betti_over_hom, composition_tower, frobenius_hom, hom_from_polynomials
from .resolve import betti_table, is_koszul, regularity, render_rational, resolve
from .suites import verify_suite

EXIT_OK, EXIT_SUITE, EXIT_INPUT, EXIT_WINDOW = 0, 1, 2, 3


# ---------------------------------------------------------------------------
# input documents


def _need(doc, key, where):
    if not isinstance(doc, dict) or key not in doc:
        raise ParseError(f"{where}: missing field '{key}'")
    return doc[key]


def parse_ring(doc, field, where="ring"):
    if not isinstance(doc, dict):
        raise ParseError(f"{where}: expected an object")
    if "stanley_reisner" in doc:
        sr = doc["stanley_reisner"]
        n = _need(sr, "vertices", f"{where}.stanley_reisner")
        edges = [tuple(e) for e in _need(sr, "edges", f"{where}.stanley_reisner")]
        return stanley_reisner_ring(field, n, edges, sr.get("names"))
    names = _need(doc, "vars", where)
    if isinstance(names, str):
        names = [v.strip() for v in names.split(",")] if "," in names else list(names)
    rels = doc.get("relations", [])
    try:
        return RingDesc.parse(field, names, rels, doc.get("degree", 1))
    except InputError as e:
        raise type(e)(f"{where}.relations: {e}") from e


def _parse_field(doc):
    p = doc.get("field", 2)
    if isinstance(p, str) and p.strip().upper() in ("Q", "QQ"):
        p = 0
    try:
        return FieldSpec(int(p))
    except (TypeError, ValueError) as e:
        raise ParseError(f"field: {e}") from e


def _piece_factor(spec, p):
    kind = spec.get("kind")
    if kind == "pushforward":
        return p ** int(spec.get("e", 1))
    if kind == "veronese-piece":
        return int(spec.get("d", 2))
    return 1


class InputDocument:
    """A parsed input file: a ring table plus lazily built named modules."""

    def __init__(self, doc, j_max, extra_factor=1):
        if not isinstance(doc, dict):
            raise ParseError("document: expected a JSON object")
        self.raw = doc
        self.field = _parse_field(doc)
        self.ring_desc = parse_ring(_need(doc, "ring", "document"), self.field)
        self.specs = dict(doc.get("modules", {}))
        factor = max([extra_factor] + [_piece_factor(s, self.field.characteristic or 1)
                                       for s in self.specs.values() if isinstance(s, dict)])
        self.cap = factor * (j_max + 2)
        self.ring = build_algebra_table(self.ring_desc, self.cap)
        self._mods = {}

    def module(self, name):
        if name in self._mods:
            return self._mods[name]
        if name not in self.specs:
            if name == "R":
                return self.ring.as_module()
            if name == "k":
                return residue_field(self.ring)
            raise ParseError(f"modules: no module named '{name}'")
        m = self._build(name, self.specs[name])
        self._mods[name] = m
        return m

    def _poly(self, text, where):
        try:
            return self.ring_desc.poly(text)
        except ParseError as e:
            raise ParseError(f"{where}: {e}") from e

    def _build(self, name, spec):
        where = f"modules.{name}"
        kind = _need(spec, "kind", where)
        A = self.ring
        if kind == "residue_field":
            return residue_field(A)
        if kind == "stanley_reisner":
            return A.as_module()
        if kind in ("free", "cokernel"):
            twists = sorted(spec.get("twists", [0]))
            F = free_module(A, twists)
            if kind == "free":
                return F
            gens = []
            for r, rel in enumerate(_need(spec, "relations", where)):
                if len(rel) != len(twists):
                    raise ParseError(f"{where}.relations[{r}]: need {len(twists)} entries")
                polys = [self._poly(t, f"{where}.relations[{r}]") for t in rel]
                degs = {p.degree() * A.g + a for p, a in zip(polys, twists) if not p.is_zero()}
                if len(degs) != 1:
                    raise ParseError(f"{where}.relations[{r}]: entries are not of one total degree")
                deg = degs.pop()
                if deg > F.cap:
                    raise WindowError(f"{where}.relations[{r}]: degree {deg} beyond cap {F.cap}")
                offs = F.offsets(deg)
                vec = ExactMatrix.zeros(self.field, F.dim(deg), 1)
                for k, (p, a) in enumerate(zip(polys, twists)):
                    if p.is_zero():
                        continue
                    e = A.element(p, deg - a).vec
                    below = ExactMatrix.zeros(self.field, F.dim(deg) - offs[k] - e.nrows, 1)
                    vec = vec + ExactMatrix.vstack(self.field, [ExactMatrix.zeros(self.field, offs[k], 1), e, below], 1)
                gens.append((deg, vec))
            return quotient_module(F, gens, name=name) if gens else F
        if kind == "veronese-piece":
            base = self.module(spec.get("of", "R"))
            d = int(spec.get("d", 2))
            return veronese_piece(base, d, int(spec.get("piece", 0)), veronese_algebra(A, d))
        if kind == "pushforward":
            base = self.module(spec.get("of", "R"))
            h = frobenius_hom(A, int(spec.get("e", 1)))
            piece = spec.get("piece", "all")
            pieces = None if piece == "all" else [int(piece)]
            return pushforward(h, base, pieces).module
        raise ParseError(f"{where}.kind: unknown kind '{kind}'")


def load_json(path, what):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise ParseError(f"{what}: cannot read {path}: {e.strerror}") from e
    except json.JSONDecodeError as e:
        raise ParseError(f"{what}: invalid JSON in {path}: {e}") from e


def load_hom(doc, inp):
    order = int(_need(doc, "order", "hom"))
    target_doc = doc.get("target", "self")
    if target_doc == "self":
        target = inp.ring
    else:
        desc = parse_ring(target_doc, inp.field, "hom.target")
        target = build_algebra_table(desc, inp.cap * order)
    images = _need(doc, "images", "hom")
    try:
        polys = [target.ring.poly(t) for t in images]
    except ParseError as e:
        raise ParseError(f"hom.images: {e}") from e
    h = hom_from_polynomials(inp.ring, target, polys, name=doc.get("name", "phi"))
    if h.order != order:
        raise ParseError(f"hom.order: declared {order}, images have order {h.order}")
    return h


# ---------------------------------------------------------------------------
# rendering


def rational_json(v):
    if v is None:
        return {"num": None, "den": None, "text": "-inf"}
    v = Fraction(v)
    return {"num": v.numerator, "den": v.denominator, "text": render_rational(v)}


def rational_from_json(d):
    return None if d["num"] is None else Fraction(d["num"], d["den"])


def render_betti_text(entries):
    """Columns are homological degrees ``i``; rows are strands ``t = j - i``."""
    if not entries:
        return "(zero)"
    cols = range(min(i for i, _ in entries), max(i for i, _ in entries) + 1)
    strands = range(min(j - i for i, j in entries), max(j - i for i, j in entries) + 1)
    cells = {(t, i): str(entries.get((i, i + t), 0) or ".") for t in strands for i in cols}
    w = max([len(str(i)) for i in cols] + [len(c) for c in cells.values()])
    lw = max(len(f"{t}:") for t in strands)
    lines = [" " * lw + "".join(f" {i:>{w}}" for i in cols)]
    for t in strands:
        lines.append(f"{t}:".rjust(lw) + "".join(f" {cells[(t, i)]:>{w}}" for i in cols))
    return "\n".join(lines)


def betti_json(entries):
    return [{"i": i, "j": j, "beta": v} for (i, j), v in sorted(entries.items())]


def verdict_json(v):
    return {"reg": rational_json(v.value), "boundary_i": v.boundary_i, "boundary_j": v.boundary_j,
            "boundary_attained": v.boundary_attained, "termination_certified": v.termination_certified,
            "witness": list(v.witness) if v.witness else None}


def verdict_text(v, label="reg"):
    flags = []
    if v.termination_certified:
        flags.append("certified")
    if v.boundary_i:
        flags.append("boundary_i")
    if v.boundary_j:
        flags.append("boundary_j")
    wit = f" witness=({v.witness[0]},{v.witness[1]})" if v.witness else ""
    return f"{label} = {v.render()}{wit}" + (f" [{', '.join(flags)}]" if flags else "")


def _flatten(prefix, obj, rows):
    if isinstance(obj, dict) and set(obj) == {"num", "den", "text"}:
        rows.append((prefix, obj["text"]))
    elif isinstance(obj, dict):
        for k, v in obj.items():
            _flatten(f"{prefix}.{k}" if prefix else k, v, rows)
    elif isinstance(obj, list) and obj and all(isinstance(x, dict) and set(x) == {"i", "j", "beta"} for x in obj):
        for x in obj:
            rows.append((f"{prefix}[{x['i']},{x['j']}]", x["beta"]))
    elif isinstance(obj, list):
        for n, v in enumerate(obj):
            _flatten(f"{prefix}[{n}]", v, rows)
    else:
        rows.append((prefix, obj))


def render_csv(result):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if "betti" in result and set(result) <= {"betti", "module"}:
        w.writerow(["i", "j", "beta"])
        for e in result["betti"]:
            w.writerow([e["i"], e["j"], e["beta"]])
    else:
        rows = []
        _flatten("", result, rows)
        w.writerow(["key", "value"])
        for k, v in rows:
            w.writerow([k, "" if v is None else v])
    return buf.getvalue().rstrip("\n")


# ---------------------------------------------------------------------------
# commands; each returns (result payload, text rendering, exit code)


def _document(args, extra_factor=1):
    """``extra_factor`` scales the ring cap; a callable receives the characteristic."""
    if not args.input:
        raise ParseError("--input: an input document is required")
    doc = load_json(args.input, "input")
    if callable(extra_factor):
        extra_factor = extra_factor(_parse_field(doc if isinstance(doc, dict) else {}).characteristic)
    return InputDocument(doc, args.jmax, extra_factor)


def cmd_betti(args):
    inp = _document(args)
    m = inp.module(args.module)
    b = betti_table(resolve(m, args.imax, args.jmax))
    payload = {"module": args.module, "betti": betti_json(b.nonzero())}
    return payload, render_betti_text(b.nonzero()), EXIT_OK


def cmd_reg(args):
    inp = _document(args)
    m = inp.module(args.module)
    b = betti_table(resolve(m, args.imax, args.jmax))
    b.gd = m.algebra.g
    v = regularity(b)
    return {"module": args.module, **verdict_json(v)}, verdict_text(v), EXIT_OK


def cmd_koszul(args):
    inp = _document(args)
    v = is_koszul(inp.ring, args.imax, args.jmax)
    wit = list(v.witness) if v.witness else None
    text = v.label + (f" witness=({wit[0]},{wit[1]})" if wit else "")
    return {"verdict": v.label, "witness": wit}, text, EXIT_OK


def _piece_report(label, m, args):
    dims = [m.dim(j) for j in range(0, min(args.jmax, m.cap) + 1)]
    while dims and dims[-1] == 0:
        dims.pop()
    b = betti_table(resolve(m, args.imax, args.jmax))
    b.gd = m.algebra.g
    v = regularity(b)
    payload = {"piece": label, "dims": dims, "betti": betti_json(b.nonzero()), **verdict_json(v)}
    text = "\n".join([f"{label}: dims {tuple(dims)}", render_betti_text(b.nonzero()), verdict_text(v)])
    return payload, text


def _pieces(arg, n):
    if arg in (None, "all"):
        return list(range(n))
    try:
        return [int(arg)]
    except ValueError as e:
        raise ParseError(f"--piece: expected an index or 'all', got {arg!r}") from e


def cmd_veronese(args):
    inp = _document(args, extra_factor=args.d)
    m = inp.module(args.module)
    V = veronese_algebra(inp.ring, args.d)
    out, texts = [], []
    for i in _pieces(args.piece, args.d):
        p, t = _piece_report(f"V_{i}", veronese_piece(m, args.d, i, V), args)
        out.append(p)
        texts.append(t)
    return {"module": args.module, "d": args.d, "pieces": out}, "\n\n".join(texts), EXIT_OK


def cmd_frobenius(args):
    if args.e < 1:
        raise InputError("--e: must be positive")
    inp = _document(args, extra_factor=lambda p: max(p, 1) ** args.e)
    h = frobenius_hom(inp.ring, args.e)
    m = inp.module(args.module)
    out, texts = [], []
    for i in _pieces(args.piece, h.order):
        piece = pushforward(h, m, [i]).module
        pl, t = _piece_report(f"V_{i}", piece, args)
        out.append(pl)
        texts.append(t)
    return {"module": args.module, "q": h.order, "pieces": out}, "\n\n".join(texts), EXIT_OK


def cmd_reg_hom(args):
    if not args.hom:
        raise ParseError("--hom: a homomorphism document is required")
    hdoc = load_json(args.hom, "hom")
    inp = _document(args)
    h = load_hom(hdoc, inp)
    if hdoc.get("target", "self") == "self":
        m = inp.module(args.module)
    elif args.module in ("R", None):
        m = h.target.as_module()
    else:
        raise ParseError("--module: modules over an inline target other than R are not supported")
    b = betti_over_hom(h, m, args.imax, args.jmax)
    v = regularity(b, h.dg)
    payload = {"module": args.module, "order": h.order, "dg": h.dg, "betti": betti_json(b.nonzero()),
               **verdict_json(v)}
    text = "\n".join([render_betti_text(b.nonzero()), verdict_text(v, f"reg_{h.name}")])
    return payload, text, EXIT_OK


def cmd_tower(args):
    inp = _document(args)
    psi = frobenius_hom(inp.ring, args.e)
    m = inp.module(args.module)
    tower = composition_tower(psi, m, steps=args.steps, i_max=args.imax, j_max=args.jmax)
    levels, texts = [], []
    for L in tower.levels:
        hom = {f"{i},{j}": d for (i, j), d in sorted(L.homology.items())}
        levels.append({"level": L.index, "order": L.hom.order, "homology": hom, **verdict_json(L.verdict)})
        texts.append(f"level {L.index} (order {L.hom.order}): homology {hom}; " + verdict_text(L.verdict))
    return {"module": args.module, "e": args.e, "levels": levels}, "\n".join(texts), EXIT_OK


def cmd_verify(args):
    reps = verify_suite(args.suite, (args.imax, args.jmax))
    reps = reps if isinstance(reps, list) else [reps]
    out, lines = [], []
    for r in reps:
        checks = []
        for c in r.checks:
            lhs, rhs = _plain(c.lhs), _plain(c.rhs)
            checks.append({"name": c.name, "lhs": lhs, "rhs": rhs, "relation": c.relation, "passed": c.passed,
                           "certified": c.certified})
            mark = "PASS" if c.passed else "FAIL"
            cert = "" if c.certified else " (uncertified)"
            lines.append(f"  {mark} {c.name}: {_show(lhs)} {c.relation} {_show(rhs)}{cert}")
        out.append({"suite": r.name, "passed": r.passed, "checks": checks})
        lines.insert(len(lines) - len(r.checks), f"{r.name}: {'pass' if r.passed else 'FAIL'}")
    ok = all(r.passed for r in reps)
    return {"suite": args.suite, "passed": ok, "reports": out}, "\n".join(lines), EXIT_OK if ok else EXIT_SUITE


def _plain(x):
    if isinstance(x, Fraction):
        return rational_json(x)
    if isinstance(x, dict):
        return betti_json(x)
    return x


def _show(x):
    if isinstance(x, dict) and "text" in x:
        return x["text"]
    if isinstance(x, list):
        return f"<{len(x)} entries>"
    return str(x)


COMMANDS = {
    "betti": cmd_betti, "reg": cmd_reg, "koszul": cmd_koszul, "veronese": cmd_veronese,
    "frobenius": cmd_frobenius, "reg-hom": cmd_reg_hom, "tower": cmd_tower, "verify": cmd_verify,
}


def build_parser():
    ap = argparse.ArgumentParser(prog="gradedreg", description="Betti tables and regularity over graded algebras")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--input", help="input document (JSON)")
        p.add_argument("--module", default="R", help="module name inside the input document")
        p.add_argument("--imax", type=int, default=8)
        p.add_argument("--jmax", type=int, default=12)
        p.add_argument("--format", choices=("text", "json", "csv"), default="text")
        return p

    for name in ("betti", "reg", "koszul"):
        common(sub.add_parser(name))
    p = common(sub.add_parser("veronese"))
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--piece", default="all")
    p = common(sub.add_parser("frobenius"))
    p.add_argument("--e", type=int, default=1)
    p.add_argument("--piece", default="all")
    p = common(sub.add_parser("reg-hom"))
    p.add_argument("--hom")
    p = common(sub.add_parser("tower"))
    p.add_argument("--e", type=int, default=1)
    p.add_argument("--steps", type=int, default=3)
    p.set_defaults(imax=3)
    p = common(sub.add_parser("verify"))
    p.add_argument("--suite", default="all")
    return ap


def report_document(args, payload, elapsed):
    return {"command": args.command, "argv": {k: v for k, v in sorted(vars(args).items()) if k != "command"},
            "caps": {"i_max": args.imax, "j_max": args.jmax}, "result": payload, "version": __version__,
            "elapsed_seconds": round(elapsed, 3)}


def run(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        payload, text, code = COMMANDS[args.command](args)
    except InputError as e:
        print(f"input error: {e}", file=err)
        return EXIT_INPUT
    except WindowError as e:
        print(f"window error: {e}", file=err)
        return EXIT_WINDOW
    except GradedRegError as e:
        print(f"error: {e}", file=err)
        return EXIT_INPUT
    if args.format == "json":
        print(json.dumps(report_document(args, payload, time.perf_counter() - t0), indent=2), file=out)
    elif args.format == "csv":
        print(render_csv(payload), file=out)
    else:
        print(text, file=out)
    return code


def main(argv=None):
    sys.exit(run(argv))
