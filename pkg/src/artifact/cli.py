"""Command line front end: `artifact <group> <action> [options]`."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .charts import chart_A, coordinate_weights, impose_monodromy, solve_relations
from .demazure import (
    CONVENTIONS,
    PINNED_CONVENTION,
    alcove_walk,
    check_minor_extension,
    extension_exponent,
    extension_exponent_oracle,
)
from .invariants import invariant_generators, oracle_check, standard_B_k
from .loop import conjugation_oracle, iwahori_bounds
from .pipeline import (
    EXIT_FAILED,
    EXIT_OK,
    EXIT_USAGE,
    InputError,
    VerifyInput,
    parse_int_list,
    parse_mu,
    usw_chart,
    verify_theorem,
)
from .weyl import (
    ALCOVES,
    AffineWeylElement,
    ReducedWord,
    bruhat_leq,
    codim1_lower,
    length,
    lowest_alcove_presentation,
    parse_perm,
    reduced_word,
    s_w_of,
    z_star,
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def __init__(self, *a, **kw):
        kw.setdefault("allow_abbrev", False)
        super().__init__(*a, **kw)

    def error(self, message: str):  # argparse would call sys.exit(2) itself
        raise UsageError(message)


# -- parsing helpers -------------------------------------------------------------

def element_from(nu: str | None, w: str | None, n: int | None = None) -> AffineWeylElement:
    if nu is None and w is None:
        raise UsageError("an element needs --nu and/or --w")
    nu_v = parse_int_list(nu) if nu is not None else None
    size = len(nu_v) if nu_v is not None else n
    perm = parse_perm(w, size) if w is not None else None
    if nu_v is None:
        nu_v = [0] * len(perm)
    if perm is None:
        perm = parse_perm("id", len(nu_v))
    if len(perm) != len(nu_v):
        raise UsageError("--nu and --w have different sizes")
    return AffineWeylElement(tuple(nu_v), perm)


def element_spec(text: str) -> AffineWeylElement:
    """'nu/w', for instance '1,0,-1/3,2,1' or '0,0,0/id'."""
    if "/" not in text:
        raise UsageError(f"element {text!r} should look like 'nu/w'")
    nu, w = text.split("/", 1)
    return element_from(nu, w)


def load_config(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"config is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise UsageError("config must be a JSON object")
    return doc


def _field_modulus(args) -> int | None:
    fld = getattr(args, "field", "generic")
    if fld == "generic":
        return None
    if fld.startswith("fp:"):
        try:
            return int(fld[3:])
        except ValueError:
            pass
    raise UsageError(f"--field must be 'generic' or 'fp:<p>', got {fld!r}")


def _presentation(args):
    if args.mu is None or args.p is None:
        raise UsageError("--mu and --p are required")
    return lowest_alcove_presentation(parse_mu(args.mu), args.p)


# -- output ------------------------------------------------------------------------

def emit(args, doc: Any, text: str) -> None:
    if args.format == "json":
        out = json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    else:
        out = text if text.endswith("\n") else text + "\n"
    if args.out:
        Path(args.out).write_text(out)
    else:
        sys.stdout.write(out)


def _grid(rows: list[list[str]]) -> str:
    return "\n".join(" ".join(f"{s:>8}" for s in row) for row in rows)


# -- commands ----------------------------------------------------------------------

def cmd_weyl(args) -> int:
    alcove = args.alcove
    if args.action == "mult":
        x, y = element_spec(args.x), element_spec(args.y)
        z = x * y
        emit(args, {"product": z.to_json(), "str": str(z)}, str(z))
        return EXIT_OK
    if args.action == "bruhat":
        x, y = element_spec(args.x), element_spec(args.y)
        le = bruhat_leq(x, y, alcove)
        emit(args, {"leq": le, "alcove": alcove}, "true" if le else "false")
        return EXIT_OK
    x = element_from(args.nu, args.w)
    if args.action == "length":
        ell = length(x, alcove)
        emit(args, {"length": ell, "alcove": alcove, "element": x.to_json()}, str(ell))
    elif args.action == "word":
        w = reduced_word(x, alcove)
        text = " ".join(f"s{a}" if a else "s0" for a in w.letters) or "(empty)"
        if w.omega:
            text += f" rho^{w.omega}"
        emit(args, w.to_json(), text)
    else:  # codim1
        items = codim1_lower(reduced_word(x, alcove))
        doc = [{"element": c.element.to_json(), "deletions": list(c.deletions)} for c in items]
        text = "\n".join(f"{c.element}  deletions {list(c.deletions)}" for c in items) or "(none)"
        emit(args, doc, text)
    return EXIT_OK


def cmd_bounds(args) -> int:
    t = element_from(args.nu, args.w)
    b = iwahori_bounds(t)
    doc = {"element": t.to_json(), "bounds": b.to_text()}
    text = _grid(b.to_text())
    if args.oracle:
        o = conjugation_oracle(t, args.truncation)
        agree = o.to_text() == b.to_text()
        doc["oracle_agrees"] = agree
        text += f"\noracle agrees: {agree}"
        emit(args, doc, text)
        return EXIT_OK if agree else EXIT_FAILED
    emit(args, doc, text)
    return EXIT_OK


def cmd_chart(args) -> int:
    pres = _presentation(args)
    modulus = _field_modulus(args)
    ch = chart_A([z_star(x) for x in pres.w_tilde], modulus=modulus)
    if args.action == "monodromy":
        s = s_w_of(pres)
        ch = impose_monodromy(ch, s, pres.omega if modulus else None, solve=False)
        if not args.no_solve:
            ch = solve_relations(ch)
        ch = coordinate_weights(ch, [x.w for x in pres.w_tilde], s)
    ring = ch.ring
    lines = [f"chart {ch.kind}: n = {ch.n}, f = {ch.f}, coordinates {', '.join(ch.names)}"]
    for j, t in enumerate(ch.templates):
        lines.append(f"T_{j} =")
        lines.append(_grid([[str(e) for e in row] for row in t.rows]))
    for r in ch.relations:
        lines.append(f"relation: {ring.fmt(r)} = 0")
    for name, expr in ch.eliminated:
        lines.append(f"eliminated: {name} = {ring.fmt(expr)}")
    doc = ch.to_json()
    doc["metadata"] = {k: v for k, v in doc["metadata"].items() if _jsonable(v)}
    emit(args, doc, "\n".join(lines))
    return EXIT_OK


def _jsonable(v) -> bool:
    try:
        json.dumps(v)
    except TypeError:
        return False
    return True


def cmd_invariants(args) -> int:
    if args.chart == "B":
        if args.k is None or args.n is None:
            raise UsageError("--chart B needs --k and --n")
        ch = standard_B_k(args.k, args.f, args.n)
    else:
        ch = usw_chart(_presentation(args), "fp" if _field_modulus(args) else "generic")
    pres = invariant_generators(ch)
    doc = pres.to_json()
    text = pres.ring_string
    code = EXIT_OK
    if args.oracle:
        missing = oracle_check(ch, pres, args.radius)
        doc["oracle_missing"] = [str(m) for m in missing]
        text += f"\nbox oracle (radius {args.radius}): {'agrees' if not missing else 'MISSING ' + ', '.join(map(str, missing))}"
        code = EXIT_OK if not missing else EXIT_FAILED
    emit(args, doc, text)
    return code


def _convention(args) -> str:
    return PINNED_CONVENTION if args.convention == "auto" else args.convention


def cmd_extend(args) -> int:
    if args.action == "exponent":
        if args.word is None or args.i is None or args.beta is None:
            raise UsageError("exponent needs --word, --i and --beta")
        beta = parse_int_list(args.beta)
        word = ReducedWord(len(beta), tuple(parse_int_list(args.word)), args.omega, "appendix")
        if any(not 0 <= a < word.n for a in word.letters):
            raise UsageError("letters must lie in 0..n-1 (n = len(beta))")
        conv = _convention(args)
        value = extension_exponent(word, args.i, beta, conv)
        doc = {"exponent": value, "convention": conv, "pinned": PINNED_CONVENTION}
        text = f"{value} ({conv})"
        if args.convention == "auto":
            doc["by_convention"] = {c: extension_exponent(word, args.i, beta, c) for c in CONVENTIONS}
            try:
                doc["oracle"] = extension_exponent_oracle(word, args.i, beta)
                text += f", oracle {doc['oracle']}"
            except ValueError:
                doc["oracle"] = None
        emit(args, doc, text)
        return EXIT_OK
    if args.action == "minors":
        x = element_from(args.nu, args.w)
        rep = check_minor_extension(x, _convention(args))
        lines = [f"x = {x}, word {list(rep.word.letters)} (rho^{rep.word.omega})", f"antidominant: {rep.antidominant}"]
        for r in rep.records:
            ex = ", ".join(f"j={j}: {e[rep.convention]}" for j, e in sorted(r.exponents.items()))
            lines.append(f"  i={r.i} cone {'ok' if r.cone_ok else 'FAILS'}; exponents {ex}")
        lines += [f"warning: {w}" for w in rep.warnings]
        lines.append(rep.verdict)
        emit(args, rep.to_json(), "\n".join(lines))
        return EXIT_OK if rep.all_extend else EXIT_FAILED
    # walk
    if args.word is not None:
        if args.n is None:
            raise UsageError("walk with --word needs --n")
        word = ReducedWord(args.n, tuple(parse_int_list(args.word)), 0, "appendix")
    else:
        word = reduced_word(element_from(args.nu, args.w), "appendix")
    pts = alcove_walk(word)
    text = "\n".join(f"{p['step']}: " + " ".join("(" + ", ".join(v) + ")" for v in p["vertices"]) for p in pts)
    emit(args, {"word": word.to_json(), "alcoves": pts}, text)
    return EXIT_OK


def cmd_verify(args) -> int:
    doc: dict = load_config(args.config) if args.config else {}
    for key in ("n", "f", "p"):
        if getattr(args, key, None) is not None:
            doc[key] = getattr(args, key)
    if args.mu is not None:
        doc["mu"] = parse_mu(args.mu)
    if args.field != "generic" or "field" not in doc:
        doc["field"] = args.field
    if args.convention != "auto" or "convention" not in doc:
        doc["convention"] = args.convention
    if args.radius is not None:
        doc["box_radius"] = args.radius
    try:
        inp = VerifyInput.from_config(doc)
    except InputError as exc:
        raise UsageError(str(exc)) from None
    report = verify_theorem(inp)
    if args.format == "json":
        out = report.dumps()
    else:
        out = report.to_text()
    if args.out:
        Path(args.out).write_text(out)
    else:
        sys.stdout.write(out)
    return report.exit_code


# -- parser --------------------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    # SUPPRESS lets the flags appear before or after the subcommand without clobbering
    c = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    c.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    c.add_argument("--convention", choices=("linear", "affine", "auto"), default=argparse.SUPPRESS)
    c.add_argument("--field", default=argparse.SUPPRESS, help="generic or fp:<p>")
    c.add_argument("--out", default=argparse.SUPPRESS)
    c.add_argument("--alcove", choices=ALCOVES, default=argparse.SUPPRESS)
    return c


def _element_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--nu", help="translation part, e.g. 0,1,2")
    p.add_argument("--w", help="permutation: id, w0, one-line 3,1,2 or cycles (13)")


def _weight_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mu", help="weight rows, e.g. 22,7,-8 or 27,12,-10;4,-3,-10")
    p.add_argument("--p", type=int)


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    top = _Parser(prog="artifact", parents=[common], description=__doc__)
    top.add_argument("--version", action="version", version=f"artifact {__version__}")
    sub = top.add_subparsers(dest="group", parser_class=_Parser)

    weyl = sub.add_parser("weyl", parents=[common], help="affine Weyl group combinatorics")
    wsub = weyl.add_subparsers(dest="action", parser_class=_Parser)
    for name in ("mult", "bruhat"):
        q = wsub.add_parser(name, parents=[common])
        q.add_argument("--x", required=True, help="element nu/w")
        q.add_argument("--y", required=True, help="element nu/w")
    for name in ("length", "word", "codim1"):
        _element_args(wsub.add_parser(name, parents=[common]))

    bounds = sub.add_parser("bounds", parents=[common], help="valuation bounds of conjugated Iwahori subgroups")
    bsub = bounds.add_subparsers(dest="action", parser_class=_Parser)
    q = bsub.add_parser("iwahori", parents=[common])
    _element_args(q)
    q.add_argument("--oracle", action="store_true", help="compare with truncated symbolic conjugation")
    q.add_argument("--truncation", type=int, default=6)

    chart = sub.add_parser("chart", parents=[common], help="symbolic charts")
    csub = chart.add_subparsers(dest="action", parser_class=_Parser)
    for name in ("build", "monodromy"):
        q = csub.add_parser(name, parents=[common])
        _weight_args(q)
        if name == "monodromy":
            q.add_argument("--no-solve", action="store_true")

    inv = sub.add_parser("invariants", parents=[common], help="torus-invariant monomials")
    _weight_args(inv)
    inv.add_argument("--chart", choices=("U", "B"), default="U")
    inv.add_argument("--k", type=int)
    inv.add_argument("--n", type=int)
    inv.add_argument("--f", type=int, default=1)
    inv.add_argument("--oracle", action="store_true")
    inv.add_argument("--radius", type=int, default=4)

    ext = sub.add_parser("extend", parents=[common], help="extension of minors across Demazure divisors")
    esub = ext.add_subparsers(dest="action", parser_class=_Parser)
    q = esub.add_parser("exponent", parents=[common])
    q.add_argument("--word", help="letters, 0 = affine, e.g. 1,0")
    q.add_argument("--i", type=int)
    q.add_argument("--beta", help="character, e.g. 1,0")
    q.add_argument("--omega", type=int, default=0)
    _element_args(esub.add_parser("minors", parents=[common]))
    q = esub.add_parser("walk", parents=[common])
    _element_args(q)
    q.add_argument("--word")
    q.add_argument("--n", type=int)

    ver = sub.add_parser("verify", parents=[common], help="end-to-end verification")
    _weight_args(ver)
    ver.add_argument("--n", type=int)
    ver.add_argument("--f", type=int)
    ver.add_argument("--config", help="JSON config document")
    ver.add_argument("--radius", type=int)
    return top


HANDLERS = {
    "weyl": cmd_weyl,
    "bounds": cmd_bounds,
    "chart": cmd_chart,
    "invariants": cmd_invariants,
    "extend": cmd_extend,
    "verify": cmd_verify,
}
DEFAULTS = {"format": "text", "convention": "auto", "field": "generic", "out": None, "alcove": "main"}


VALUE_OPTS = {"--nu", "--mu", "--beta", "--x", "--y", "--word"}


def _glue_negatives(argv: Sequence[str]) -> list[str]:
    """'--nu -1,0,1' would read as an unknown flag; turn it into '--nu=-1,0,1'."""
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok in VALUE_OPTS:
            nxt = next(it, None)
            if nxt is not None and nxt[:1] == "-" and nxt[1:2].isdigit():
                out.append(f"{tok}={nxt}")
                continue
            out.append(tok)
            if nxt is not None:
                out.append(nxt)
            continue
        out.append(tok)
    return out


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    argv = _glue_negatives(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(argv)
        for k, v in DEFAULTS.items():
            if not hasattr(args, k):
                setattr(args, k, v)
        if args.group is None:
            raise UsageError("missing subcommand")
        if args.group != "invariants" and args.group != "verify" and getattr(args, "action", None) is None:
            raise UsageError(f"{args.group} needs an action")
        return HANDLERS[args.group](args)
    except UsageError as exc:
        sys.stderr.write(f"artifact: error: {exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except (ValueError, KeyError, IndexError, TypeError) as exc:
        sys.stderr.write(f"artifact: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
