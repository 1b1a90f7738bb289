"""Command-line interface.

Exit codes: 0 success, 1 a mathematical check failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from .cartan import CartanError, CartanMatrix, load_cartan, preset
from .freealg import (
    FreeElem,
    StraightenBudgetExceeded,
    format_word,
    homogeneity_center,
    non_increasing,
    parse_word,
    rho_coefficient,
    rho_tau,
    serre_coefficient,
    straighten,
)
from .multipoly import MLaurent
from .pairing import associated_polynomial, leading_word, pair_UU, pair_UV, pair_VU
from .scalars import QRat
from .shuffle import (
    ShufElem,
    omega,
    shuffle_mul,
    shuffle_mul_geom,
    upsilon,
    upsilon_is_zero,
    wheel_member,
    wheel_member_geom,
    wheel_member_strong,
)
from .suite import SuiteConfig, run_suite
from .zigzag import DistZigZag

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(obj):
    print(json.dumps(obj, indent=2, sort_keys=False, default=str))


def _read_json(text: str):
    """Inline JSON, or a path (optionally prefixed with @) to a JSON file."""
    text = text.strip()
    if text.startswith("@"):
        text = text[1:]
    elif text.startswith(("{", "[")):
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise UsageError(f"malformed JSON: {exc}") from None
    try:
        return json.loads(Path(text).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {text}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {text}: {exc}") from None


def _cartan(args, default: str = "A2") -> CartanMatrix:
    spec = getattr(args, "cartan", None) or default
    try:
        return load_cartan(spec)
    except CartanError as exc:
        raise UsageError(str(exc)) from None


def _word(text: str):
    try:
        return parse_word(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _dims(text: str) -> dict:
    out = {}
    for part in text.split(","):
        try:
            c, k = part.split(":")
            out[c.strip()] = int(k)
        except ValueError:
            raise UsageError(f"dimension vector must look like i:2,j:1, got {text!r}") from None
    return out


def _free(text: str) -> FreeElem:
    """A word in inline syntax, or FreeElem JSON."""
    t = text.strip()
    if t.startswith(("{", "@")) or t.endswith(".json"):
        try:
            return FreeElem.from_json(_read_json(t))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    return FreeElem.word(_word(t))


def _elem(text: str, C: CartanMatrix, sign: str) -> ShufElem:
    """ShufElem JSON, or a word whose image is taken."""
    t = text.strip()
    if t.startswith(("{", "@")) or t.endswith(".json"):
        try:
            R = ShufElem.from_json(_read_json(t))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        return R
    return upsilon(FreeElem.word(_word(t)), C, sign)


def _elem_out(R: ShufElem) -> dict:
    return {"element": R.to_json(), "text": str(R)}


def _qrat_out(v: QRat) -> dict:
    return {"value": str(v), "json": v.to_json()}


def _zigzag(args):
    try:
        Z = DistZigZag.parse(args.zigzag)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.cartan:
        C = _cartan(args)
    else:
        C = preset(f"rank2:{Z.d}")
        if {Z.i, Z.j} != {"i", "j"}:
            raise UsageError("without --cartan the zig-zag vertices must be i and j")
    try:
        Z.check(C)
    except (ValueError, KeyError) as exc:
        raise UsageError(str(exc)) from None
    return Z, C


def _zz_text(Z) -> str:
    if hasattr(Z, "descriptor"):
        return Z.descriptor()
    return f"{Z.i},{Z.j},top={Z.s}..{Z.t},bottom={Z.sp}..{Z.tp}"


def _ints(text: str) -> list:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


# ---------------------------------------------------------------------------
# verbs


def cmd_cartan_validate(args) -> int:
    spec = args.spec.strip()
    if spec.startswith("{") or Path(spec).exists():
        obj = _read_json(spec)
        try:
            C = CartanMatrix(tuple(obj["vertices"]), tuple(tuple(r) for r in obj["d"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"malformed Cartan data: {exc}") from None
    else:
        try:
            C = preset(spec)
        except (KeyError, ValueError) as exc:
            raise UsageError(str(exc)) from None
    problems = C.problems()
    _emit({"valid": not problems, "problems": problems, "cartan": C.to_json()})
    return EXIT_FAIL if problems else EXIT_OK


def cmd_word_straighten(args) -> int:
    C = _cartan(args)
    x = _free(args.word)
    try:
        s = straighten(x, C, args.budget)
    except StraightenBudgetExceeded as exc:
        _emit({"error": str(exc), "pending": len(exc.pending)})
        return EXIT_FAIL
    _emit({"element": s.to_json(C), "text": str(s)})
    return EXIT_OK


def cmd_shuffle_mul(args) -> int:
    C = _cartan(args)
    if args.geom:
        L, R = (_elem(t, C, "+") for t in (args.left, args.right))
        L, R = (X if X.kind == "geom" else omega(X, C) for X in (L, R))
        _emit(_elem_out(shuffle_mul_geom(L, R, C)))
        return EXIT_OK
    L, R = _elem(args.left, C, args.sign), _elem(args.right, C, args.sign)
    _emit(_elem_out(shuffle_mul(L, R, C)))
    return EXIT_OK


def cmd_shuffle_wheel(args) -> int:
    C = _cartan(args)
    if args.numerator is not None:
        if not args.n:
            raise UsageError("--numerator needs --n")
        t = args.numerator.strip()
        try:
            num = MLaurent.const(int(t))
        except ValueError:
            num = MLaurent.from_json(_read_json(t))
        R = ShufElem("+", _dims(args.n), num, "geom" if args.geom else "trig")
    elif args.elem is not None:
        R = _elem(args.elem, C, "+")
    else:
        raise UsageError("give --numerator with --n, or --elem")
    if args.geom:
        if R.kind != "geom":
            R = omega(R, C)
        ok, wit = wheel_member_geom(R, C)
    else:
        ok, wit = wheel_member(R, C)
        if ok and args.strong:
            ok, wit = wheel_member_strong(R, C)
    out = {"member": ok}
    if wit:
        out["witness"] = {k: (_zz_text(v) if k == "zigzag" else v) for k, v in wit.items()}
    _emit(out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_shuffle_omega(args) -> int:
    C = _cartan(args)
    _emit(_elem_out(omega(_elem(args.elem, C, "+"), C)))
    return EXIT_OK


def cmd_rho_gen(args) -> int:
    Z, C = _zigzag(args)
    deg = _ints(args.deg) if args.deg else homogeneity_center(Z, C)
    try:
        x = rho_coefficient(Z, deg, C)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.straighten:
        x = straighten(x, C)
    _emit({"zigzag": Z.descriptor(), "multidegree": deg, "element": x.to_json(C), "text": str(x)})
    return EXIT_OK


def cmd_rho_verify(args) -> int:
    Z, C = _zigzag(args)
    if args.tau:
        obj = _read_json(args.tau)
        try:
            tau = {tuple(int(e) for e in t["a"]): QRat.from_json(t["c"]) for t in obj["terms"]}
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"malformed tau JSON: {exc}") from None
        try:
            x = rho_tau(Z, tau, C)
        except ValueError as exc:
            _emit({"zigzag": Z.descriptor(), "accepted": False, "reason": str(exc)})
            return EXIT_FAIL
        ok = upsilon_is_zero(x, C)
        _emit({"zigzag": Z.descriptor(), "accepted": True, "vanishes": ok})
        return EXIT_OK if ok else EXIT_FAIL
    center = homogeneity_center(Z, C)
    if args.deg:
        degs = [_ints(args.deg)]
    else:
        degs = [[c + t for c in center] for t in range(-args.window, args.window + 1)]
    bad = []
    for mu in degs:
        try:
            x = rho_coefficient(Z, mu, C)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if not upsilon_is_zero(x, C):
            bad.append(mu)
    _emit({"zigzag": Z.descriptor(), "checked": degs, "vanishes": not bad, "witness": bad[:1] or None})
    return EXIT_FAIL if bad else EXIT_OK


def cmd_serre_verify(args) -> int:
    import itertools

    try:
        i, j = [s.strip() for s in args.pair.split(",")]
    except ValueError:
        raise UsageError("--pair must look like i,j") from None
    C = _cartan(args)
    if i not in C or j not in C or i == j:
        raise UsageError(f"{i},{j} is not a pair of distinct vertices")
    n = 1 - C.dd(i, j)
    w = args.window
    bad = None
    count = 0
    for zexps in itertools.combinations_with_replacement(range(-w, w + 1), n):
        for wexp in range(-w, w + 1):
            count += 1
            if not upsilon_is_zero(serre_coefficient(C, i, j, zexps, wexp), C):
                bad = {"z": list(zexps), "w": wexp}
                break
        if bad:
            break
    _emit({"pair": [i, j], "checked": count, "vanishes": bad is None, "witness": bad})
    return EXIT_FAIL if bad else EXIT_OK


def cmd_pair(args) -> int:
    C = _cartan(args)
    if args.kind == "uv":
        v = pair_UV(_free(args.left), _elem(args.right, C, "-"), C)
    elif args.kind == "vu":
        v = pair_VU(_elem(args.left, C, "+"), _free(args.right), C)
    else:
        v = pair_UU(_free(args.left), _free(args.right), C)
    _emit(_qrat_out(v))
    return EXIT_OK


def cmd_lead(args) -> int:
    C = _cartan(args)
    R = _elem(args.elem, C, "-")
    if R.sign != "-":
        raise UsageError("leading words are defined for elements of sign '-'")
    if R.is_zero():
        raise UsageError("the zero element has no leading word")
    w = leading_word(R, C)
    _emit({"word": format_word(w), "non_increasing": non_increasing(w, C)})
    return EXIT_OK


def cmd_assoc(args) -> int:
    C = _cartan(args)
    w = _word(args.word)
    if not non_increasing(w, C):
        raise UsageError(f"{args.word} is not non-increasing")
    _emit(_elem_out(associated_polynomial(w, C)))
    return EXIT_OK


def cmd_verify_all(args) -> int:
    C = _cartan(args)
    cfg = SuiteConfig(C, seed=args.seed, mutate=args.mutate, family=not args.no_family)
    if args.quick:
        cfg.selection_max_d, cfg.selection_max_m = 2, 2
        cfg.rho_max_d, cfg.rho_max_m, cfg.window = 2, 1, 1
        cfg.straighten_words, cfg.lead_samples, cfg.lead_greater = 20, 10, 5
        cfg.wheel_samples, cfg.omega_pairs, cfg.wheel_max_n = 5, 5, 4
    only = set(args.only.split(",")) if args.only else None
    try:
        report = run_suite(cfg, only, timings=not args.no_timings)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    text = json.dumps(report, indent=2, default=str)
    if args.report:
        try:
            Path(args.report).write_text(text + "\n")
        except OSError as exc:
            raise UsageError(f"cannot write {args.report}: {exc.strerror}") from None
    else:
        print(text)
    for c in report["checks"]:
        print(f"{c['id']} {'PASS' if c['ok'] else 'FAIL'} {c['title']}", file=sys.stderr)
    return EXIT_OK if report["ok"] else EXIT_FAIL


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qloop", description="Exact computations in quantum loop groups and shuffle algebras.")
    sub = p.add_subparsers(dest="group", required=True)

    def cartan_opt(sp, required=False):
        sp.add_argument("--cartan", required=required, help="Cartan JSON file, inline JSON, or preset (A1, A2, A1xA1, A3, rank2:<d>)")

    g = sub.add_parser("cartan", help="Cartan data").add_subparsers(dest="verb", required=True)
    sp = g.add_parser("validate", help="check a Cartan matrix")
    sp.add_argument("spec")
    sp.set_defaults(func=cmd_cartan_validate)

    g = sub.add_parser("word", help="free-algebra words").add_subparsers(dest="verb", required=True)
    sp = g.add_parser("straighten", help="rewrite in non-increasing words")
    sp.add_argument("word", help="word like i:1,j:0 or FreeElem JSON")
    sp.add_argument("--budget", type=int, default=2_000_000)
    cartan_opt(sp)
    sp.set_defaults(func=cmd_word_straighten)

    g = sub.add_parser("shuffle", help="shuffle algebra").add_subparsers(dest="verb", required=True)
    sp = g.add_parser("mul", help="shuffle product")
    sp.add_argument("--left", required=True, help="word (its image) or ShufElem JSON")
    sp.add_argument("--right", required=True)
    sp.add_argument("--sign", choices="+-", default="+")
    sp.add_argument("--geom", action="store_true", help="geometric product; words are mapped through omega")
    cartan_opt(sp)
    sp.set_defaults(func=cmd_shuffle_mul)
    sp = g.add_parser("wheel-check", help="wheel conditions")
    sp.add_argument("--elem", help="word (its image) or ShufElem JSON")
    sp.add_argument("--numerator", help="integer or MLaurent JSON")
    sp.add_argument("--n", help="dimension vector, e.g. i:1,j:1")
    sp.add_argument("--geom", action="store_true")
    sp.add_argument("--strong", action="store_true", help="also check every general zig-zag")
    cartan_opt(sp)
    sp.set_defaults(func=cmd_shuffle_wheel)
    sp = g.add_parser("omega", help="geometric normalization")
    sp.add_argument("--elem", required=True)
    cartan_opt(sp)
    sp.set_defaults(func=cmd_shuffle_omega)

    g = sub.add_parser("rho", help="zig-zag relations").add_subparsers(dest="verb", required=True)
    for verb, fn in (("gen", cmd_rho_gen), ("verify", cmd_rho_verify)):
        sp = g.add_parser(verb)
        sp.add_argument("--zigzag", required=True, help="i,j,k,l,m[,s]")
        sp.add_argument("--deg", help="multidegree, top row then bottom row")
        cartan_opt(sp)
        if verb == "gen":
            sp.add_argument("--straighten", action="store_true")
        else:
            sp.add_argument("--window", type=int, default=2)
            sp.add_argument("--tau", help='JSON {"terms":[{"a":[...],"c":QRat}]}')
        sp.set_defaults(func=fn)

    g = sub.add_parser("serre", help="loop Serre relation").add_subparsers(dest="verb", required=True)
    sp = g.add_parser("verify")
    sp.add_argument("--pair", required=True)
    sp.add_argument("--window", type=int, default=1)
    cartan_opt(sp)
    sp.set_defaults(func=cmd_serre_verify)

    sp = sub.add_parser("pair", help="pairings")
    sp.add_argument("kind", choices=["uv", "vu", "uu"])
    sp.add_argument("--left", required=True)
    sp.add_argument("--right", required=True)
    cartan_opt(sp)
    sp.set_defaults(func=cmd_pair)

    sp = sub.add_parser("lead", help="leading word of an element of sign '-'")
    sp.add_argument("--elem", required=True, help="ShufElem JSON or a word (its image)")
    cartan_opt(sp)
    sp.set_defaults(func=cmd_lead)

    sp = sub.add_parser("assoc", help="element whose leading word is the given word")
    sp.add_argument("word")
    cartan_opt(sp)
    sp.set_defaults(func=cmd_assoc)

    g = sub.add_parser("verify", help="verification suite").add_subparsers(dest="verb", required=True)
    sp = g.add_parser("all")
    cartan_opt(sp)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--mutate", action="store_true", help="break the zeta sign to make sure checks can fail")
    sp.add_argument("--quick", action="store_true", help="small bounds")
    sp.add_argument("--only", help="comma-separated check ids")
    sp.add_argument("--report", help="write the JSON report here")
    sp.add_argument("--no-timings", action="store_true")
    sp.add_argument("--no-family", action="store_true", help="only use the given Cartan matrix")
    sp.set_defaults(func=cmd_verify_all)
    return p


def _join_negative_values(argv: list) -> list:
    """Turn ``--deg -1,-1`` into ``--deg=-1,-1`` so values may start with '-'."""
    out = []
    skip = False
    for n, tok in enumerate(argv):
        if skip:
            skip = False
            continue
        nxt = argv[n + 1] if n + 1 < len(argv) else None
        if tok.startswith("--") and "=" not in tok and nxt and re.match(r"-\d", nxt):
            out.append(f"{tok}={nxt}")
            skip = True
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_join_negative_values(argv))
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"qloop: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
