"""Command line front end.

Exit status: 0 success, 1 usage error, 2 mathematical gate failure,
3 data-integrity failure.  Relative ``--out`` paths are resolved against
``$FREYMOD_OUTPUT_DIR`` when it is set.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from freymod import eliminate, ingest, sieve, twists
from freymod.ecfinite import count_points, reduce_curve
from freymod.errors import DataIntegrityError, GateError, UnsupportedPlaceError
from freymod.frey import build_frey, cm_check, reduction_type
from freymod.quadfield import QuadField, check_hypotheses, class_number, class_number_ideals, splitting_type

EXIT_OK, EXIT_USAGE, EXIT_GATE, EXIT_DATA = 0, 1, 2, 3
OUTPUT_DIR_ENV = "FREYMOD_OUTPUT_DIR"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _out_path(path: str) -> Path:
    p = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    p.parent.mkdir(parents=True, exist_ok=True)
    return p


def _write_json(path, obj) -> None:
    _out_path(path).write_text(json.dumps(obj, sort_keys=True, indent=2) + "\n", encoding="utf-8")


def _table(rows, headers) -> str:
    rows = [[str(c) for c in r] for r in rows]
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h) for i, h in enumerate(headers)]
    line = lambda cells: "  ".join(c.rjust(w) for c, w in zip(cells, widths))
    return "\n".join([line(headers), line(["-" * w for w in widths])] + [line(r) for r in rows])


# -- subcommands -------------------------------------------------------------


def cmd_hypotheses(args) -> int:
    rep = check_hypotheses(args.d, args.family)
    rows = [(k, v) for k, v in rep.as_dict().items()]
    print(_table(rows, ["gate", "value"]))
    for f in rep.failures():
        print(f"FAIL: {f}")
    if args.out:
        _write_json(args.out, rep.as_dict())
    return EXIT_OK if rep.passed else EXIT_GATE


def cmd_classnum(args) -> int:
    K = QuadField(args.d)
    h = class_number(K)
    result = {"d": args.d, "disc": K.disc, "class_number": h}
    if args.check_ideals:
        h2 = class_number_ideals(K)
        result["class_number_ideals"] = h2
        if h2 != h:
            print(f"oracle mismatch: forms {h} vs ideals {h2}", file=sys.stderr)
            return EXIT_DATA
    print(_table([(k, v) for k, v in result.items()], ["field", "value"]))
    if args.out:
        _write_json(args.out, result)
    return EXIT_OK


def cmd_split(args) -> int:
    K = QuadField(args.d)
    rows = []
    for ell in args.ell:
        sp = splitting_type(ell, K)
        rows.append((sp.ell, sp.kind, sp.ideal_data if sp.ideal_data is not None else "-", sp.residue_norm))
    print(_table(rows, ["ell", "kind", "sqrt(-d) mod ell", "residue norm"]))
    if args.out:
        _write_json(args.out, [dict(zip(["ell", "kind", "ideal_data", "residue_norm"], r)) for r in rows])
    return EXIT_OK


def cmd_frey(args) -> int:
    E = build_frey(args.family, args.a, args.b, args.d, args.p)
    info = {
        "family": E.family,
        "d": E.d,
        "a": E.a,
        "b": E.b,
        "c_power": E.c_power,
        "ainvs": [repr(a) for a in E.ainvs],
        "delta": repr(E.delta),
        "c4": repr(E.c4),
        "j_num": repr(E.j_num),
        "j_den": repr(E.j_den),
        "torsion_order_of_origin": E.torsion_order(),
    }
    if E.family == "quartic":
        info["cm"] = cm_check(args.a, args.b, args.d, args.p).kind
    print(_table(list(info.items()), ["invariant", "value"]))
    if args.ell:
        rows = []
        for ell in args.ell:
            for P in E.K.primes_above(ell):
                try:
                    r = reduction_type(E, P)
                    rows.append((repr(P), r.kind, r.v_delta, r.v_c4))
                except UnsupportedPlaceError as exc:
                    rows.append((repr(P), f"unsupported ({exc})", "-", "-"))
        print()
        print(_table(rows, ["prime", "reduction", "v(Delta)", "v(c4)"]))
        info["reduction"] = [dict(zip(["prime", "kind", "v_delta", "v_c4"], map(str, r))) for r in rows]
    if args.out:
        _write_json(args.out, info)
    return EXIT_OK


def cmd_ap(args) -> int:
    E = build_frey(args.family, args.a, args.b, args.d, args.p)
    rows = []
    for ell in args.ell:
        for P in E.K.primes_above(ell):
            red = reduce_curve(E.ainvs, P)
            if red.is_singular:
                rows.append((repr(P), P.norm, "bad"))
            else:
                rows.append((repr(P), P.norm, count_points(red)))
    print(_table(rows, ["prime", "N(P)", "a_P"]))
    if args.out:
        _write_json(args.out, [dict(zip(["prime", "norm", "trace"], map(str, r))) for r in rows])
    return EXIT_OK


def cmd_sieve2(args) -> int:
    found = sieve.sieve_2torsion(args.d, cross_check=True, t_max=args.t_max, r_max=args.r_max)
    base_change, _ = sieve.scan_2torsion(args.d, args.t_max, args.r_max)
    print(f"d = {args.d}: {len(found)} non-base-change candidates; "
          f"{len(base_change)} rational (base change) models within t <= {args.t_max}, r <= {args.r_max}")
    if args.out:
        sieve.write_candidates(found, _out_path(args.out))
    return EXIT_OK


def cmd_sieve3(args) -> int:
    fixed = None if args.free_d else args.d
    if not args.free_d and args.d is None:
        raise UsageError("sieve3: give --free-d or --d")
    cands = sieve.sieve_3torsion(fixed, r_max=args.r_max, q_max=args.q_max, workers=args.workers)
    rows = [(c.d, c.alpha, c.beta, c.sign, c.r, c.q, c.s, "yes" if c.extra_paper else "") for c in cands]
    print(_table(rows, ["d", "alpha", "beta", "sign", "r", "q", "s", "extra-paper"]))
    print("note: isogeny of these models to base changes is not rechecked here (unchecked annotation)")
    if args.out:
        sieve.write_candidates(cands, _out_path(args.out))
    return EXIT_OK


def cmd_eliminate(args) -> int:
    records = ingest.load_newforms(args.forms)
    tw = twists.twist_summary(args.twist_order, args.f_nontrivial) if args.twist_order else None
    cert = eliminate.run_elimination(
        args.ells,
        args.d,
        records,
        irreducibility_threshold=args.irreducibility_threshold,
        workers=args.workers,
        input_digest=ingest.file_digest(args.forms),
        twists=tw,
    )
    rows = []
    for f in cert.forms:
        rows.append((f.label, f.gcd, ",".join(map(str, f.surviving_primes)) or "-", f.verdict))
    print(_table(rows, ["form", "gcd", "surviving primes", "verdict"]))
    print(cert.conclusion)
    if args.out:
        path = _out_path(args.out)
        ingest.write_certificate(cert, path)
        print(f"certificate written to {path}")
    return EXIT_OK


def cmd_twists(args) -> int:
    group = twists.inner_twist_group(args.M, args.f_nontrivial)
    print(_table([(t.j, "yes" if t.flips_F else "no", t.character) for t in group], ["j", "flips F", "character"]))
    out = twists.twist_summary(args.M, args.f_nontrivial)
    if args.ap_e is not None:
        infos = twists.coefficient_field_info(args.ap_e, args.p, args.M)
        print()
        print(_table([(s, i.eta, i.degree_over_cyclotomic, i.galois_group_shape) for s, i in infos.items()],
                     ["sign", "eta", "degree", "Gal(K_f/Q)"]))
        out["coefficient_field"] = [i.as_dict() for i in infos.values()]
    if args.out:
        _write_json(args.out, out)
    return EXIT_OK


def cmd_certify_verify(args) -> int:
    cert = ingest.read_certificate(args.path)
    print(f"{args.path}: digest ok; d = {cert.d}, ell-set {list(cert.ell_set)}, {len(cert.forms)} forms")
    print(cert.conclusion)
    return EXIT_OK


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="freymod", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    workers_default = os.cpu_count() or 1

    def add(name, help_text, func):
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.set_defaults(func=func)
        p.add_argument("--out", help="write structured output to this file")
        return p

    p = add("hypotheses",
            "Hypothesis gates of the asymptotic theorems: x^4+dy^2=z^p needs d prime, d = 3 mod 8, "
            "3 not dividing h; x^2+dy^6=z^p needs d prime, d = 19 mod 24, h prime to 6.",
            cmd_hypotheses)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--family", choices=["quartic", "sextic"], required=True)

    p = add("classnum",
            "Class number of Q(sqrt(-d)) by reduced forms (the class-number hypothesis of the nonexistence theorem).",
            cmd_classnum)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--check-ideals", action="store_true", help="cross-check with Minkowski-bound ideal relations")

    p = add("split", "Splitting of rational primes in Q(sqrt(-d)) (2 inert iff d = 3 mod 8).", cmd_split)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--ell", type=_int_list, required=True, help="comma-separated primes")

    p = add("frey",
            "Frey curve of a putative solution with its invariants, the real-j (no CM) lemma test "
            "and reduction types.",
            cmd_frey)
    p.add_argument("--family", choices=["quartic", "sextic"], required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--p", type=int, default=3)
    p.add_argument("--ell", type=_int_list, help="report reduction types at primes above these")

    p = add("ap", "Traces of Frobenius of a Frey curve at primes above ell (used in the Mazur bound).", cmd_ap)
    p.add_argument("--family", choices=["quartic", "sextic"], required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--p", type=int, default=3)
    p.add_argument("--ell", type=_int_list, required=True)

    p = add("sieve2",
            "Nonexistence theorem for 2-torsion curves with conductor supported at 2: "
            "non-base-change solutions of b^2(a^2-4b) = +-2^(r-4).",
            cmd_sieve2)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--t-max", type=int, default=10)
    p.add_argument("--r-max", type=int, default=40)

    p = add("sieve3",
            "Asymptotic theorem for x^2+dy^6=z^p: solutions of beta^3(d alpha^3 + 27 beta) = +-2^r 3^q "
            "with additive reduction at 2 and 3.",
            cmd_sieve3)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--free-d", action="store_true", help="let d range over all primes")
    g.add_argument("--d", type=int, help="fixed prime d = 19 mod 24")
    p.add_argument("--r-max", type=int, default=sieve.R_MAX, help="raise to explore beyond r <= 16 (marked extra-paper)")
    p.add_argument("--q-max", type=int, default=sieve.Q_MAX, help="raise to explore beyond q <= 13 (marked extra-paper)")
    p.add_argument("--workers", type=int, default=workers_default)

    p = add("eliminate",
            "Mazur elimination from the asymptotic theorem for x^4+dy^2=z^p: p divides the product of "
            "B(ell, g; a, b, c) over S_ell.",
            cmd_eliminate)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--ells", type=_int_list, required=True)
    p.add_argument("--forms", required=True, help="newform table (JSON)")
    p.add_argument("--irreducibility-threshold", type=int, default=0)
    p.add_argument("--workers", type=int, default=workers_default)
    p.add_argument("--twist-order", type=int, help="order M of kappa; adds an inner-twist block to the certificate")
    p.add_argument("--f-nontrivial", action="store_true")

    p = add("twists", "Inner-twist classification theorem: Gamma_f and coefficient-field structure.", cmd_twists)
    p.add_argument("--M", type=int, required=True, help="order of kappa (a power of two)")
    p.add_argument("--f-nontrivial", action="store_true")
    p.add_argument("--ap-e", type=int, help="a_p(E) at an inert prime p, for the coefficient-field degree")
    p.add_argument("--p", type=int, default=3)

    p = sub.add_parser("certify-verify", help="Verify the digest of an elimination certificate.",
                       description="Verify the digest of an elimination certificate.")
    p.set_defaults(func=cmd_certify_verify)
    p.add_argument("path")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "func", None):
            raise UsageError("a subcommand is required (see --help)")
        if getattr(args, "workers", 1) < 1:
            raise UsageError("--workers must be positive")
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except DataIntegrityError as exc:
        print(f"data integrity error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (GateError, ValueError, UnsupportedPlaceError) as exc:
        print(f"gate failure: {exc}", file=sys.stderr)
        return EXIT_GATE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
