"""Command-line interface: `eistri <command> ...`, one JSON document on stdout."""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from typing import Any, Callable

from . import __version__
from .abelian.groups import FiniteAbelianGroup, GroupEndomorphism, parse_matrix
from .abelian.lifting import hensel_roots_of_f, lift_to_gamma0_3, sl2_conjugacy_check
from .abelian.oracle import OracleBoundExceeded, conjugacy_classes, f_annihilated_array
from .eisenstein import factor, format_eis, parse_eis
from .enumeration import d_total, enumerate_classes, l_ramified, oracle_count
from .linear_mts import (
    ConjecturalRegime,
    IsoClassDescriptor,
    LinearPique,
    NotMendelsohn,
    decompose,
    kn_isomorphic,
    opposite_pique,
    standard_representative,
    to_table,
)
from .quasigroup import (
    CayleyTable,
    InvalidStructure,
    TripleSystem,
    are_isomorphic,
    blocks_from,
    is_anticommutative,
    is_entropic,
    is_idempotent,
    is_LE,
    is_left_distributive,
    is_mendelsohn,
    is_RE,
    is_right_distributive,
    is_self_orthogonal,
    opposite,
    table_from,
    validate,
)
from .quotients import coset_reps, group_realization, quotient_structure
from .recover import NotLinear, recover_pique

EXIT_OK, EXIT_REFUSED, EXIT_UNKNOWN = 0, 2, 3


@dataclass
class CommandResult:
    status: str  # ok | unknown | refused
    payload: Any = None
    assumptions: list[str] = field(default_factory=list)
    reason: str = ""
    text: str | None = None  # block-list rendering, kept only under --format text

    def document(self) -> dict:
        doc = dict(self.payload) if isinstance(self.payload, dict) else {"result": self.payload}
        doc["status"] = self.status
        doc["assumptions"] = list(self.assumptions)
        if self.reason:
            doc["reason"] = self.reason
        return doc


class Refused(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _load_table(args) -> CayleyTable:
    if getattr(args, "table", None):
        t = CayleyTable.from_json(json.loads(_read(args.table)))
    elif getattr(args, "blocks", None):
        t = table_from(TripleSystem.from_text(_read(args.blocks)))
    else:
        raise Refused("one of --table, --blocks or --desc is required")
    if not validate(t):
        raise Refused("input table is not a Latin square")
    return t


def _load_pique(args) -> tuple[LinearPique, CayleyTable | None]:
    if getattr(args, "desc", None):
        desc = IsoClassDescriptor.parse(args.desc)
        return standard_representative(desc, args.assume_conjecture), None
    t = _load_table(args)
    pique, _ = recover_pique(t)
    return pique, t


def _assumptions_for(pique_or_desc) -> list[str]:
    return ["conjecture:l(3^n)=P(n)"] if pique_or_desc.conjectural else []


# ---- commands -------------------------------------------------------------


def cmd_factor(args) -> CommandResult:
    z = parse_eis(args.z)
    fz = factor(z)
    return CommandResult("ok", {
        "input": format_eis(z),
        "unit": format_eis(fz.unit),
        "factors": [{"prime": format_eis(p), "exponent": e} for p, e in fz.factors],
    })


def cmd_quotient(args) -> CommandResult:
    desc = quotient_structure(parse_eis(args.prime), args.exp)
    real = group_realization(desc)
    payload = real.to_json()
    if args.reps:
        payload["coset_reps"] = [format_eis(r) for r in coset_reps(desc.prime, desc.exponent)]
    return CommandResult("ok", payload)


def cmd_roots(args) -> CommandResult:
    return CommandResult("ok", {"p": args.p, "n": args.n, "roots": hensel_roots_of_f(args.p, args.n)})


def _system_payload(pique: LinearPique, table: CayleyTable) -> tuple[dict, str | None]:
    payload = {"pique": pique.to_json(), "table": table.to_json()}
    text = None
    if is_mendelsohn(table):
        ts = blocks_from(table)
        payload["blocks"] = [list(b) for b in ts.blocks]
        text = ts.to_text()
    return payload, text


def cmd_construct(args) -> CommandResult:
    desc = IsoClassDescriptor.parse(args.desc)
    pique = standard_representative(desc, args.assume_conjecture)
    table = to_table(pique)
    payload, text = _system_payload(pique, table)
    payload = {"descriptor": str(desc), "conjectural": desc.conjectural, **payload}
    return CommandResult("ok", payload, _assumptions_for(desc), text=text)


def cmd_blocks(args) -> CommandResult:
    if args.desc:
        desc = IsoClassDescriptor.parse(args.desc)
        t = to_table(standard_representative(desc, args.assume_conjecture))
    else:
        t = _load_table(args)
    ts = blocks_from(t)
    return CommandResult("ok", {"n": ts.n, "blocks": [list(b) for b in ts.blocks], "table": t.to_json()},
                         text=ts.to_text())


def cmd_decompose(args) -> CommandResult:
    pique, _ = _load_pique(args)
    desc = decompose(pique, args.assume_conjecture)
    return CommandResult("ok", desc.to_json(), _assumptions_for(desc))


def cmd_classify(args) -> CommandResult:
    pique, _ = _load_pique(args)
    desc = decompose(pique, args.assume_conjecture)
    order = desc.order
    payload = {
        **desc.to_json(),
        "quotients": [f.quotient().to_json() for f in desc.factors],
        "non_ramified": order % 3 != 0,
        "standard_representative": standard_representative(desc, True).to_json(),
    }
    return CommandResult("ok", payload, _assumptions_for(desc))


PROPERTIES = ("pure", "self-orthogonal", "self-converse", "entropic", "mendelsohn",
              "idempotent", "left-distributive", "right-distributive", "RE", "LE")


def cmd_check(args) -> CommandResult:
    pique, table = _load_pique(args)
    if table is None:
        table = to_table(pique)
    prop = args.property
    key = prop.replace("-", "_")
    if prop == "pure":
        value = is_anticommutative(table)
    elif prop == "self-orthogonal":
        value = is_self_orthogonal(table)
    elif prop == "self-converse":
        if table.n <= 81:
            value = are_isomorphic(table, opposite(table)) is not None
        else:
            value = kn_isomorphic(pique, opposite_pique(pique)) is not None
    elif prop == "entropic":
        value = is_entropic(table)
    elif prop == "mendelsohn":
        value = is_mendelsohn(table)
    elif prop == "idempotent":
        value = is_idempotent(table)
    elif prop == "left-distributive":
        value = is_left_distributive(table)
    elif prop == "right-distributive":
        value = is_right_distributive(table)
    elif prop == "RE":
        value = is_RE(table)
    else:
        value = is_LE(table)
    return CommandResult("ok", {key: value, "order": table.n}, _assumptions_for(pique))


def cmd_count(args) -> CommandResult:
    tc = d_total(args.order, args.assume_conjecture)
    doc = tc.to_json()
    status = "ok" if tc.linear.known and tc.distributive.known else "unknown"
    reason = "; ".join(doc.pop("reasons", []))
    assumptions = doc.pop("assumptions")
    return CommandResult(status, doc, assumptions, reason)


def _parse_prime_power(text: str) -> tuple[int, int]:
    try:
        p, n = text.split("^")
        return int(p), int(n)
    except ValueError as exc:
        raise Refused(f"expected p^n, got {text!r}") from exc


def cmd_classes(args) -> CommandResult:
    p, n = _parse_prime_power(args.prime_power)
    descs = enumerate_classes(p, n, args.assume_conjecture)
    payload = {"p": p, "n": n, "count": len(descs), "classes": [str(d) for d in descs]}
    conj = p == 3 and l_ramified(n).status != "verified"
    return CommandResult("ok", payload, ["conjecture:l(3^n)=P(n)"] if conj else [])


def cmd_oracle(args) -> CommandResult:
    if args.prime_power:
        p, n = _parse_prime_power(args.prime_power)
        return CommandResult("ok", {"p": p, "n": n, "oracle_count": oracle_count(p, n, jobs=args.jobs)})
    g = FiniteAbelianGroup.parse(args.group)
    sols = f_annihilated_array(g)
    classes = conjugacy_classes(g)
    payload = {
        "group": {"prime": g.prime, "exponents": list(g.exponents)},
        "solution_count": int(len(sols)),
        "classes": [{"representative": c.representative.to_json(), "size": c.size} for c in classes],
    }
    if len(sols) <= args.max_list:
        payload["solutions"] = [m.tolist() for m in sols]
    else:
        payload["solutions_truncated"] = True
    return CommandResult("ok", payload)


def cmd_lift(args) -> CommandResult:
    g = FiniteAbelianGroup.parse(args.group)
    alpha = GroupEndomorphism(g, parse_matrix(args.matrix))
    res = lift_to_gamma0_3(alpha, args.bound)
    payload = {
        "alpha": alpha.to_json(),
        "lift": [list(r) for r in res.lift] if res.lift else None,
        "lift_count_within_bound": len(res.all_lifts),
        "bound": res.bound,
    }
    if res.lift is None:
        return CommandResult("unknown", payload, reason=f"no lift with entries bounded by {res.bound}; inconclusive")
    return CommandResult("ok", payload)


# ---- selfcheck ------------------------------------------------------------

KNOWN_LIFTS = {
    ((2, 2), (3, 8)): ((2, -1), (3, -1)),
    ((2, 1), (6, 8)): ((2, 1), (-3, -1)),
    ((2, 2), (3, 5)): ((5, -1), (21, -4)),
    ((2, 1), (6, 5)): ((5, 1), (-21, -4)),
    ((2, 2), (3, 2)): ((26, -31), (21, -25)),
    ((2, 1), (6, 2)): ((26, 31), (-21, -25)),
}


def _check_roots():
    return hensel_roots_of_f(7, 1) == [3, 5] and hensel_roots_of_f(7, 2) == [
        r for r in range(49) if (r * r - r + 1) % 49 == 0
    ]


def _check_order7():
    from .linear_mts import mendelsohn_pique

    g = FiniteAbelianGroup(7, (1,))
    a, b = mendelsohn_pique(g, 3), mendelsohn_pique(g, 5)
    return kn_isomorphic(a, b) is None and are_isomorphic(to_table(a), to_table(b)) is None


def _check_mixedcong():
    from .abelian.lifting import check_lift

    g = FiniteAbelianGroup(3, (1, 2))
    sols = {GroupEndomorphism.from_array(g, m).matrix for m in f_annihilated_array(g)}
    if sols != set(KNOWN_LIFTS):
        return False
    for alpha_m, lift in KNOWN_LIFTS.items():
        alpha = GroupEndomorphism(g, alpha_m)
        res = lift_to_gamma0_3(alpha)
        if lift not in res.all_lifts:
            return False
        check_lift(lift, alpha)
    return True


def _check_sl2():
    rep = sl2_conjugacy_check()
    return rep.passed


def _check_charpoly():
    return sl2_conjugacy_check().m2z9_counterexamples == []


def _check_l27():
    return oracle_count(3, 3) == 3 == l_ramified(3).value


def _check_l243():
    return oracle_count(3, 5) == 7 == l_ramified(5).value


SELFCHECKS: dict[str, Callable[[], bool]] = {
    "roots": _check_roots,
    "order7": _check_order7,
    "mixedcong": _check_mixedcong,
    "charpoly": _check_charpoly,
    "sl2": _check_sl2,
    "l27": _check_l27,
    "l243": _check_l243,
}


def cmd_selfcheck(args) -> CommandResult:
    names = args.only or list(SELFCHECKS)
    unknown = [n for n in names if n not in SELFCHECKS]
    if unknown:
        raise Refused(f"unknown checks {unknown}; choose from {sorted(SELFCHECKS)}")
    results = []
    for name in names:
        t0 = time.perf_counter()
        try:
            ok = bool(SELFCHECKS[name]())
            err = ""
        except Exception as exc:  # a crashing check is a failing check
            ok, err = False, f"{type(exc).__name__}: {exc}"
        entry = {"check": name, "pass": ok, "seconds": round(time.perf_counter() - t0, 3)}
        if err:
            entry["error"] = err
        results.append(entry)
    all_ok = all(r["pass"] for r in results)
    return CommandResult("ok" if all_ok else "refused", {"checks": results, "all_pass": all_ok},
                         reason="" if all_ok else "some checks failed")


# ---- argument parsing -----------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    # SUPPRESS keeps a subcommand's unset flag from clobbering one given before it
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--format", choices=("json", "text"))
    common.add_argument("--strict", action="store_true", help="exit 3 when the answer is unknown")
    common.add_argument("--jobs", type=int)
    common.add_argument("--assume-conjecture", action="store_true",
                        help="allow results that rest on l(3^n) = P(n) for n > 5")

    ap = argparse.ArgumentParser(prog="eistri", parents=[common], description=__doc__)
    ap.add_argument("--version", action="version", version=f"eistri {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=func)
        return sp

    def add_source(sp, desc=True):
        sp.add_argument("--table", help="Cayley table JSON file ('-' for stdin)")
        sp.add_argument("--blocks", help="block list file ('mts <n>' header)")
        if desc:
            sp.add_argument("--desc", help="class descriptor, e.g. 'split:7^1:a | ram:3^3'")

    sp = add("factor", cmd_factor, "factor an Eisenstein integer")
    sp.add_argument("--z", required=True, help="Eisenstein integer such as '5-2*z'")

    sp = add("quotient", cmd_quotient, "structure of Z[z]/(prime^exp)")
    sp.add_argument("--prime", required=True)
    sp.add_argument("--exp", type=int, required=True)
    sp.add_argument("--reps", action="store_true", help="also list coset representatives")

    sp = add("roots", cmd_roots, "roots of X^2 - X + 1 mod p^n")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)

    sp = add("construct", cmd_construct, "build the standard system for a descriptor")
    sp.add_argument("--desc", required=True)

    add_source(add("blocks", cmd_blocks, "block list of a Mendelsohn table"))
    add_source(add("decompose", cmd_decompose, "descriptor of a linear Mendelsohn system"))
    add_source(add("classify", cmd_classify, "descriptor plus module-level data"))

    sp = add("check", cmd_check, "exhaustively check a property")
    add_source(sp)
    sp.add_argument("--property", required=True, choices=PROPERTIES)

    sp = add("count", cmd_count, "number of isomorphism classes of a given order")
    sp.add_argument("--order", type=int, required=True)

    sp = add("classes", cmd_classes, "list class descriptors of order p^n")
    sp.add_argument("--prime-power", required=True, help="p^n")

    sp = add("oracle", cmd_oracle, "brute-force f-annihilated automorphisms and classes")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--group", help="prime:exponents, e.g. '3:1,2'")
    g.add_argument("--prime-power", help="count classes over all groups of order p^n")
    sp.add_argument("--max-list", type=int, default=1000)

    sp = add("lift", cmd_lift, "lift a mixed-congruence automorphism into Gamma_0(3)")
    sp.add_argument("--matrix", required=True, help="rows separated by ';', e.g. '2,2;3,8'")
    sp.add_argument("--group", required=True)
    sp.add_argument("--bound", type=int, default=40)

    sp = add("selfcheck", cmd_selfcheck, "run the built-in consistency checks")
    sp.add_argument("--only", action="append", help=f"one of {', '.join(SELFCHECKS)}")
    return ap


COMMON_DEFAULTS = {"format": "json", "strict": False, "jobs": 1, "assume_conjecture": False}


def run(argv: list[str] | None = None) -> tuple[CommandResult, int]:
    args = build_parser().parse_args(argv)
    for key, value in COMMON_DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, value)
    try:
        res = args.func(args)
    except ConjecturalRegime as exc:
        res = CommandResult("refused", {}, reason=f"{exc} (use --assume-conjecture)")
    except (Refused, ValueError, InvalidStructure, NotMendelsohn, NotLinear,
            OracleBoundExceeded, json.JSONDecodeError, OSError) as exc:
        res = CommandResult("refused", {}, reason=str(exc))
    if args.format == "json":
        res.text = None
    if res.status == "ok":
        code = EXIT_OK
    elif res.status == "unknown":
        code = EXIT_UNKNOWN if args.strict else EXIT_OK
    else:
        code = EXIT_REFUSED
    return res, code


def render(res: CommandResult) -> str:
    if res.status == "ok" and res.text is not None:
        return res.text
    return json.dumps(res.document()) + "\n"


def main(argv: list[str] | None = None) -> int:
    res, code = run(argv)
    sys.stdout.write(render(res))
    if res.status != "ok" and res.reason:
        print(res.reason, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
