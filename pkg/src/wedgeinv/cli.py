"""Batch command-line front end.

Every subcommand reads a JSON payload (``--input FILE``, ``--input -`` for
stdin, and/or per-field flags that override it) and writes one JSON
object to stdout with sorted keys.  Exit codes: 0 computed, 1 a yes/no
query answered "no"/"none" under ``--assert``, 2 invalid input, 3 an
internal consistency check failed.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
import time
from typing import Optional

from . import oracles
from .abelian import FinGenAbGroup, QmodZ
from .classify import (
    RepSpec,
    birationally_equivalent,
    _units,
    class_lower_bound_semidirect,
    count_classes,
    invariant_i,
    katsylo_fails,
    monomial_witness,
    product_counterexample,
    semidirect_counterexample,
    unit_exponent_obstructs,
)
from .errors import ConsistencyError, InvalidInputError, NotEquivalentError
from .exactla import IntMatrix, det, pfaffian_congruence_check, snf
from .exterior import class_of, glz_witness, is_generator, replay, synthesize_elem_ops, wedge
from .qtorus import (
    QuantumTorusSpec,
    brauer_equivalent,
    commutator_form,
    heisenberg,
    k_isomorphic,
    span_check,
    wedge_criterion,
)
from .symplectic import (
    SymplecticSpace,
    enumerate_form_automorphisms,
    is_symplectic,
    preserves_form,
)

SCHEMA = 1

EXIT_OK, EXIT_NO, EXIT_INVALID, EXIT_CONSISTENCY = 0, 1, 2, 3

# statement names used in provenance blocks
STATEMENTS = {
    "snf": "smith-normal-form",
    "wedge": "exterior-power-structure",
    "elemops": "equal-wedge-iff-elementary-operations",
    "glz-witness": "wedge-up-to-sign-iff-glz-related",
    "symplectic-check": "symplectic-automorphisms-have-trivial-determinant",
    "classify-equiv": "wedge-class-decides-birational-equivalence",
    "classify-count": "class-count-is-units-modulo-sign",
    "katsylo": "katsylo-fails-iff-n1-is-5-or-at-least-7",
    "counterexample": "power-residue-counterexamples",
    "qtorus": "quantum-torus-isomorphism-criterion",
    "heisenberg": "heisenberg-span-and-commutator-form",
    "selftest": "oracle-cross-checks",
}


class _ArgError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _ArgError(message)


# -- payload helpers ---------------------------------------------------------


def _json_arg(text: str, name: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"--{name}: malformed JSON ({exc.msg})") from exc


def _load_payload(args) -> dict:
    payload = {}
    if args.input is not None:
        try:
            if args.input == "-":
                text = sys.stdin.read()
            else:
                with open(args.input, encoding="utf-8") as fh:
                    text = fh.read()
        except OSError as exc:
            raise InvalidInputError(f"cannot read input: {exc}") from exc
        payload = _json_arg(text, "input")
        if not isinstance(payload, dict):
            raise InvalidInputError("input payload must be a JSON object")
    for key, kind in getattr(args, "_fields", ()):
        value = getattr(args, key.replace("-", "_"))
        if value is None:
            continue
        payload[key] = _json_arg(value, key) if kind == "json" else value
    return payload


def _require(payload: dict, key: str):
    if key not in payload:
        raise InvalidInputError(f"missing field {key!r}")
    return payload[key]


def _int_list(x, name: str) -> list:
    if isinstance(x, int) and not isinstance(x, bool):
        return [x]
    if not isinstance(x, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in x):
        raise InvalidInputError(f"{name} must be a list of integers")
    return list(x)


def _matrix(x, name: str) -> IntMatrix:
    if not isinstance(x, list):
        raise InvalidInputError(f"{name} must be a list of rows")
    rows = [_int_list(r, f"{name} row") for r in x]
    if rows and len({len(r) for r in rows}) != 1:
        raise InvalidInputError(f"{name} rows have different lengths")
    return IntMatrix.from_rows(rows, len(rows[0]) if rows else 0)


def _group(payload: dict, key: str = "group") -> FinGenAbGroup:
    return FinGenAbGroup.from_json(_require(payload, key))


def _coords_list(x, name: str) -> list:
    if not isinstance(x, list):
        raise InvalidInputError(f"{name} must be a list of coordinate lists")
    return [_int_list(c["coords"] if isinstance(c, dict) and "coords" in c else c, name) for c in x]


def _elements(group: FinGenAbGroup, x, name: str) -> tuple:
    return tuple(group.element(c) for c in _coords_list(x, name))


def _chars(group: FinGenAbGroup, x, name: str) -> tuple:
    return tuple(group.character(c) for c in _coords_list(x, name))


def _provenance(command: str, **extra) -> dict:
    out = {"statement": STATEMENTS[command]}
    out.update(extra)
    return out


# -- subcommands -------------------------------------------------------------
# each returns (response, verdict); verdict is None for non-queries


def cmd_snf(payload):
    m = _matrix(_require(payload, "matrix"), "matrix")
    res = snf(m)
    return {
        "input": {"matrix": m.tolist()},
        "s": res.s.tolist(),
        "u": res.u.tolist(),
        "v": res.v.tolist(),
        "invariants": list(res.invariants),
    }, None


def cmd_wedge(payload):
    g = _group(payload)
    elems = _elements(g, _require(payload, "elements"), "elements")
    w = wedge(elems, g)
    return {
        "input": {"group": g.to_json(), "elements": [list(e.coords) for e in elems]},
        "wedge": w.to_json(),
        "class": class_of(w).to_json(),
        "is_generator": is_generator(w),
    }, None


def _pair_input(payload):
    g = _group(payload)
    a = _elements(g, _require(payload, "a"), "a")
    b = _elements(g, _require(payload, "b"), "b")
    echo = {"group": g.to_json(), "a": [list(x.coords) for x in a], "b": [list(x.coords) for x in b]}
    return a, b, echo


def cmd_elemops(payload):
    a, b, echo = _pair_input(payload)
    try:
        ops = synthesize_elem_ops(a, b)
    except NotEquivalentError:
        return {"input": echo, "related": False, "ops": None}, False
    if replay(ops, a) != b:
        raise ConsistencyError("operations do not replay")
    return {"input": echo, "related": True, "ops": [op.to_json() for op in ops]}, True


def cmd_glz_witness(payload):
    a, b, echo = _pair_input(payload)
    try:
        n = glz_witness(a, b)
    except NotEquivalentError:
        return {"input": echo, "related": False, "matrix": None}, False
    return {"input": echo, "related": True, "matrix": n.tolist(), "det": det(n)}, True


def cmd_symplectic_check(payload):
    degrees = _int_list(_require(payload, "degrees"), "degrees")
    base = FinGenAbGroup(tuple(degrees))
    if not base.is_finite or not degrees or degrees[0] < 2:
        raise InvalidInputError("degrees must be a nonempty chain of integers >= 2")
    s = SymplecticSpace(base)
    c = _matrix(_require(payload, "matrix"), "matrix")
    ok = preserves_form(c, s)
    out = {
        "input": {"degrees": degrees, "matrix": c.tolist()},
        "preserves_form": ok,
        "det_mod_n1": None,
        "pfaffian_mod_n1": None,
    }
    if ok:
        n1 = degrees[0]
        d = det(c) % n1
        p = pfaffian_congruence_check(c, degrees)
        if d != 1 % n1 or p != d:
            raise ConsistencyError(f"form-preserving matrix with det {d} and Pfaffian ratio {p} mod {n1}")
        out["det_mod_n1"] = d
        out["pfaffian_mod_n1"] = p
    return out, ok


def cmd_classify_equiv(payload):
    g = _group(payload)
    v = RepSpec(g, _chars(g, _require(payload, "v"), "v"))
    w = RepSpec(g, _chars(g, _require(payload, "w"), "w"))
    verdict = birationally_equivalent(v, w)
    out = {
        "input": {"group": g.to_json(), "v": [list(c.coords) for c in v.chars], "w": [list(c.coords) for c in w.chars]},
        "equivalent": verdict,
        "classes": [class_of(v.wedge()).to_json(), class_of(w.wedge()).to_json()],
        "witness": None,
    }
    if verdict:
        n = monomial_witness(v, w)
        for i, eta in enumerate(w.chars):
            image = sum((n[j, i] * chi for j, chi in enumerate(v.chars)), _zero_char(v))
            if image != eta:
                raise ConsistencyError("monomial witness does not transport the characters")
        out["witness"] = n.tolist()
    return out, verdict


def _zero_char(rep: RepSpec):
    return rep.chars[0] * 0


def cmd_classify_count(payload):
    g = _group(payload)
    d = _require(payload, "dim")
    if not isinstance(d, int) or isinstance(d, bool):
        raise InvalidInputError("dim must be an integer")
    res = count_classes(g, d)
    out = {
        "input": {"group": g.to_json(), "dim": d},
        "count": res.count,
        "representatives": [[list(c.coords) for c in rep.chars] for rep in res.representatives],
    }
    if d == g.rank:
        out["classes"] = [invariant_i(rep).to_json() for rep in res.representatives]
    return out, None


def cmd_katsylo(payload):
    g = _group(payload)
    fails = katsylo_fails(g)
    return {"input": {"group": g.to_json()}, "fails": fails, "class_count_top_degree": count_classes(g, g.rank).count}, fails


def cmd_counterexample(payload):
    if "params" in payload:
        params = payload["params"]
        if not isinstance(params, list) or not all(isinstance(p, list) and len(p) == 2 for p in params):
            raise InvalidInputError("params must be a list of [n, r] pairs")
        params = [_int_list(p, "params") for p in params]
        torus = payload.get("torus_rank", 0)
        if not isinstance(torus, int):
            raise InvalidInputError("torus_rank must be an integer")
        ms = product_counterexample(params, torus)
        return {
            "input": {"params": params, "torus_rank": torus},
            "kind": "product",
            "exponents": None if ms is None else list(ms),
        }, ms is not None
    n, r = _require(payload, "n"), _require(payload, "r")
    if not all(isinstance(x, int) and not isinstance(x, bool) for x in (n, r)):
        raise InvalidInputError("n and r must be integers")
    m = semidirect_counterexample(n, r)
    return {
        "input": {"n": n, "r": r},
        "kind": "semidirect",
        "m": m,
        "unit_exponent_obstructs": unit_exponent_obstructs(n, r),
        "class_lower_bound": class_lower_bound_semidirect(n, r),
    }, m is not None


def cmd_qtorus(payload):
    spec = QuantumTorusSpec(
        tuple(_int_list(_require(payload, "degrees"), "degrees")),
        tuple(_int_list(_require(payload, "exponents"), "exponents")),
    )
    k_iso, criterion = k_isomorphic(spec), wedge_criterion(spec)
    if k_iso != criterion:
        raise ConsistencyError("wedge criterion disagrees with the exponent criterion")
    return {
        "input": spec.to_json(),
        "k_isomorphic": k_iso,
        "brauer": brauer_equivalent(spec),
        "wedge_criterion": criterion,
    }, k_iso


def cmd_heisenberg(payload):
    if "group" in payload:
        base = _group(payload)
    else:
        base = FinGenAbGroup(tuple(_int_list(_require(payload, "degrees"), "degrees")))
    prime = payload.get("prime")
    h = heisenberg(base, prime)
    form = commutator_form(h)
    spans, symp = span_check(h), is_symplectic(form)
    return {
        "input": {"group": base.to_json(), "prime": prime},
        "prime": h.prime,
        "root": h.root,
        "dimension": h.n,
        "spans_matrix_algebra": spans,
        "commutator_form": form.to_json(),
        "symplectic": symp,
    }, spans and symp


# -- selftest ----------------------------------------------------------------


def _suite_elemops(bound: int) -> dict:
    groups = [g for g in [(2,), (3,), (2, 2), (3, 3), (2, 4), (2, 2, 2)] if _order(g) <= bound]
    checked, failures = 0, []
    for ns in groups:
        g = FinGenAbGroup(ns)
        for d in (len(ns), len(ns) + 1):
            if _order(ns) ** d > bound ** 3:
                continue
            tuples = oracles.generating_tuples(ns, d)
            orbits = oracles.elementary_orbits(ns, d, tuples)
            fibers = oracles.wedge_fibers(ns, d, tuples, lambda t: wedge([g.element(x) for x in t], g).coords)
            checked += 1
            if set(orbits) != set(fibers):
                failures.append(f"{ns} d={d}: orbits differ from wedge fibers")
                continue
            for orbit in orbits:
                members = sorted(orbit)
                a = tuple(g.element(x) for x in members[0])
                b = tuple(g.element(x) for x in members[-1])
                if replay(synthesize_elem_ops(a, b), a) != b:
                    failures.append(f"{ns} d={d}: replay failed")
    return {"name": "elementary-operations-orbits", "checked": checked, "failures": failures}


def _suite_symplectic(bound: int) -> dict:
    bases = [b for b in [(2,), (3,), (4,), (5,), (6,), (2, 2), (2, 4)] if _order(b) <= bound]
    checked, failures = 0, []
    for degrees in bases:
        s = SymplecticSpace(FinGenAbGroup(degrees))
        autos = enumerate_form_automorphisms(s)
        for c in autos:
            checked += 1
            d = det(c) % degrees[0]
            if d != 1 % degrees[0] or pfaffian_congruence_check(c, degrees) != d:
                failures.append(f"{degrees}: {c.tolist()}")
        if len(degrees) == 1 and degrees[0] <= min(bound, 5):
            brute = oracles.form_preserving_residue_matrices(degrees)
            if sorted(tuple(x for row in m for x in row) for m in brute) != [c.entries for c in autos]:
                failures.append(f"{degrees}: enumeration differs from brute force")
    return {"name": "symplectic-enumeration", "checked": checked, "failures": failures}


def _suite_qtorus(bound: int) -> dict:
    checked, failures = 0, []
    for degrees in _chains(bound, 3):
        for ms in _unit_tuples(degrees):
            spec = QuantumTorusSpec(degrees, ms)
            checked += 1
            if k_isomorphic(spec) != wedge_criterion(spec):
                failures.append(f"{degrees} {ms}")
    return {"name": "quantum-torus-criterion-agreement", "checked": checked, "failures": failures}


def _order(ns) -> int:
    out = 1
    for n in ns:
        out *= n
    return out


def _chains(max_n: int, max_len: int):
    def rec(prefix):
        if prefix:
            yield tuple(prefix)
        if len(prefix) == max_len:
            return
        start = prefix[-1] if prefix else 2
        for n in range(start, max_n + 1):
            if n % start == 0:
                yield from rec(prefix + [n])

    yield from rec([])


def _unit_tuples(degrees):
    return itertools.product(*(_units(n) for n in degrees))


SUITES = {
    "elemops": _suite_elemops,
    "symplectic": _suite_symplectic,
    "qtorus": _suite_qtorus,
}


def selftest(bound: int = 12) -> dict:
    if bound < 2:
        raise InvalidInputError("bound must be at least 2")
    suites = []
    for name in sorted(SUITES):
        start = time.perf_counter()
        res = SUITES[name](bound)
        res["passed"] = not res["failures"]
        res["seconds"] = round(time.perf_counter() - start, 3)
        suites.append(res)
    return {"bound": bound, "suites": suites, "passed": all(s["passed"] for s in suites)}


def cmd_selftest(payload):
    bound = payload.get("bound", 12)
    if not isinstance(bound, int) or isinstance(bound, bool):
        raise InvalidInputError("bound must be an integer")
    report = selftest(bound)
    report["input"] = {"bound": bound}
    if not report["passed"]:
        raise _SelftestFailed(report)
    return report, None


class _SelftestFailed(Exception):
    def __init__(self, report):
        super().__init__("selftest failed")
        self.report = report


# -- driver ------------------------------------------------------------------

COMMANDS = {
    "snf": (cmd_snf, [("matrix", "json")], "Smith normal form of an integer matrix"),
    "wedge": (cmd_wedge, [("group", "json"), ("elements", "json")], "wedge of a tuple of group elements"),
    "elemops": (cmd_elemops, [("group", "json"), ("a", "json"), ("b", "json")], "elementary operations carrying a to b"),
    "glz-witness": (cmd_glz_witness, [("group", "json"), ("a", "json"), ("b", "json")], "GL_d(Z) matrix relating a and b"),
    "symplectic-check": (cmd_symplectic_check, [("degrees", "json"), ("matrix", "json")], "check a symplectic automorphism"),
    "classify-equiv": (cmd_classify_equiv, [("group", "json"), ("v", "json"), ("w", "json")], "birational equivalence of two representations"),
    "classify-count": (cmd_classify_count, [("group", "json"), ("dim", "int")], "count birational classes"),
    "katsylo": (cmd_katsylo, [("group", "json")], "does some dimension have inequivalent faithful representations"),
    "counterexample": (cmd_counterexample, [("n", "int"), ("r", "int"), ("params", "json"), ("torus_rank", "int")], "power-residue counterexamples"),
    "qtorus": (cmd_qtorus, [("degrees", "json"), ("exponents", "json")], "isomorphism of quantum tori"),
    "heisenberg": (cmd_heisenberg, [("group", "json"), ("degrees", "json"), ("prime", "int")], "Heisenberg representation checks"),
    "selftest": (cmd_selftest, [("bound", "int")], "run the oracle cross-check suites"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wedgeinv", description="Exact wedge-product invariants (JSON in, JSON out).")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    for name, (_, fields, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--input", help="JSON payload file, or - for stdin")
        p.add_argument("--assert", dest="assert_yes", action="store_true", help="exit 1 when a yes/no answer is no")
        p.add_argument("--out", help="write the JSON response to this file instead of stdout")
        for key, kind in fields:
            p.add_argument("--" + key.replace("_", "-"), dest=key, type=int if kind == "int" else str)
        p.set_defaults(_fields=fields)
    return parser


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, default=_default) + "\n"


def _default(x):
    if isinstance(x, QmodZ):
        return str(x)
    raise TypeError(f"not serializable: {type(x).__name__}")


def _emit(obj, out: Optional[str]):
    text = _dump(obj)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _error(kind: str, message: str, command: Optional[str]) -> dict:
    return {"schema": SCHEMA, "command": command, "error": {"kind": kind, "message": message}}


def run(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    command, out = None, None
    try:
        args = build_parser().parse_args(argv)
        command, out = args.command, getattr(args, "out", None)
        if command is None:
            raise _ArgError("a subcommand is required")
        handler = COMMANDS[command][0]
        response, verdict = handler(_load_payload(args))
    except _ArgError as exc:
        _emit(_error("usage", str(exc), command), out)
        return EXIT_INVALID
    except _SelftestFailed as exc:
        report = dict(exc.report, schema=SCHEMA, command=command, provenance=_provenance(command))
        _emit(report, out)
        return EXIT_CONSISTENCY
    except ConsistencyError as exc:
        _emit(_error("consistency", str(exc), command), out)
        return EXIT_CONSISTENCY
    except InvalidInputError as exc:
        _emit(_error("invalid_input", str(exc), command), out)
        return EXIT_INVALID
    response["schema"] = SCHEMA
    response["command"] = command
    response["provenance"] = _provenance(command, query=verdict is not None)
    _emit(response, out)
    if args.assert_yes and verdict is False:
        return EXIT_NO
    return EXIT_OK


def main():
    sys.exit(run())
