"""``bch`` command line: one JSON request in, one JSON response out.

    bch <command> [--verify] [--tol T] [--input FILE|-]

Complex numbers are ``[re, im]`` (plain numbers are accepted on input),
matrices are row-major nested arrays and the point at infinity is the
string ``"infinity"``. Exit codes: 0 ok, 2 parse error, 3 validation
error, 4 compute error.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from typing import Callable

import jsonschema
import numpy as np

from . import __version__
from .core import PairStructure, pair_combine
from .errors import BCHError
from .jacobi import FIELD_NAMES, TripleStructure
from .mat2 import (
    INF,
    Mat2,
    classify,
    expm2,
    fixed_points,
    gauss_decompose,
    log_gl2,
    log_sl2,
    max_diff,
    mobius,
    recompose,
)
from .oracle import dynkin_bch, pair_table, triple_oracle, triple_table, virasoro_table
from .triple import triple_combine
from .virasoro import (
    VirasoroElement,
    VirasoroParams,
    subalgebra_one_param,
    subalgebra_two_param,
    virasoro_triple,
    virasoro_two_factor,
)

EXIT_OK, EXIT_PARSE, EXIT_VALIDATION, EXIT_COMPUTE = 0, 2, 3, 4
VERIFY_ORDER = 8

# JSON field names of the ten structure constants
TRIPLE_KEYS = ("u", "v", "cXY", "w", "z", "dYZ", "m", "n", "p", "eXZ")


class ParseError(Exception):
    pass


def cx(value) -> complex:
    if isinstance(value, (list, tuple)):
        return complex(value[0], value[1])
    return complex(value)


def enc(z) -> list:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def enc_mat(m: Mat2) -> list:
    return [[enc(x) for x in row] for row in m.rows()]


def dec_mat(rows) -> Mat2:
    return Mat2(cx(rows[0][0]), cx(rows[0][1]), cx(rows[1][0]), cx(rows[1][1]))


def enc_point(z):
    return "infinity" if z is INF else enc(z)


def enc_element(e: VirasoroElement) -> dict:
    return {"modes": {str(j): enc(a) for j, a in e.modes.items()}, "central": enc(e.central)}


def load_schema(command: str) -> dict:
    text = resources.files("closedbch").joinpath("schemas", f"{command}.json").read_text()
    return json.loads(text)


def _residual(a, b) -> float:
    return float(np.max(np.abs(np.asarray(a, dtype=complex) - np.asarray(b, dtype=complex))))


# each handler returns (result, diagnostics)


def _pair(payload, verify, tol):
    p = PairStructure(cx(payload["u"]), cx(payload["v"]), cx(payload["c"]))
    r = pair_combine(p)
    diags = []
    if verify:
        t = pair_table(p.u, p.v, p.c)
        ref = dynkin_bch(t, t.basis("X"), t.basis("Y"), VERIFY_ORDER)
        diags.append(f"oracle residual (order {VERIFY_ORDER}): {_residual(r.as_tuple(), ref):.3e}")
    return {"x": enc(r.coeff_x), "y": enc(r.coeff_y), "i": enc(r.coeff_i)}, diags


def _triple(payload, verify, tol):
    st = payload["structure"]
    s = TripleStructure(**{f: cx(st.get(k, 0)) for f, k in zip(FIELD_NAMES, TRIPLE_KEYS)})
    hint = cx(payload["hint"]) if "hint" in payload else None
    total = cx(payload.get("total", 1.0))
    kwargs = {"hint": hint}
    if tol is not None:
        kwargs["tol"] = tol
    r = triple_combine(s, total, **kwargs)
    sp = r.split
    diags = [
        f"selected alpha = {sp.alpha:.15g} (closest to total/2 of {len(r.roots)} root(s))",
        "root validated by series spot check" if r.oracle_checked
        else "root not validated (constants above the spot-check range)",
    ]
    if verify:
        t = triple_table(s)
        ref = triple_oracle(t, t.basis("X"), total * t.basis("Y"), t.basis("Z"), VERIFY_ORDER)
        diags.append(f"oracle residual (order {VERIFY_ORDER}): {_residual(r.as_tuple(), ref):.3e}")
    result = {
        "a": enc(r.a), "b": enc(r.b), "cZ": enc(r.c_z), "dI": enc(r.d_i),
        "alpha": enc(sp.alpha), "beta": enc(sp.beta),
        "uTilde": enc(sp.u_tilde), "vTilde": enc(sp.v_tilde), "cTilde": enc(sp.c_tilde),
        "roots": [enc(x.alpha) for x in r.roots],
        "oracleChecked": r.oracle_checked,
    }
    return result, diags


def _vir_result(v):
    return {
        "coeffLminus": enc(v.coeff_lminus), "coeffL0": enc(v.coeff_l0),
        "coeffLplus": enc(v.coeff_lplus), "coeffI": enc(v.coeff_i),
        "lamPlusRoot": enc(v.lam_plus_root), "lamMinusRoot": enc(v.lam_minus_root),
        "ck": enc(v.ck), "degenerate": v.degenerate,
    }


def _vir_verify(k, lm, l0, lp, cc, v):
    t = virasoro_table(k, cc)
    ref = triple_oracle(
        t, t.vector(**{"L-k": lm}), t.vector(L0=l0), t.vector(Lk=lp), VERIFY_ORDER
    )
    return f"oracle residual (order {VERIFY_ORDER}): {_residual(v.as_tuple(), ref):.3e}"


def _vir_triple(payload, verify, tol):
    p = VirasoroParams(
        payload["k"], cx(payload["lamMinus"]), cx(payload["lam0"]), cx(payload["lamPlus"]),
        cx(payload.get("centralCharge", 0)),
    )
    v = virasoro_triple(p)
    diags = [f"lambda roots: plus = {v.lam_plus_root:.15g}, minus = {v.lam_minus_root:.15g}"]
    if v.degenerate:
        diags.append("coincident roots: prefactor taken at its limit")
    if verify:
        diags.append(_vir_verify(p.k, p.lam_minus, p.lam0, p.lam_plus, p.central_charge, v))
    return _vir_result(v), diags


def _vir_two(payload, verify, tol):
    k = payload["k"]
    lm, lp = cx(payload["lamMinus"]), cx(payload["lamPlus"])
    cc = cx(payload.get("centralCharge", 0))
    v = virasoro_two_factor(k, lm, lp, cc)
    diags = [f"lambda roots: plus = {v.lam_plus_root:.15g}, minus = {v.lam_minus_root:.15g}"]
    if verify:
        diags.append(_vir_verify(k, lm, 0.0, lp, cc, v))
    return _vir_result(v), diags


def _subalgebra(payload, verify, tol):
    n = payload["n"]
    cc = cx(payload.get("centralCharge", 0))
    if payload["family"] == "two-param":
        x, y, pair = subalgebra_two_param(n, cx(payload["delta"]), cx(payload["eps"]), cc)
    else:
        x, y, pair = subalgebra_one_param(n, cx(payload["alpha"]), cc)
    r = pair_combine(pair)
    diags = []
    if verify:
        t = pair_table(pair.u, pair.v, pair.c)
        ref = dynkin_bch(t, t.basis("X"), t.basis("Y"), VERIFY_ORDER)
        diags.append(f"oracle residual (order {VERIFY_ORDER}): {_residual(r.as_tuple(), ref):.3e}")
    result = {
        "x": enc_element(x), "y": enc_element(y),
        "pair": {"u": enc(pair.u), "v": enc(pair.v), "c": enc(pair.c)},
        "combined": {"x": enc(r.coeff_x), "y": enc(r.coeff_y), "i": enc(r.coeff_i)},
    }
    return result, diags


def _branch_notes(g: Mat2):
    cls = classify(g)
    notes = [f"class {cls.kind.value}, t = {cls.t:.15g}"]
    if cls.kind.value == "scalar":
        notes.append("scalar input: fixed diagonal convention")
    elif cls.t.real > 0.5:
        notes.append("scale factor asinh(s)/s (regular at t = 1)")
    else:
        notes.append(f"scale factor Log(nu_+)/s with nu_+ = {cls.nu_plus:.15g}")
    return notes


def _mat2_log(payload, verify, tol):
    g = dec_mat(payload["matrix"])
    x = log_sl2(g)
    diags = _branch_notes(g)
    if verify:
        diags.append(f"round-trip residual: {max_diff(expm2(x), g):.3e}")
    return {"log": enc_mat(x)}, diags


def _mat2_gl2_log(payload, verify, tol):
    g = dec_mat(payload["matrix"])
    x = log_gl2(g)
    diags = [f"det = {g.det:.15g}"]
    if verify:
        diags.append(f"round-trip residual: {max_diff(expm2(x), g):.3e}")
    return {"log": enc_mat(x)}, diags


def _mat2_decompose(payload, verify, tol):
    g = dec_mat(payload["matrix"])
    f = gauss_decompose(g)
    diags = []
    if verify:
        diags.append(f"recomposition residual: {max_diff(recompose(f), g):.3e}")
    return {
        "lamMinus1": enc(f.lam_minus1), "lam0": enc(f.lam0), "lam1": enc(f.lam1),
        "expNegLamPlus": enc(f.exp_neg_lam_plus), "expNegLamMinus": enc(f.exp_neg_lam_minus),
    }, diags


def _mat2_fixed(payload, verify, tol):
    g = dec_mat(payload["matrix"])
    fp = fixed_points(g)
    diags = []
    if verify:
        worst = 0.0
        for z in (fp.z_plus, fp.z_minus):
            if z is not INF:
                worst = max(worst, abs(mobius(g, z) - z) / (1 + abs(z)))
        diags.append(f"fixed-point residual: {worst:.3e}")
    return {
        "zPlus": enc_point(fp.z_plus), "zMinus": enc_point(fp.z_minus), "repeated": fp.repeated,
    }, diags


def _oracle_check(payload, verify, tol):
    target = payload["target"]
    order = payload.get("order", 10)
    inner = payload["payload"]
    if target == "pair":
        p = PairStructure(cx(inner["u"]), cx(inner["v"]), cx(inner["c"]))
        closed = pair_combine(p).as_tuple()
        t = pair_table(p.u, p.v, p.c)
        ref = dynkin_bch(t, t.basis("X"), t.basis("Y"), order)
    elif target == "triple":
        st = inner["structure"]
        s = TripleStructure(**{f: cx(st.get(k, 0)) for f, k in zip(FIELD_NAMES, TRIPLE_KEYS)})
        closed = triple_combine(s).as_tuple()
        t = triple_table(s)
        ref = triple_oracle(t, t.basis("X"), t.basis("Y"), t.basis("Z"), order)
    else:
        p = VirasoroParams(
            inner["k"], cx(inner["lamMinus"]), cx(inner["lam0"]), cx(inner["lamPlus"]),
            cx(inner.get("centralCharge", 0)),
        )
        closed = virasoro_triple(p).as_tuple()
        t = virasoro_table(p.k, p.central_charge)
        ref = triple_oracle(
            t, t.vector(**{"L-k": p.lam_minus}), t.vector(L0=p.lam0), t.vector(Lk=p.lam_plus), order
        )
    res = _residual(closed, ref)
    diags = [f"oracle order {order}"]
    return {
        "closedForm": [enc(x) for x in closed],
        "oracle": [enc(x) for x in ref],
        "residual": res,
    }, diags


COMMANDS: dict[str, Callable] = {
    "pair": _pair,
    "triple": _triple,
    "virasoro-triple": _vir_triple,
    "virasoro-two": _vir_two,
    "subalgebra": _subalgebra,
    "mat2-log": _mat2_log,
    "mat2-gl2-log": _mat2_gl2_log,
    "mat2-decompose": _mat2_decompose,
    "mat2-fixed-points": _mat2_fixed,
    "oracle-check": _oracle_check,
}


def run(command: str, payload, *, verify: bool = False, tol=None):
    """Validate and dispatch one request. Returns ``(exit_code, response)``."""
    schema = load_schema(command)
    try:
        jsonschema.validate(payload, schema["input"])
    except jsonschema.ValidationError as exc:
        return EXIT_VALIDATION, _error("validation_error", exc.message)
    try:
        result, diags = COMMANDS[command](payload, verify, tol)
    except BCHError as exc:
        return EXIT_COMPUTE, _error(exc.code, str(exc))
    except (ValueError, ZeroDivisionError, OverflowError) as exc:
        return EXIT_COMPUTE, _error("compute_error", str(exc))
    jsonschema.validate(result, schema["output"])
    return EXIT_OK, {
        "status": "ok", "command": command, "version": __version__,
        "result": result, "diagnostics": diags,
    }


def _error(code, message):
    return {
        "status": "error", "version": __version__,
        "error": {"code": code, "message": message}, "diagnostics": [],
    }


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bch", description="Closed-form BCH combinations.")
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--verify", action="store_true", help="attach oracle residuals")
    ap.add_argument("--tol", type=float, default=None, help="root-solver tolerance")
    ap.add_argument("--input", default="-", help="request file, '-' for stdin")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return ap


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        try:
            text = _read(args.input)
        except OSError as exc:
            raise ParseError(f"cannot read {args.input}: {exc}") from exc
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from exc
    except ParseError as exc:
        code, response = EXIT_PARSE, _error("parse_error", str(exc))
    else:
        code, response = run(args.command, payload, verify=args.verify, tol=args.tol)

    json.dump(response, sys.stdout, sort_keys=True, indent=2)
    sys.stdout.write("\n")
    for line in response["diagnostics"]:
        print(f"bch: {line}", file=sys.stderr)
    if response["status"] == "error":
        err = response["error"]
        print(f"bch: error [{err['code']}] {err['message']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
