"""Command-line front end.

Subcommands ``certify``, ``codebook``, ``skew``, ``verify`` and
``print-config``.  Reports are JSON documents whose body (everything except
the ``timing`` field) is a pure function of the configuration.

Exit codes: 0 success or Division, 1 configuration error, 2 NotDivision,
3 Unknown, 4 enumeration cap exceeded, 5 stale config hash, 6 a claim in a
report failed to re-verify.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from typing import Any

from . import __version__
from .algebra import AlgElement, CyclicAlgebra
from .config import ConfigError, Project, ProjectConfig
from .interval import RealInterval, format_decimal
from .iterated import (CRITERIA, DivisionVerdict, ItElement, IteratedAlgebra,
                       division_certify, petit_ring, recheck_certificate,
                       root_of_unity_gate)
from .numberfield import FieldElement
from .skewpoly import (SkewPoly, SkewRing, SufficientCondition, irreducibility_status,
                       petit_mul, right_nucleus_member, sp_divmod_left, sp_divmod_right,
                       sp_mul, tau_power_criterion)
from .stbc import EnumerationCapExceeded, abs2_interval, encode, enumerate_and_report

EXIT_OK, EXIT_CONFIG, EXIT_NOT_DIVISION, EXIT_UNKNOWN = 0, 1, 2, 3
EXIT_CAP, EXIT_STALE, EXIT_VERIFY = 4, 5, 6
STATUS_EXIT = {"Division": EXIT_OK, "NotDivision": EXIT_NOT_DIVISION, "Unknown": EXIT_UNKNOWN}
DIGITS_OUT = 20


# -- serialization -----------------------------------------------------------------

def ser(x) -> Any:
    if isinstance(x, FieldElement):
        return x.to_string()
    if isinstance(x, AlgElement):
        return x.to_strings()
    if isinstance(x, ItElement):
        return x.to_strings()
    if isinstance(x, SkewPoly):
        return [ser(c) for c in x.coeffs]
    if isinstance(x, (list, tuple)):
        return [ser(v) for v in x]
    return x


def ser_interval(iv: RealInterval | None):
    if iv is None:
        return None
    lo, hi = iv.to_strings(DIGITS_OUT)
    return {"lo": lo, "hi": hi}


def ser_verdict(v: DivisionVerdict) -> dict:
    out = {
        "status": v.status,
        "certificate": v.certificate,
        "assumptions": list(v.assumptions),
        "chain": [{"name": c.name, "kind": c.kind, "holds": c.holds,
                   "hypotheses": dict(c.hypotheses), "detail": c.detail} for c in v.chain],
        "witness": None,
    }
    if v.witness is not None:
        w = v.witness
        out["witness"] = {
            "source": w.source, "x": ser(w.x), "y": ser(w.y),
            "z": ser(w.z) if w.z is not None else None,
            "factor": ({"left": ser(w.factor.left), "right": ser(w.factor.right)}
                       if w.factor is not None else None),
        }
    return out


def parse_alg(D: CyclicAlgebra, v) -> AlgElement:
    if isinstance(v, str):
        return D.scalar(D.K(v))
    return D.element([D.K(c) for c in v])


def parse_it(A: IteratedAlgebra, v) -> ItElement:
    return A.element([parse_alg(A.D, p) for p in v])


def parse_coeff(R: SkewRing, v):
    if R.is_algebra:
        return parse_alg(R.domain, v)
    if not isinstance(v, str):
        raise ConfigError("", "field coefficients must be strings")
    return R.domain(v)


def parse_poly(R: SkewRing, coeffs) -> SkewPoly:
    return SkewPoly(R, tuple(parse_coeff(R, c) for c in coeffs))


# -- commands ----------------------------------------------------------------------

def _budgets(cfg: ProjectConfig, args) -> dict:
    b = cfg.budgets.to_dict()
    if getattr(args, "height", None) is not None:
        b["height"] = args.height
    if getattr(args, "precision", None) is not None:
        b["precision"] = args.precision
    return b


def _iterated(project: Project, name: str) -> IteratedAlgebra:
    A = project.algebra(name)
    if not isinstance(A, IteratedAlgebra):
        raise ConfigError(f"algebras.{name}", "certification needs an iterated or tensor algebra")
    return A


def cmd_certify(project: Project, name: str, budgets: dict) -> tuple[dict, int]:
    A = _iterated(project, name)
    v = division_certify(A, budgets["height"], search_cap=budgets["search_cap"])
    return {"algebra": name, "verdict": ser_verdict(v)}, STATUS_EXIT[v.status]


def cmd_codebook(project: Project, name: str, budgets: dict, *, workers: int = 1,
                 csv_path: str | None = None) -> tuple[dict, int]:
    A, cons, layout = project.code(name)
    verdict = division_certify(A, budgets["height"], search_cap=budgets["search_cap"])
    rep = enumerate_and_report(A, cons, layout, workers=workers, csv_path=csv_path,
                               cap=budgets["enumeration_cap"], precision=budgets["precision"],
                               precision_ceiling=budgets["precision_ceiling"], verdict=verdict)
    thr = None
    if rep.min_det_abs2 is not None:
        thr = format_decimal(rep.min_det_abs2.lo, DIGITS_OUT, "down")
    body = {
        "code": name,
        "algebra": dict(project.cfg.codes)[name].algebra,
        "size": rep.size,
        "nonzero_codewords": rep.nonzero,
        "fully_diverse": rep.fully_diverse,
        "diversity_witness": ser(rep.diversity_witness) if rep.diversity_witness else None,
        "det_in_F": rep.det_in_F,
        "distinct_determinants": rep.distinct_dets,
        "min_det_abs2": ser_interval(rep.min_det_abs2),
        "min_det_abs2_lower_bound": thr,
        "min_det_exact": ser(rep.min_det_exact) if rep.min_det_exact is not None else None,
        "argmin": ser(rep.argmin) if rep.argmin is not None else None,
        "tie_set": ser(rep.tie_set),
        "precision_digits": rep.precision_used,
        "rate": rep.rate,
        "complexity_exponent": str(rep.complexity_exponent),
        "verdict": ser_verdict(verdict),
        "notes": ["code entries come from the ring of integers of K through the layout "
                  "multipliers; the bound on |det|^2 is checked on this finite set only"],
    }
    return body, EXIT_OK


def _skew_ring(project: Project, q) -> SkewRing:
    dom = project.domain(q.get("domain"))
    sigma = project.automorphism(q.get("sigma"))
    if q.get("inverse", False):
        sigma = sigma.inverse()
    return SkewRing(dom, sigma)


def cmd_skew(project: Project, name: str, budgets: dict) -> tuple[dict, int]:
    q = dict(project.cfg.skew).get(name)
    if q is None:
        raise ConfigError("skew", f"unknown query {name!r}")
    out: dict[str, Any] = {"query": name, "op": q.op}
    if q.op == "irred":
        certs = []
        if q.get("algebra") is not None:
            A = _iterated(project, q.get("algebra"))
            R, f = petit_ring(A)
            v = division_certify(A, budgets["height"], search_cap=budgets["search_cap"])
            if v.status == "Division":
                c = next(c for c in v.chain if c.name == v.certificate)
                certs.append(SufficientCondition(c.name, dict(c.hypotheses)))
            root = root_of_unity_gate(A)
            out["algebra"] = q.get("algebra")
        else:
            R = _skew_ring(project, q)
            f = parse_poly(R, q.get("f"))
            root = q.get("root_of_unity", False)
        ver = irreducibility_status(f, budget=budgets["height"], root_of_unity=root,
                                    certificates=certs, max_candidates=budgets["search_cap"])
        out.update({"f": ser(f), "status": ver.status, "certificate": ver.certificate,
                    "hypotheses": dict(ver.hypotheses), "searched": ver.searched,
                    "witness": ({"left": ser(ver.witness.left), "right": ser(ver.witness.right)}
                                if ver.witness else None)})
        return out, EXIT_OK
    R = _skew_ring(project, q)
    g = parse_poly(R, q.get("g"))
    f = parse_poly(R, q.get("f"))
    out.update({"g": ser(g), "f": ser(f)})
    if q.op in ("divmod", "divmod-left"):
        if q.op == "divmod":
            qq, r = sp_divmod_right(g, f)
            ok = sp_mul(qq, f) + r == g
        else:
            qq, r = sp_divmod_left(g, f)
            ok = sp_mul(f, qq) + r == g
        out.update({"q": ser(qq), "r": ser(r), "reconstructs": ok})
    elif q.op == "petit-mul":
        h = parse_poly(R, q.get("h"))
        out.update({"h": ser(h), "product": ser(petit_mul(g, h, f))})
    else:
        out["member"] = right_nucleus_member(g, f)
    return out, EXIT_OK


# -- verification ------------------------------------------------------------------

def _check(cond: bool, what: str, failures: list[str]):
    if not cond:
        failures.append(what)


def verify_verdict(A: IteratedAlgebra, v: dict, failures: list[str], where: str):
    if v["status"] == "Division":
        name = v["certificate"]
        ok, hyp = recheck_certificate(A, name)
        _check(ok, f"{where}: hypotheses of {name} do not hold", failures)
        recorded = next((c["hypotheses"] for c in v["chain"] if c["name"] == name), None)
        _check(recorded == hyp, f"{where}: recorded hypotheses of {name} differ", failures)
    elif v["status"] == "NotDivision":
        w = v.get("witness")
        if w is None:
            failures.append(f"{where}: NotDivision without a witness")
            return
        x, y = parse_it(A, w["x"]), parse_it(A, w["y"])
        _check(bool(x) and bool(y) and (x * y).is_zero(),
               f"{where}: witness product is not zero", failures)
        if w.get("factor"):
            R, f = petit_ring(A)
            g = parse_poly(R, w["factor"]["left"])
            h = parse_poly(R, w["factor"]["right"])
            _check(sp_mul(g, h) == f, f"{where}: factor witness does not rebuild f", failures)
    # Unknown makes no claim


def verify_report(report: dict, project: Project) -> list[str]:
    failures: list[str] = []
    body = report["results"]
    budgets = report.get("budgets", project.cfg.budgets.to_dict())
    cmd = report["command"]
    if cmd == "certify":
        verify_verdict(_iterated(project, body["algebra"]), body["verdict"], failures, "verdict")
    elif cmd == "codebook":
        A, cons, layout = project.code(body["code"])
        verify_verdict(A, body["verdict"], failures, "verdict")
        if body["diversity_witness"] is not None:
            cw = encode(A, [A.K(s) for s in body["diversity_witness"]], layout)
            _check(any(not A.K(s).is_zero() for s in body["diversity_witness"]),
                   "diversity witness is the zero vector", failures)
            _check(cw.det_exact.is_zero(), "diversity witness has nonzero determinant", failures)
        if body["argmin"] is not None:
            cw = encode(A, [A.K(s) for s in body["argmin"]], layout)
            _check(cw.det_exact.to_string() == body["min_det_exact"],
                   "argmin determinant differs", failures)
            iv = abs2_interval(cw.det_exact, budgets["precision_ceiling"])
            lo, hi = body["min_det_abs2"]["lo"], body["min_det_abs2"]["hi"]
            _check(Fraction(lo) <= iv.hi and iv.lo <= Fraction(hi),
                   "argmin |det|^2 outside the recorded interval", failures)
    elif cmd == "skew":
        q = dict(project.cfg.skew)[body["query"]]
        if q.op == "irred":
            if q.get("algebra") is not None:
                A = _iterated(project, q.get("algebra"))
                R, f = petit_ring(A)
            else:
                R = _skew_ring(project, q)
                f = parse_poly(R, q.get("f"))
            if body["status"] == "Reducible":
                w = body["witness"]
                _check(sp_mul(parse_poly(R, w["left"]), parse_poly(R, w["right"])) == f,
                       "factor witness does not rebuild f", failures)
            elif body["status"] == "Irreducible":
                cert = body["certificate"]
                prefix = "SufficientCondition("
                inner = cert[len(prefix):-1] if cert.startswith(prefix) else None
                if q.get("algebra") is not None and inner in CRITERIA:
                    ok = recheck_certificate(A, inner)[0]
                elif inner == "tau(d^n)!=d^n":
                    ok = tau_power_criterion(f, root_of_unity=q.get("root_of_unity", False)).holds
                else:
                    ok = cert == "Degree1" and f.degree == 1
                _check(ok, f"hypotheses of {cert} do not hold", failures)
        else:
            fresh, _ = cmd_skew(project, body["query"], budgets)
            _check(fresh == body, "recomputed skew result differs", failures)
    else:
        failures.append(f"unknown command {cmd!r}")
    return failures


# -- entry point -------------------------------------------------------------------

def build_report(command: str, cfg: ProjectConfig, config_path: str | None, results: dict,
                 budgets: dict, timing: dict) -> dict:
    return {
        "tool": "cyclicalg",
        "version": __version__,
        "command": command,
        "config_path": config_path,
        "config_hash": cfg.hash(),
        "config": cfg.to_dict(),
        "budgets": budgets,
        "results": results,
        "timing": timing,
    }


def report_body(report: dict) -> str:
    """Canonical text of a report without its timing field."""
    return json.dumps({k: v for k, v in report.items() if k != "timing"},
                      sort_keys=True, indent=2)


def _emit(report: dict, out: str | None):
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cyclicalg", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, needs_name=True):
        sp.add_argument("--config", required=True, help="JSON configuration file")
        sp.add_argument("--out", help="write the JSON report here")
        if needs_name:
            sp.add_argument("name", help="entry of the configuration to run")
        sp.add_argument("--height", type=int, help="override the search height budget")
        sp.add_argument("--precision", type=int, help="override the decimal precision")

    common(sub.add_parser("certify", help="division certification of an algebra"))
    cb = sub.add_parser("codebook", help="enumerate a codebook and report its determinants")
    common(cb)
    cb.add_argument("--csv", help="stream every codeword to this CSV file")
    cb.add_argument("--workers", type=int, default=1, help="worker processes")
    common(sub.add_parser("skew", help="run a skew-polynomial query"))
    v = sub.add_parser("verify", help="re-check every claim of a report")
    v.add_argument("report")
    v.add_argument("--config", help="config file to compare against (default: the recorded path)")
    pc = sub.add_parser("print-config", help="print the normalized configuration")
    pc.add_argument("--config", required=True)
    return p


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "verify":
            return _run_verify(args)
        cfg = ProjectConfig.load(args.config)
        if args.command == "print-config":
            sys.stdout.write(json.dumps(cfg.to_dict(), sort_keys=True, indent=2) + "\n")
            return EXIT_OK
        project = Project(cfg)
        budgets = _budgets(cfg, args)
        t0 = time.perf_counter()
        timing: dict[str, Any] = {}
        if args.command == "certify":
            results, code = cmd_certify(project, args.name, budgets)
        elif args.command == "codebook":
            timing["workers"] = args.workers
            results, code = cmd_codebook(project, args.name, budgets, workers=args.workers,
                                         csv_path=args.csv)
        else:
            results, code = cmd_skew(project, args.name, budgets)
        timing["seconds"] = round(time.perf_counter() - t0, 3)
        _emit(build_report(args.command, cfg, args.config, results, budgets, timing), args.out)
        return code
    except ConfigError as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return EXIT_CONFIG
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CONFIG
    except EnumerationCapExceeded as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CAP


def _run_verify(args) -> int:
    with open(args.report) as fh:
        report = json.load(fh)
    cfg = ProjectConfig.from_dict(report["config"])
    if cfg.hash() != report.get("config_hash"):
        sys.stderr.write("stale report: embedded config does not match its hash\n")
        return EXIT_STALE
    path = args.config or report.get("config_path")
    if path:
        try:
            current = ProjectConfig.load(path)
        except OSError:
            current = None
        if current is not None and current.hash() != report["config_hash"]:
            sys.stderr.write(f"stale report: {path} has changed since the report was made\n")
            return EXIT_STALE
    try:
        failures = verify_report(report, Project(cfg))
    except (ValueError, KeyError, TypeError, ArithmeticError) as exc:
        failures = [f"malformed report: {exc}"]
    for f in failures:
        sys.stderr.write(f"FAILED: {f}\n")
    if failures:
        return EXIT_VERIFY
    sys.stdout.write("all claims re-verified\n")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
