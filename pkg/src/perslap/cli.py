"""Command-line entry point.

Exit codes: 0 ok, 2 unreadable or malformed input, 3 domain error (including
enumeration guards), 4 failed self-check.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
from pathlib import Path

import numpy as np

from .checks import random_filtration, run_selftest
from .cheeger import cheeger_report
from .complex import ParseError, SimplicialComplex, make_pair, parse_complex, parse_filtration
from .filtration import all_pairs_up_laplacians, monotonicity_violations, persistent_spectra
from .laplacian import hodge_laplacian, laplacian_spectrum, betti
from .linalg import Tolerances
from .persistent import persistent_betti, persistent_laplacian
from .resistance import (effective_resistance_graph, kron_resistances, simplicial_effective_resistance,
                         two_point_persistent_laplacian)

EXIT_OK, EXIT_PARSE, EXIT_DOMAIN, EXIT_SELFCHECK = 0, 2, 3, 4
METHOD_ATOL = 1e-6


class SelfCheckFailed(RuntimeError):
    def __init__(self, doc: dict, msg: str):
        super().__init__(msg)
        self.doc = doc


def matrix_payload(M: np.ndarray) -> dict:
    M = np.asarray(M, dtype=float)
    return {"rows": int(M.shape[0]), "cols": int(M.shape[1]), "data": M.tolist()}


def _read(path: str) -> tuple[str, dict]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc
    return text, {"path": path, "sha256": hashlib.sha256(text.encode()).hexdigest()}


def _load_complexes(paths) -> tuple[list[SimplicialComplex], list[dict]]:
    out, info = [], []
    for p in paths or []:
        text, meta = _read(p)
        out.append(parse_complex(text))
        info.append(meta)
    return out, info


def _load_filtration(path):
    text, meta = _read(path)
    return parse_filtration(text), meta


def _tol(args) -> Tolerances:
    return Tolerances(rank_tol=args.tol) if args.tol is not None else Tolerances()


def _doc(command: str, inputs: dict, result: dict, tol: Tolerances, method: str = "none") -> dict:
    return {"command": command, "inputs": inputs, "result": result,
            "tolerances": tol.as_dict(), "method": method}


def _pair_from_args(args, inputs: dict):
    """Pair from two complex files, or from a filtration and ``--s/--t``."""
    if args.filtration:
        F, meta = _load_filtration(args.filtration)
        inputs["filtration"] = meta
        if args.s is None or args.t is None:
            raise ValueError("--filtration needs --s and --t")
        inputs.update(s=args.s, t=args.t)
        return F.pair_at(args.s, args.t)
    Ks, metas = _load_complexes(args.complex)
    inputs["complex"] = metas
    if len(Ks) == 1:
        return make_pair(Ks[0], Ks[0])
    if len(Ks) != 2:
        raise ValueError("give K and L as two --complex files, or --filtration with --s/--t")
    return make_pair(Ks[0], Ks[1])


def cmd_laplacian(args) -> dict:
    tol = _tol(args)
    Ks, metas = _load_complexes(args.complex)
    if len(Ks) != 1:
        raise ValueError("lap takes exactly one --complex")
    K = Ks[0]
    lap = hodge_laplacian(K, args.q)
    vals = laplacian_spectrum(K, args.q, "full", tol=tol)
    result = {"q": args.q, "full": matrix_payload(lap.full), "up": matrix_payload(lap.up),
              "down": matrix_payload(lap.down), "spectrum": [float(x) for x in vals],
              "betti": betti(K, args.q, tol)}
    return _doc("lap", {"complex": metas, "q": args.q}, result, tol, "boundary")


def cmd_persistent(args) -> dict:
    tol = _tol(args)
    inputs = {"q": args.q}
    pair = _pair_from_args(args, inputs)
    methods = ["schur", "reduction"] if args.method == "both" else [args.method]
    mats = {m: persistent_laplacian(pair, args.q, m, tol) for m in methods}
    P = mats[methods[0]]
    result = {"q": args.q, "full": matrix_payload(P.full), "up": matrix_payload(P.up),
              "down": matrix_payload(P.down)}
    if args.betti:
        result["betti"] = persistent_betti(pair, args.q, methods[0], tol)
    if args.spectrum:
        M = P.full
        if M.size and np.allclose(M, M.T, atol=1e-8):
            result["spectrum"] = [float(x) for x in np.linalg.eigvalsh((M + M.T) / 2)]
        else:
            result["spectrum"] = [float(x) for x in np.sort(np.linalg.eigvals(M).real)] if M.size else []
    doc = _doc("pers", inputs, result, tol, args.method)
    if args.method == "both":
        a, b = mats["schur"].full, mats["reduction"].full
        disc = float(np.max(np.abs(a - b))) if a.size else 0.0
        result["max_discrepancy"] = disc
        if disc > METHOD_ATOL:
            raise SelfCheckFailed(doc, f"methods disagree by {disc:.3e}")
    return doc


def cmd_filtration(args) -> dict:
    tol = _tol(args)
    up_only = not args.full
    inputs = {"q": args.q, "up_only": up_only}
    if args.check_monotonicity:
        if args.filtration:
            F, meta = _load_filtration(args.filtration)
            inputs["filtration"] = meta
            filts = [F]
        else:
            inputs.update(seed=args.seed, trials=args.trials)
            rng = np.random.default_rng(args.seed)
            filts = [random_filtration(rng) for _ in range(args.trials)]
        violations = []
        for F in filts:
            if args.q <= F.complex.dim:
                violations += monotonicity_violations(F, args.q, up_only, tol=tol)
        doc = _doc("filt", inputs, {"checked": len(filts), "violations": violations}, tol, "kron")
        if violations:
            raise SelfCheckFailed(doc, f"{len(violations)} monotonicity violations")
        return doc

    if not args.filtration:
        raise ValueError("filt needs --filtration (or --check-monotonicity)")
    F, meta = _load_filtration(args.filtration)
    inputs["filtration"] = meta
    if args.q > F.complex.dim:
        raise ValueError(f"q={args.q} exceeds the filtration's dimension {F.complex.dim}")
    if args.t is not None:
        inputs["t"] = args.t
        res = all_pairs_up_laplacians(F, args.q, args.t, tol)
        result = {"q": args.q, "t": args.t,
                  "matrices": [{"s": s, "matrix": matrix_payload(M)} for s, M in sorted(res.matrices.items())]}
        return _doc("filt", inputs, result, tol, "kron")
    spectra = persistent_spectra(F, args.q, up_only, tol)
    rows = []
    for (s, t), ev in sorted(spectra.items()):
        if args.k is not None:
            inputs["k"] = args.k
            val = float(ev[args.k - 1]) if 1 <= args.k <= len(ev) else None
            rows.append({"s": s, "t": t, "k": args.k, "value": val})
        else:
            rows.append({"s": s, "t": t, "spectrum": [float(x) for x in ev]})
    return _doc("filt", inputs, {"q": args.q, "grid": list(F.grid), "table": rows}, tol, "kron")


def cmd_resistance(args) -> dict:
    tol = _tol(args)
    if args.graph:
        text, meta = _read(args.graph)
        L = parse_complex(text)
        if args.v is None or args.w is None:
            raise ValueError("--graph needs --v and --w")
        R = effective_resistance_graph(L, args.v, args.w, tol)
        M = two_point_persistent_laplacian(L, args.v, args.w, tol)
        result = {"resistance": R, "two_point_laplacian": matrix_payload(M)}
        return _doc("resistance", {"graph": meta, "v": args.v, "w": args.w}, result, tol, "pinv")
    Ks, metas = _load_complexes(args.complex)
    if not args.sigma:
        raise ValueError("--complex needs --sigma")
    sigma = tuple(int(x) for x in args.sigma.split(","))
    inputs = {"complex": metas, "sigma": list(sigma)}
    if len(Ks) == 1:
        R = simplicial_effective_resistance(Ks[0], sigma, tol)
        return _doc("resistance", inputs, {"resistance": R}, tol, "pinv")
    if len(Ks) != 2:
        raise ValueError("resistance takes one network, or K and L for the Kron check")
    pair = make_pair(Ks[0], Ks[1])
    q0 = len(sigma) - 1
    R_L, R_KL = kron_resistances(pair, q0, sigma, tol)
    result = {"resistance_L": R_L, "resistance_persistent": R_KL, "difference": abs(R_L - R_KL)}
    doc = _doc("resistance", inputs, result, tol, "schur")
    if abs(R_L - R_KL) > METHOD_ATOL:
        raise SelfCheckFailed(doc, "persistent Laplacian does not preserve the resistance")
    return doc


def cmd_cheeger(args) -> dict:
    tol = _tol(args)
    inputs = {}
    pair = _pair_from_args(args, inputs)
    return _doc("cheeger", inputs, cheeger_report(pair, tol=tol), tol, "schur")


def cmd_selftest(args) -> dict:
    tol = _tol(args)
    result = run_selftest(args.seed, args.trials, tol)
    doc = _doc("selftest", {"seed": args.seed, "trials": args.trials}, result, tol, "both")
    if not result["ok"]:
        raise SelfCheckFailed(doc, "self-test found failures")
    return doc


def _csv(doc: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    cmd, res = doc["command"], doc["result"]
    if cmd == "filt" and "table" in res:
        w.writerow(["s", "t", "k", "value"])
        for row in res["table"]:
            if "spectrum" in row:
                for k, v in enumerate(row["spectrum"], 1):
                    w.writerow([row["s"], row["t"], k, v])
            else:
                w.writerow([row["s"], row["t"], row["k"], "" if row["value"] is None else row["value"]])
    elif "spectrum" in res or "betti" in res:
        if "betti" in res:
            w.writerow(["q", "betti"])
            w.writerow([res["q"], res["betti"]])
        if "spectrum" in res:
            w.writerow(["k", "eigenvalue"])
            for k, v in enumerate(res["spectrum"], 1):
                w.writerow([k, v])
    else:
        raise ValueError("csv output is available for spectra and Betti tables only")
    return buf.getvalue()


def _emit(doc: dict, fmt: str, stream):
    if fmt == "csv":
        stream.write(_csv(doc))
    else:
        json.dump(doc, stream, indent=2)
        stream.write("\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="relative rank tolerance")
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=100)

    inputs = argparse.ArgumentParser(add_help=False)
    inputs.add_argument("--complex", "-c", action="append", metavar="FILE",
                        help="complex file; give twice for a pair K then L")
    inputs.add_argument("--filtration", metavar="FILE")
    inputs.add_argument("--q", type=int, default=0)
    inputs.add_argument("--s", type=float)
    inputs.add_argument("--t", type=float)

    p = argparse.ArgumentParser(prog="perslap", description="Persistent Laplacians of simplicial pairs and filtrations.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("lap", parents=[common, inputs], help="Laplacian of one complex")
    s.set_defaults(func=cmd_laplacian)

    s = sub.add_parser("pers", parents=[common, inputs], help="persistent Laplacian of a pair")
    s.add_argument("--method", choices=["schur", "reduction", "both"], default="schur")
    s.add_argument("--betti", action="store_true")
    s.add_argument("--spectrum", action="store_true")
    s.set_defaults(func=cmd_persistent)

    s = sub.add_parser("filt", parents=[common, inputs], help="persistent Laplacians across a filtration")
    s.add_argument("--k", type=int, help="eigenvalue index (1-based) for the table")
    s.add_argument("--full", action="store_true", help="add the down part of K_s")
    s.add_argument("--check-monotonicity", action="store_true")
    s.set_defaults(func=cmd_filtration)

    s = sub.add_parser("resistance", parents=[common, inputs], help="effective resistance")
    s.add_argument("--graph", metavar="FILE")
    s.add_argument("--v", type=int)
    s.add_argument("--w", type=int)
    s.add_argument("--sigma", help="comma-separated vertices of a current generator")
    s.set_defaults(func=cmd_resistance)

    s = sub.add_parser("cheeger", parents=[common, inputs], help="persistent Cheeger report for a graph pair")
    s.set_defaults(func=cmd_cheeger)

    s = sub.add_parser("selftest", parents=[common], help="randomized agreement checks")
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc = args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except SelfCheckFailed as exc:
        _emit(exc.doc, "json", sys.stdout)
        print(f"self-check failed: {exc}", file=sys.stderr)
        return EXIT_SELFCHECK
    except RuntimeError as exc:
        print(f"self-check failed: {exc}", file=sys.stderr)
        return EXIT_SELFCHECK
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    try:
        _emit(doc, args.format, sys.stdout)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
