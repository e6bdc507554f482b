"""Command line interface.

Exit codes: 0 success, 1 input error, 2 resource cap exceeded,
3 a verification failed (a predicted property did not hold).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import dataclass, fields
from pathlib import Path

from .coxeter import CoxeterSystem, Element, enumerate_elements, parse_word
from .errors import CoxhodgeError, HardLefschetzFailed, InvalidInput, ResourceLimit, Unsupported

EXIT_OK, EXIT_INPUT, EXIT_CAP, EXIT_FAIL = 0, 1, 2, 3


@dataclass
class RunConfig:
    subcommand: str
    system: str | None = None
    max_length: int | None = None
    max_elements: int | None = None
    max_degree: int | None = None
    samples: int = 5
    format: str = "json"
    seed: int = 0
    x: str | None = None
    y: str | None = None
    word: str | None = None
    input: str | None = None
    gamma: str | None = None
    output: str | None = None

    def __post_init__(self):
        for name in ("max_length", "max_elements", "max_degree", "samples"):
            v = getattr(self, name)
            if v is not None and (not isinstance(v, int) or v <= 0):
                if name == "max_length" and v == 0:
                    continue
                raise InvalidInput(f"{name} must be a positive integer")
        if self.format not in ("json", "csv"):
            raise InvalidInput("format must be json or csv")

    @classmethod
    def from_mapping(cls, data: dict) -> "RunConfig":
        names = {f.name for f in fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise InvalidInput(f"unknown config fields: {sorted(unknown)}")
        return cls(**data)


# ---------------------------------------------------------------------------
# helpers


def load_system(text: str | None) -> CoxeterSystem:
    if text is None:
        raise InvalidInput("--system is required")
    p = Path(text)
    if p.exists():
        try:
            data = json.loads(p.read_text())
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"{text}: invalid JSON ({exc})") from exc
        return CoxeterSystem.from_json(data)
    try:
        return CoxeterSystem.from_type(text)
    except (InvalidInput, ValueError, KeyError) as exc:
        raise InvalidInput(f"{text!r} is neither a readable file nor a known type") from exc


def _element(W: CoxeterSystem, text: str | None, what: str) -> Element:
    if text is None:
        raise InvalidInput(f"--{what} is required")
    return W.element(parse_word(text, W.rank))


def _table(W: CoxeterSystem, cfg: RunConfig):
    from .hecke import KLTable

    if not W.is_finite and cfg.max_length is None:
        raise InvalidInput("infinite Coxeter group: pass --max-length")
    return KLTable(W, cfg.max_length)


class _Out:
    def __init__(self, cfg: RunConfig):
        self.cfg = cfg

    def emit(self, payload, rows=None, header=None):
        stream = open(self.cfg.output, "w", newline="") if self.cfg.output else sys.stdout
        try:
            if self.cfg.format == "csv" and rows is not None:
                w = csv.writer(stream, lineterminator="\n")
                w.writerow(header)
                w.writerows(rows)
            else:
                stream.write(json.dumps(payload, indent=2) + "\n")
        finally:
            if stream is not sys.stdout:
                stream.close()


# ---------------------------------------------------------------------------
# subcommands


def cmd_kl(cfg: RunConfig) -> int:
    W = load_system(cfg.system)
    T = _table(W, cfg)
    xs = [_element(W, cfg.x, "x")] if cfg.x else T.elements
    rows = []
    for x in xs:
        for y in T.elements:
            p = T.p(y, x)
            if p:
                rows.append([str(y), str(x), str(p)])
    _Out(cfg).emit([{"y": r[0], "x": r[1], "p": r[2]} for r in rows], rows, ["y", "x", "p"])
    return EXIT_OK


def cmd_invkl(cfg: RunConfig) -> int:
    W = load_system(cfg.system)
    T = _table(W, cfg)
    xs = [_element(W, cfg.x, "x")] if cfg.x else T.elements
    rows = []
    for x in xs:
        for y in T.elements:
            g = T.g(y, x)
            if g:
                rows.append([str(y), str(x), str(g)])
    _Out(cfg).emit([{"y": r[0], "x": r[1], "g": r[2]} for r in rows], rows, ["y", "x", "g"])
    return EXIT_OK


def cmd_mu(cfg: RunConfig) -> int:
    from .hecke import mu_structure

    W = load_system(cfg.system)
    T = _table(W, cfg)
    x, y = _element(W, cfg.x, "x"), _element(W, cfg.y, "y")
    res = mu_structure(T, x, y)
    rows = [[str(x), str(y), str(z), str(p)] for z, p in sorted(res.items(), key=lambda t: t[0].sort_key())]
    _Out(cfg).emit([{"x": r[0], "y": r[1], "z": r[2], "mu": r[3]} for r in rows], rows, ["x", "y", "z", "mu"])
    return EXIT_OK


def cmd_unimodal(cfg: RunConfig) -> int:
    """Quantum decompositions of mu_{x,y}^z; exit 3 if some coefficient is negative."""
    from .hecke import check_positivity, mu_structure, quantum_decompose

    W = load_system(cfg.system)
    T = _table(W, cfg)
    if cfg.x or cfg.y:
        x, y = _element(W, cfg.x, "x"), _element(W, cfg.y, "y")
        rows = []
        ok = True
        for z, p in sorted(mu_structure(T, x, y).items(), key=lambda t: t[0].sort_key()):
            q = quantum_decompose(p)
            ok = ok and q.is_nonnegative()
            rows.append([str(x), str(y), str(z), str(p), str(q), q.is_nonnegative()])
        payload = [dict(zip(["x", "y", "z", "mu", "decomposition", "nonnegative"], r)) for r in rows]
        _Out(cfg).emit(payload, rows, ["x", "y", "z", "mu", "decomposition", "nonnegative"])
        return EXIT_OK if ok else EXIT_FAIL
    rep = check_positivity(T)
    r = rep.results["pos4"]
    _Out(cfg).emit({"system": rep.system, "scope": rep.scope, "pos4": r.to_json()})
    return EXIT_OK if r.passed else EXIT_FAIL


def cmd_positivity(cfg: RunConfig) -> int:
    from .hecke import check_positivity

    W = load_system(cfg.system)
    rep = check_positivity(_table(W, cfg))
    _Out(cfg).emit(rep.to_json())
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_coinvariant(cfg: RunConfig) -> int:
    from .demazure import coinvariant_algebra

    W = load_system(cfg.system)
    C = coinvariant_algebra(W, n_ample=cfg.samples, seed=cfg.seed)
    # output is exactly the Frobenius algebra file format, so it feeds verify-lefschetz
    _Out(cfg).emit(C.to_json())
    return EXIT_OK


def cmd_bs_decompose(cfg: RunConfig) -> int:
    from .soergel import bott_samelson, decompose

    W = load_system(cfg.system)
    if cfg.word is None:
        raise InvalidInput("--word is required")
    word = parse_word(cfg.word, W.rank)
    M, F = bott_samelson(W, word)
    D = decompose(M, F, seed=cfg.seed)
    out = D.to_json()
    out["word"] = cfg.word
    out["checks"] = D.check()
    _Out(cfg).emit(out)
    return EXIT_OK if all(out["checks"].values()) else EXIT_FAIL


def cmd_categorify(cfg: RunConfig) -> int:
    from .soergel import verify_categorification

    W = load_system(cfg.system)
    cap = cfg.max_length if cfg.max_length is not None else 3
    rep = verify_categorification(W, cap)
    _Out(cfg).emit(rep.to_json())
    return EXIT_OK if rep.passed else EXIT_FAIL


def global_report(W: CoxeterSystem, samples: int, max_length: int | None = None, seed: int = 0, with_sl2: bool = True) -> dict:
    from .lefschetz import from_module, survey_ample_cone
    from .reflrep import sample_dominant_regular
    from .soergel import indecomposable

    if not W.is_finite:
        raise Unsupported("the global check builds Soergel modules and needs finite W")
    lams = sample_dominant_regular(W.realization, samples, seed=seed)
    out = []
    for x in enumerate_elements(W, max_length):
        M, F = indecomposable(W, x)
        D = from_module(M, F, lams, str(x))
        axioms = D.validate()
        rep = survey_ample_cone(D, with_sl2=with_sl2)
        sl2_ok = all(all(e.get("sl2", {"ok": True}).values()) for e in rep.entries)
        out.append(
            {
                "x": str(x),
                "graded_dims": {str(k): v for k, v in D.graded_dims().items()},
                "axioms": axioms,
                "passed": rep.passed and all(axioms.values()) and sl2_ok,
                "samples": [
                    {"gamma": e["gamma"], "hl": e["hl"], "hr": e["hr"], **({"sl2": e["sl2"]} if "sl2" in e else {})}
                    for e in rep.entries
                ],
            }
        )
    return {"system": W.name or "W", "samples": samples, "modules": out, "passed": all(m["passed"] for m in out)}


def cmd_global(cfg: RunConfig) -> int:
    W = load_system(cfg.system)
    rep = global_report(W, cfg.samples, cfg.max_length, cfg.seed)
    _Out(cfg).emit(rep)
    return EXIT_OK if rep["passed"] else EXIT_FAIL


def cmd_local_rank(cfg: RunConfig) -> int:
    from .hecke import local_graded_rank

    W = load_system(cfg.system)
    T = _table(W, cfg)
    if cfg.x and cfg.y:
        pairs = [(_element(W, cfg.y, "y"), _element(W, cfg.x, "x"))]
    else:
        pairs = [(y, x) for x in T.elements for y in T.elements if y != x and T.bruhat[T.idx(y), T.idx(x)]]
    rows = []
    ok = True
    for y, x in pairs:
        q = local_graded_rank(T, y, x)
        ok = ok and q.is_nonnegative()
        rows.append([str(y), str(x), str(q), q.is_nonnegative()])
    payload = [dict(zip(["y", "x", "graded_rank", "nonnegative"], r)) for r in rows]
    _Out(cfg).emit(payload, rows, ["y", "x", "graded_rank", "nonnegative"])
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify_lefschetz(cfg: RunConfig) -> int:
    from .demazure import FrobeniusAlgebra
    from .lefschetz import LefschetzDatum, from_frobenius, survey_ample_cone
    from .numfield import parse_element

    if cfg.input is None:
        raise InvalidInput("--input is required")
    try:
        data = json.loads(Path(cfg.input).read_text())
    except OSError as exc:
        raise InvalidInput(f"cannot read {cfg.input}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{cfg.input}: invalid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise InvalidInput("input must be a JSON object")
    if data.get("kind") == "frobenius" or "mult" in data:
        D = from_frobenius(FrobeniusAlgebra.from_json(data), name=Path(cfg.input).stem)
    else:
        D = LefschetzDatum.from_json(data)
    axioms = D.validate()
    if cfg.gamma is not None:
        samples = [[parse_element(D.field, t) for t in cfg.gamma.split(",")]]
    else:
        samples = D.ample[: cfg.samples] if cfg.samples else D.ample
    if not samples:
        raise InvalidInput("no gamma given and the input has no ample sample")
    rep = survey_ample_cone(D, samples, with_sl2=True)
    out = {"axioms": axioms, **rep.to_json()}
    _Out(cfg).emit(out)
    return EXIT_OK if rep.passed and all(axioms.values()) else EXIT_FAIL


COMMANDS = {
    "kl": cmd_kl,
    "invkl": cmd_invkl,
    "mu": cmd_mu,
    "unimodal": cmd_unimodal,
    "positivity": cmd_positivity,
    "coinvariant": cmd_coinvariant,
    "bs-decompose": cmd_bs_decompose,
    "categorify": cmd_categorify,
    "global": cmd_global,
    "local-rank": cmd_local_rank,
    "verify-lefschetz": cmd_verify_lefschetz,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="coxhodge", description="Kazhdan-Lusztig, Soergel module and Lefschetz computations")
    sub = p.add_subparsers(dest="subcommand", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="JSON file with RunConfig fields")
        if name != "verify-lefschetz":
            sp.add_argument("--system", help="Coxeter system JSON file or a type name such as A3, H3, I2(5)")
        sp.add_argument("--max-length", type=int)
        sp.add_argument("--max-elements", type=int)
        sp.add_argument("--max-degree", type=int)
        sp.add_argument("--samples", type=int)
        sp.add_argument("--format", choices=["json", "csv"])
        sp.add_argument("--seed", type=int)
        sp.add_argument("--output", "-o")
        if name in ("kl", "invkl", "mu", "unimodal", "local-rank"):
            sp.add_argument("--x")
            sp.add_argument("--y")
        if name == "bs-decompose":
            sp.add_argument("--word")
        if name == "verify-lefschetz":
            sp.add_argument("--input")
            sp.add_argument("--gamma", help="comma separated coefficients over the datum's operators")
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    data: dict = {}
    if getattr(ns, "config", None):
        try:
            data = json.loads(Path(ns.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InvalidInput(f"cannot read config {ns.config}: {exc}") from exc
        if not isinstance(data, dict):
            raise InvalidInput("config must be a JSON object")
    for k, v in vars(ns).items():
        if k == "config" or v is None:
            continue
        data[k] = v
    return RunConfig.from_mapping(data)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
        if cfg.max_elements is not None:
            os.environ["HHL_MAX_ELEMENTS"] = str(cfg.max_elements)
        return COMMANDS[cfg.subcommand](cfg)
    except ResourceLimit as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except HardLefschetzFailed as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (InvalidInput, Unsupported, CoxhodgeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
