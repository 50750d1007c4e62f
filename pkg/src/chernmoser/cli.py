"""Batch command line: normalize, obstruct, segre, prenormalize.

Reports are JSON with sorted keys.  Exit codes: 0 success, 1 domain error
(degenerate or out-of-range input), 2 schema error (malformed files/flags).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__
from .cmw import null_cone_definiteness
from .hermitian import Signature
from .hypersurfaces import (KNParams, NoWitnessError, hyperquadric, kn_eps_tilde,
                            segre_interior_witness,
                            sphere_perturbation_local)
from .normalform import PrenormalError, extract_cmw, normalize_to_order4
from .polycore import ONE, ZERO, RealPoly, RealityError, parse_rational

FAMILIES = ("hyperquadric", "sphere-perturbation", "kohn-nirenberg")
CONVENTION = ("tensor anchored to the normal-form contact form; its quartic is s, "
              "and the graph carries s/4")


class SchemaError(ValueError):
    pass


class DomainError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    input: str | None = None
    family: str | None = None
    n: int | None = None
    l: int | None = None
    eps: str | None = None
    eps0: str | None = None
    c: str | None = None
    samples: int = 64
    seed: int = 0
    tol: float = 1e-9
    out: str | None = None

    def validate(self) -> None:
        if self.samples < 1:
            raise SchemaError("--samples must be positive")
        if self.tol <= 0:
            raise SchemaError("--tol must be positive")
        if self.family is not None and self.family not in FAMILIES:
            raise SchemaError(f"unknown family {self.family!r}")
        for name in ("eps", "eps0", "c"):
            val = getattr(self, name)
            if val is not None:
                try:
                    parse_rational(val)
                except (TypeError, ValueError) as exc:
                    raise SchemaError(f"--{name} must be an exact rational like 1/100") from exc


# --- loading -------------------------------------------------------------------

def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc}") from exc


def load_realpoly(path: str, n: int | None = None, check_real: bool = True) -> RealPoly:
    data = _read_json(path)
    try:
        return RealPoly.from_json(data, n, check_real=check_real)
    except RealityError as exc:
        raise SchemaError(str(exc)) from exc
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"malformed polynomial file: {exc}") from exc


def _signature(cfg: RunConfig, n: int | None = None) -> Signature:
    n = cfg.n if cfg.n is not None else n
    if n is None:
        raise SchemaError("--n is required")
    try:
        return Signature(n, cfg.l if cfg.l is not None else 0)
    except ValueError as exc:
        raise DomainError(str(exc)) from exc


def _graph_input(cfg: RunConfig):
    """Pre-normal graph function, signature and family extras."""
    extra: dict = {}
    if cfg.input:
        P = load_realpoly(cfg.input, cfg.n)
        return P, _signature(cfg, P.n), extra
    if cfg.family == "hyperquadric":
        sig = _signature(cfg)
        return hyperquadric(sig), sig, extra
    if cfg.family == "sphere-perturbation":
        n = cfg.n if cfg.n is not None else 4
        l = cfg.l if cfg.l is not None else 2
        eps = cfg.eps if cfg.eps is not None else "1/100"
        try:
            P, a = sphere_perturbation_local(n, l, eps)
        except ValueError as exc:
            raise DomainError(str(exc)) from exc
        extra = {"a": str(a), "eps": str(parse_rational(eps))}
        return P, Signature(n, l), extra
    if cfg.family == "kohn-nirenberg":
        raise DomainError("the kohn-nirenberg family is not pre-normal at a point; use 'segre'")
    raise SchemaError("give --input or --family")


def _x_vectors(sig: Signature):
    """e_1 + e_{l+1} and e_2 + e_n (0-based indices 0, l and 1, n-1)."""
    x1 = [ZERO] * sig.n
    x1[0] = ONE
    x1[sig.l] = ONE
    out = {"X1": x1}
    if sig.l >= 2:
        x2 = [ZERO] * sig.n
        x2[1] = ONE
        x2[sig.n - 1] = ONE
        out["X2"] = x2
    return out


# --- commands ------------------------------------------------------------------

def cmd_normalize(cfg: RunConfig) -> dict:
    P, sig, extra = _graph_input(cfg)
    try:
        nf = normalize_to_order4(P, sig)
    except PrenormalError as exc:
        raise DomainError(f"{exc}; offending: {exc.offending}") from exc
    S = extract_cmw(nf)
    report = {"normal_form": nf.to_json(), "tensor": S.to_json(),
              "invariants_ok": S.check_invariants().ok, "convention": CONVENTION}
    if extra:
        values = {}
        for name, x in _x_vectors(sig).items():
            values[name] = {"tensor": str(S.value_on(x)),
                            "graph_quartic": str(nf.s.evaluate(x) / 4)}
        extra["values"] = values
        report["family"] = extra
    return report


def cmd_obstruct(cfg: RunConfig) -> dict:
    P, sig, extra = _graph_input(cfg)
    if sig.l < 1:
        raise DomainError("the null-cone test needs l >= 1")
    try:
        nf = normalize_to_order4(P, sig)
    except PrenormalError as exc:
        raise DomainError(f"{exc}; offending: {exc.offending}") from exc
    rep = null_cone_definiteness(extract_cmw(nf), sig, cfg.samples, cfg.seed)
    out = rep.to_json()
    out["convention"] = CONVENTION
    if extra:
        out["family"] = extra
    return out


def cmd_segre(cfg: RunConfig) -> dict:
    kwargs = {}
    if cfg.eps0 is not None:
        kwargs["eps0"] = cfg.eps0
    if cfg.c is not None:
        kwargs["c"] = cfg.c
    try:
        base = KNParams(**kwargs)
        params = KNParams(base.eps0, base.c, cfg.eps) if cfg.eps is not None else base
    except ValueError as exc:
        raise DomainError(str(exc)) from exc
    # without --eps the largest certified eps is used
    eps = params.eps if cfg.eps is not None else kn_eps_tilde(params)
    try:
        w = segre_interior_witness(params, eps=eps)
    except NoWitnessError as exc:
        raise DomainError(str(exc)) from exc
    return {"witness": w.to_json()}


def _float_terms(P: RealPoly) -> dict:
    return {k: complex(c) for k, c in P.terms.items()}


def _float_subs(terms: dict, A: np.ndarray, n: int, w_sign: int) -> dict:
    """P(z' A, conj, w_sign * u) with complex float coefficients."""
    nv = 2 * n + 1
    lin = []
    for k in range(n):
        img = {}
        for j in range(n):
            if A[j, k] != 0:
                key = [0] * nv
                key[j] = 1
                img[tuple(key)] = A[j, k]
        lin.append(img)
    conj = [{k[n:2 * n] + k[:n] + k[2 * n:]: v.conjugate() for k, v in img.items()} for img in lin]
    u_img = {tuple([0] * (2 * n) + [1]): complex(w_sign)}
    images = lin + conj + [u_img]

    def mul(a, b):
        out: dict = {}
        for ka, va in a.items():
            for kb, vb in b.items():
                key = tuple(x + y for x, y in zip(ka, kb))
                out[key] = out.get(key, 0j) + va * vb
        return out

    result: dict = {}
    for key, c in terms.items():
        acc = {(0,) * nv: c}
        for slot, e in enumerate(key):
            for _ in range(e):
                acc = mul(acc, images[slot])
        for k, v in acc.items():
            result[k] = result.get(k, 0j) + v
    return {k: v for k, v in result.items() if abs(v) > 1e-15}


def cmd_prenormalize(cfg: RunConfig) -> dict:
    """Floating-point Levi diagonalization of a graph function (inexact)."""
    if not cfg.input:
        raise SchemaError("prenormalize needs --input")
    P = load_realpoly(cfg.input, cfg.n)
    n = P.n
    low = [k for k in P.terms if sum(k[:2 * n]) + 2 * k[2 * n] < 2]
    if low or any(k[2 * n] == 1 and not any(k[:2 * n]) for k in P.terms):
        raise DomainError("linear and pure-u terms must be removed before prenormalizing")
    H = np.zeros((n, n), dtype=complex)
    for k, c in P.terms.items():
        if sum(k[:n]) == 1 and sum(k[n:2 * n]) == 1 and k[2 * n] == 0:
            H[k[:n].index(1), k[n:2 * n].index(1)] = -complex(c)
    evals, V = np.linalg.eigh(H)
    scale = max(1.0, float(np.max(np.abs(evals))))
    if np.any(np.abs(evals) <= cfg.tol * scale):
        raise DomainError("Levi form is degenerate at the base point")
    w_sign = 1
    if int(np.sum(evals < 0)) * 2 > n:
        w_sign = -1
        evals = -evals
    order = np.argsort(evals, kind="stable")
    evals, V = evals[order], V[:, order]
    # z = z' A with A = diag(1/sqrt|d|) V^*
    A = np.diag(1.0 / np.sqrt(np.abs(evals))) @ V.conj().T
    terms = _float_subs(_float_terms(P), A, n, w_sign)
    if w_sign == -1:
        terms = {k: -v for k, v in terms.items()}
    l = int(np.sum(evals < 0))
    return {"inexact": True, "n": n, "l": l, "w_sign": w_sign,
            "transform": [[[float(x.real), float(x.imag)] for x in row] for row in A],
            "terms": [{"alpha": list(k[:n]), "beta": list(k[n:2 * n]), "k": k[2 * n],
                       "re": float(v.real), "im": float(v.imag)} for k, v in sorted(terms.items())]}


COMMANDS = {"normalize": cmd_normalize, "obstruct": cmd_obstruct,
            "segre": cmd_segre, "prenormalize": cmd_prenormalize}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="chernmoser", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--input")
        p.add_argument("--family", choices=FAMILIES)
        p.add_argument("--n", type=int)
        p.add_argument("--l", type=int)
        p.add_argument("--eps")
        p.add_argument("--eps0")
        p.add_argument("--c")
        p.add_argument("--samples", type=int, default=64)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", type=float, default=1e-9)
        p.add_argument("--out")
    return ap


def run(cfg: RunConfig) -> dict:
    cfg.validate()
    report = COMMANDS[cfg.command](cfg)
    report["config"] = {k: v for k, v in asdict(cfg).items() if k != "out"}
    return report


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    cfg = RunConfig(**vars(args))
    try:
        report = run(cfg)
        code = 0
    except SchemaError as exc:
        report, code = {"error": str(exc), "kind": "schema"}, 2
    except DomainError as exc:
        report, code = {"error": str(exc), "kind": "domain"}, 1
    text = json.dumps(report, sort_keys=True, indent=2)
    if cfg.out and code == 0:
        with open(cfg.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text, file=sys.stdout if code == 0 else sys.stderr)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
