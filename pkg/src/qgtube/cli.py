"""Command-line entry point: ``qgtube {dispersion,scatter,scan,oracle}``.

Exit codes: 0 success, 1 usage or validation error, 2 numerical failure.
Output is assembled in memory and only written once every number in it is
finite.
"""
import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .boundary import load_hermitian, load_unitary, named_bc, random_cayley_bc, unitary_from_hermitian
from .core import make_wrapping
from .dispersion import all_modes, axis_multiplier
from .errors import NumericalFailure, StopBandError, ValidationError
from .geometry import build_cut
from .oracle import oracle_compare
from .scan import det_profile, find_bound_states, profile_csv
from .scattering import scattering_matrix

SCHEMA = 1
DISPERSION_COLUMNS = ["k", "ell", "re_z", "im_z", "re_z1", "im_z1", "re_z2", "im_z2", "abs_tau", "direction"]

CERTIFICATES_SCHEMA = {
    "type": "object",
    "required": ["schema", "alpha", "beta", "bc", "interval", "tol", "certificates", "near_singular"],
    "properties": {
        "schema": {"const": SCHEMA},
        "alpha": {"type": "integer"},
        "beta": {"type": "integer"},
        "bc": {"type": "string"},
        "interval": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
        "tol": {"type": "number"},
        "certificates": {"type": "array", "items": {"$ref": "#/$defs/cert"}},
        "near_singular": {"type": "array", "items": {"$ref": "#/$defs/cert"}},
    },
    "$defs": {
        "cvec": {
            "type": "object",
            "required": ["re", "im"],
            "properties": {"re": {"type": "array"}, "im": {"type": "array"}},
        },
        "cert": {
            "type": "object",
            "required": [
                "k", "sigma_min", "R", "C", "admissibility_residual", "interior_residual",
                "propagating_amplitude", "max_abs_tau", "n_propagating", "embedded", "certified",
            ],
            "properties": {
                "k": {"type": "number"},
                "R": {"$ref": "#/$defs/cvec"},
                "C": {"$ref": "#/$defs/cvec"},
                "embedded": {"type": "boolean"},
                "certified": {"type": "boolean"},
            },
        },
    },
}


class UsageError(ValidationError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    command: str
    alpha: int
    beta: int
    ks: list
    bc: str
    seed: int = None
    out: str = None
    fmt: str = "csv"
    J: str = None
    N: int = None
    tol: float = 1e-8
    certificates: str = None


def parse_k_range(text):
    try:
        lo, hi, step = (float(p) for p in text.split(":"))
    except ValueError as exc:
        raise UsageError(f"--k-range expects lo:hi:step, got {text!r}") from exc
    if step <= 0 or hi < lo:
        raise UsageError("--k-range needs step > 0 and hi >= lo")
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return [lo + i * step for i in range(n)]


def parse_complex_list(text):
    try:
        return np.array([complex(p.strip().replace(" ", "")) for p in text.split(",")])
    except ValueError as exc:
        raise UsageError(f"cannot parse complex list {text!r}") from exc


def resolve_bc(text, size, seed):
    if text in ("neumann", "dirichlet"):
        return named_bc(text, size)
    if text.startswith("file:"):
        bc = load_unitary(text[5:])
    elif text.startswith("cayley:"):
        bc = unitary_from_hermitian(load_hermitian(text[7:]), text)
    elif text == "random":
        if seed is None:
            raise UsageError("--bc random requires --seed")
        bc = random_cayley_bc(size, np.random.default_rng(seed))
    else:
        raise UsageError(f"unknown --bc {text!r}")
    if bc.size != size:
        raise UsageError(f"U has size {bc.size}, the cut needs {size}")
    return bc


def _cvec(v):
    v = np.asarray(v, complex)
    return {"re": v.real.tolist(), "im": v.imag.tolist()}


def _all_finite(obj):
    if isinstance(obj, float):
        return math.isfinite(obj)
    if isinstance(obj, dict):
        return all(_all_finite(v) for v in obj.values())
    if isinstance(obj, (list, tuple)):
        return all(_all_finite(v) for v in obj)
    return True


def _dump(obj):
    if not _all_finite(obj):
        raise NumericalFailure("non-finite value in output")
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def cmd_dispersion(cfg):
    spec = make_wrapping(cfg.alpha, cfg.beta)
    rows = []
    for k in cfg.ks:
        for m in all_modes(spec, k):
            rows.append([
                float(k), m.ell, m.z.real, m.z.imag, m.z1.real, m.z1.imag, m.z2.real, m.z2.imag,
                float(abs(axis_multiplier(m))), m.direction.value,
            ])
    if not _all_finite(rows):
        raise NumericalFailure("non-finite value in dispersion output")
    if cfg.fmt == "json":
        return _dump({"schema": SCHEMA, "columns": DISPERSION_COLUMNS, "rows": rows}), {}
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(DISPERSION_COLUMNS)
    for r in rows:
        w.writerow([repr(x) if isinstance(x, float) else x for x in r])
    return buf.getvalue(), {}


def _single_k(cfg):
    if len(cfg.ks) != 1:
        raise UsageError(f"{cfg.command} takes a single --k")
    return cfg.ks[0]


def cmd_scatter(cfg):
    spec = make_wrapping(cfg.alpha, cfg.beta)
    k = _single_k(cfg)
    cut = build_cut(spec)
    bc = resolve_bc(cfg.bc, cut.size, cfg.seed)
    try:
        sm = scattering_matrix(spec, cut, bc, k)
    except StopBandError as exc:
        return _dump({"schema": SCHEMA, "k": k, "stop_band": True, "message": str(exc)}), {}
    flux_res = float(np.abs(np.sum(np.abs(sm.S) ** 2, axis=0) - 1).max())
    payload = {
        "schema": SCHEMA,
        "k": k,
        "stop_band": False,
        "bc": bc.label,
        "channels": [list(c) for c in sm.channels],
        "S": _cvec(sm.S.ravel()) | {"shape": list(sm.S.shape)},
        "R": _cvec(sm.R.ravel()) | {"shape": list(sm.R.shape)},
        "C": _cvec(sm.C.ravel()) | {"shape": list(sm.C.shape)},
        "flux_residual": flux_res,
        "unitarity_residual": sm.unitarity_residual,
    }
    return _dump(payload), {}


def cmd_scan(cfg):
    spec = make_wrapping(cfg.alpha, cfg.beta)
    if len(cfg.ks) < 3:
        raise UsageError("scan needs --k-range with at least 3 points")
    cut = build_cut(spec)
    bc = resolve_bc(cfg.bc, cut.size, cfg.seed)
    samples = det_profile(spec, cut, bc, cfg.ks)
    interval = (cfg.ks[0], cfg.ks[-1])
    found = find_bound_states(spec, cut, bc, interval, cfg.tol, n_grid=len(cfg.ks))
    certs = {
        "schema": SCHEMA,
        "alpha": spec.alpha,
        "beta": spec.beta,
        "bc": bc.label,
        "interval": list(interval),
        "tol": cfg.tol,
        "certificates": [c.to_dict() for c in found.certified],
        "near_singular": [c.to_dict() for c in found.near_singular],
    }
    certs_text = _dump(certs)
    if cfg.fmt == "json":
        profile = [
            {"k": s.k, "sigma_min": s.sigma_min, "abs_det_log10": s.log10_abs_det,
             "n_propagating": s.n_propagating, "band_edge_flag": s.band_edge}
            for s in samples
        ]
        for p in profile:
            for key in ("sigma_min", "abs_det_log10"):
                if not math.isfinite(p[key]):
                    p[key] = None
        return _dump({"schema": SCHEMA, "profile": profile} | {"certificates": certs}), {}
    extra = {}
    target = cfg.certificates or (f"{cfg.out}.certificates.json" if cfg.out else None)
    if target:
        extra[target] = certs_text
    return profile_csv(samples), extra


def cmd_oracle(cfg):
    spec = make_wrapping(cfg.alpha, cfg.beta)
    k = _single_k(cfg)
    cut = build_cut(spec)
    bc = resolve_bc(cfg.bc, cut.size, cfg.seed)
    J = parse_complex_list(cfg.J) if cfg.J else np.ones(spec.beta, complex)
    if len(J) != spec.beta:
        raise UsageError(f"--J needs {spec.beta} entries")
    rep = oracle_compare(spec, cut, bc, k, J, N=cfg.N)
    payload = {
        "schema": SCHEMA,
        "k": rep.k,
        "N": rep.N,
        "tau_max": rep.tau_max,
        "deviation": rep.deviation,
        "deviation_F": rep.deviation_F,
        "deviation_Fp": rep.deviation_Fp,
        "interior_residual": rep.interior_residual,
        "admissibility_residual": rep.admissibility_residual,
    }
    return _dump(payload), {}


COMMANDS = {"dispersion": cmd_dispersion, "scatter": cmd_scatter, "scan": cmd_scan, "oracle": cmd_oracle}


def build_parser():
    p = _Parser(prog="qgtube", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--alpha", type=int, required=True)
        s.add_argument("--beta", type=int, required=True)
        g = s.add_mutually_exclusive_group(required=True)
        g.add_argument("--k", type=float)
        g.add_argument("--k-range", metavar="LO:HI:STEP")
        s.add_argument("--bc", default="neumann",
                       help="neumann | dirichlet | file:PATH | cayley:PATH | random (needs --seed)")
        s.add_argument("--seed", type=int)
        s.add_argument("--out", metavar="PATH")
        s.add_argument("--format", dest="fmt", choices=["csv", "json"],
                       default="json" if name in ("scatter", "oracle") else "csv")
        if name == "oracle":
            s.add_argument("--J", help="comma-separated complex source amplitudes (default: all ones)")
            s.add_argument("--N", type=int, help="ring count (default: smallest meeting the decay bound)")
        if name == "scan":
            s.add_argument("--tol", type=float, default=1e-8)
            s.add_argument("--certificates", metavar="PATH")
    return p


def make_config(args):
    if args.alpha < 1 or args.beta < 1:
        raise UsageError("--alpha and --beta must be positive")
    ks = [args.k] if args.k is not None else parse_k_range(args.k_range)
    return RunConfig(
        command=args.command,
        alpha=args.alpha,
        beta=args.beta,
        ks=ks,
        bc=args.bc,
        seed=args.seed,
        out=args.out,
        fmt=args.fmt,
        J=getattr(args, "J", None),
        N=getattr(args, "N", None),
        tol=getattr(args, "tol", 1e-8),
        certificates=getattr(args, "certificates", None),
    )


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = make_config(args)
        text, extra = COMMANDS[cfg.command](cfg)
    except ValidationError as exc:
        parser.print_usage(sys.stderr)
        print(f"qgtube: error: {exc}", file=sys.stderr)
        return 1
    except NumericalFailure as exc:
        print(f"qgtube: numerical failure: {exc}", file=sys.stderr)
        return 2
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    for path, content in extra.items():
        Path(path).write_text(content)
    return 0
