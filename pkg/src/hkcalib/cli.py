"""Command-line verification workbench.

Subcommands
-----------
identities   exact wedge-identity suite (constants, closed forms, cross-checks)
comass       multi-start comass certification of one named form
region       parameter sweep of the quadratic 4-form family, CSV/JSON + figure
faces        sampled face-value verification for one named form
stabilizer   infinitesimal gl-stabilizer dimension of one named form
report-all   the full bundle into a directory, with figures

Exit codes: 0 all claims pass, 1 claim failure, 2 usage error,
3 optimizer non-convergence. Seeds resolve as flag > config file >
CALIB_SEED env var > default 0; config files are flat key=value text.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from dataclasses import dataclass, field
from math import factorial

import numpy as np

from . import catalog, comass, figures, subspaces
from .exterior import evaluate, wedge, wedge_power
from .quaternionic import build_model, holomorphic_symplectic
from .catalog import c_constant, explicit_psi_pp, in_bryant_harvey_region

EXIT_PASS = 0
EXIT_CLAIM_FAILURE = 1
EXIT_USAGE = 2
EXIT_NON_CONVERGENCE = 3

DEFAULTS = {
    "n": 2,
    "starts": 200,
    "seed": 0,
    "grid": 0.25,
    "grid_lo": -1.25,
    "grid_hi": 1.25,
    "samples": 100,
    "tol_identity": 1e-12,
    "tol_comass": 1e-6,
    "format": "json",
}


@dataclass
class RunConfig:
    """Resolved configuration: flags > config file > env seed > defaults."""

    command: str
    n: int
    seed: int
    starts: int
    grid: float
    grid_lo: float
    grid_hi: float
    samples: int
    tol_identity: float
    tol_comass: float
    out: str | None
    format: str
    plot: bool
    extra: dict = field(default_factory=dict)

    def validate(self, parser: argparse.ArgumentParser):
        if not 1 <= self.n <= 4:
            parser.error(f"--n must be in [1, 4], got {self.n}")
        if self.tol_identity <= 0 or self.tol_comass <= 0:
            parser.error("tolerances must be positive")
        if self.starts < 1:
            parser.error("--starts must be >= 1")
        if not 0 < self.grid <= 1:
            parser.error("--grid step must lie in (0, 1]")
        if self.format not in ("json", "csv"):
            parser.error("--format must be json or csv")


@dataclass
class ClaimRecord:
    """One verifiable claim: id, measured value, tolerance, verdict."""

    claim_id: str
    description: str
    status: str              # "pass" | "fail"
    measured: object
    expected: object
    tolerance: float | None
    runtime_s: float
    witness: object = None

    def to_dict(self, include_runtime: bool = False) -> dict:
        # runtimes are kept out of the canonical payload so that identical
        # (config, seed) runs emit bit-identical JSON
        out = {
            "id": self.claim_id,
            "description": self.description,
            "status": self.status,
            "measured": self.measured,
            "expected": self.expected,
            "tolerance": self.tolerance,
        }
        if include_runtime:
            out["runtime_s"] = round(self.runtime_s, 6)
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def _claim(claim_id, description, ok, measured, expected, tol, t0, witness=None):
    return ClaimRecord(claim_id, description, "pass" if ok else "fail",
                       measured, expected, tol, time.monotonic() - t0, witness)


# ---------------------------------------------------------------------------
# config plumbing
# ---------------------------------------------------------------------------

def _read_config_file(path: str) -> dict:
    out = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{line_no}: expected key=value")
            key, val = line.split("=", 1)
            out[key.strip().replace("-", "_")] = val.strip()
    return out


def _resolve(args: argparse.Namespace, parser) -> RunConfig:
    cfg_file = {}
    if getattr(args, "config", None):
        try:
            cfg_file = _read_config_file(args.config)
        except (OSError, ValueError) as exc:
            parser.error(f"bad config file: {exc}")

    def pick(name, cast, default):
        flag = getattr(args, name, None)
        if flag is not None:
            return flag
        if name in cfg_file:
            try:
                return cast(cfg_file[name])
            except ValueError:
                parser.error(f"config value for {name} is not a {cast.__name__}")
        if name == "seed" and "CALIB_SEED" in os.environ:
            try:
                return int(os.environ["CALIB_SEED"])
            except ValueError:
                parser.error("CALIB_SEED must be an integer")
        return default

    cfg = RunConfig(
        command=args.command,
        n=pick("n", int, DEFAULTS["n"]),
        seed=pick("seed", int, DEFAULTS["seed"]),
        starts=pick("starts", int, DEFAULTS["starts"]),
        grid=pick("grid", float, DEFAULTS["grid"]),
        grid_lo=pick("grid_lo", float, DEFAULTS["grid_lo"]),
        grid_hi=pick("grid_hi", float, DEFAULTS["grid_hi"]),
        samples=pick("samples", int, DEFAULTS["samples"]),
        tol_identity=pick("tol_identity", float, DEFAULTS["tol_identity"]),
        tol_comass=pick("tol_comass", float, DEFAULTS["tol_comass"]),
        out=getattr(args, "out", None),
        format=pick("format", str, DEFAULTS["format"]),
        plot=not getattr(args, "no_plot", False),
        extra={k: v for k, v in vars(args).items()
               if k in ("form", "p", "i", "l", "m", "v", "out_dir", "pairing")},
    )
    cfg.validate(parser)
    return cfg


def _canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _emit(payload: dict, cfg: RunConfig, csv_rows=None, csv_header=None):
    """Write the report to --out (or stdout); CSV only for tabular payloads."""
    if cfg.format == "csv" and csv_rows is not None:
        text = _csv_text(csv_rows, csv_header)
    else:
        text = _canonical_json(payload) + "\n"
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_text(rows, header) -> str:
    import io
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(x) if isinstance(x, float) else x for x in row])
    return buf.getvalue()


def _records_payload(records, extra=None) -> dict:
    payload = {
        "claims": [r.to_dict() for r in records],
        "passed": sum(1 for r in records if r.status == "pass"),
        "failed": sum(1 for r in records if r.status == "fail"),
    }
    if extra:
        payload.update(extra)
    return payload


def _print_summary(records, cfg: RunConfig):
    if cfg.out:
        total = sum(r.runtime_s for r in records)
        for r in records:
            sys.stdout.write(f"[{r.status:4s}] {r.claim_id}: measured={r.measured} "
                             f"expected={r.expected} ({r.runtime_s:.2f}s)\n")
        sys.stdout.write(f"{len(records)} claims, "
                         f"{sum(r.status == 'fail' for r in records)} failed, "
                         f"{total:.1f}s -> {cfg.out}\n")


def _exit_code(records) -> int:
    return EXIT_PASS if all(r.status == "pass" for r in records) else EXIT_CLAIM_FAILURE


# ---------------------------------------------------------------------------
# identities command
# ---------------------------------------------------------------------------

def run_identities(cfg: RunConfig) -> tuple[list[ClaimRecord], dict]:
    """The exact-constant suite for every n up to cfg.n."""
    records = []
    tol = cfg.tol_identity
    for n in range(1, cfg.n + 1):
        model = build_model(n)
        fn = factorial(n)
        omega = holomorphic_symplectic(model, "I")

        t0 = time.monotonic()
        lhs = omega.power(n).wedge(omega.power(n).conjugate())
        scale = 4 ** n * fn * fn
        resid = max(np.max(np.abs(lhs.re.coeffs - scale * model.vol.coeffs)),
                    np.max(np.abs(lhs.im.coeffs)))
        records.append(_claim(
            f"pairing_power_volume_n{n}",
            f"Omega^{n} ^ conj(Omega)^{n} = 4^{n} ({n}!)^2 Vol",
            resid <= tol * scale, resid / scale, 0.0, tol, t0))

        t0 = time.monotonic()
        base = sum((wedge(model.omega(lab), model.omega(lab))
                    for lab in "JK"), wedge(model.omega_I, model.omega_I))
        lhs2 = wedge_power(base, n)
        cn = c_constant(n)
        resid2 = np.max(np.abs(lhs2.coeffs - cn * model.vol.coeffs))
        measured_cn = float(lhs2.coeffs @ model.vol.coeffs)
        records.append(_claim(
            f"sum_of_squares_power_n{n}",
            f"(w_I^2+w_J^2+w_K^2)^{n} = c_{n} Vol with c_{n} = {cn}",
            resid2 <= tol * cn, measured_cn, cn, tol, t0))

        balanced = explicit_psi_pp(model, n) * fn
        for k in range(n + 1):
            t0 = time.monotonic()
            form = wedge(wedge_power(model.omega_I, k), balanced)
            frame = subspaces.standard_face(model, "complex_coisotropic", k)
            val = evaluate(form, frame.oriented_columns())
            want = 2 ** k * factorial(k) * fn
            records.append(_claim(
                f"coisotropic_value_n{n}_k{k}",
                f"(w_I^{k} ^ Psi_{n})(E_{n + k}) = 2^{k} {k}! {n}!",
                abs(val - want) <= tol * want, val, want, tol, t0))

        for p in range(1, min(n, 4) + 1):
            t0 = time.monotonic()
            proj = catalog.psi_pp(model, p).form
            closed = explicit_psi_pp(model, p)
            resid3 = float(np.max(np.abs(proj.coeffs - closed.coeffs)))
            records.append(_claim(
                f"projection_vs_closed_form_n{n}_p{p}",
                f"projected (p,p)-part equals the binomial closed form (p={p})",
                resid3 <= tol, resid3, 0.0, tol, t0))

        if n >= 2:
            t0 = time.monotonic()
            rotated = catalog.psi_pp(model, 2, pairing="rotated").form
            display = (-0.5 * wedge(model.omega_I, model.omega_I)
                       + 0.25 * (wedge(model.omega_J, model.omega_J)
                                 + wedge(model.omega_K, model.omega_K)))
            resid4 = float(np.max(np.abs(rotated.coeffs - display.coeffs)))
            records.append(_claim(
                f"rotated_pairing_display_n{n}",
                "rotated-pairing (2,2)-part = -1/2 w_I^2 + 1/4 (w_J^2 + w_K^2)",
                resid4 <= tol, resid4, 0.0, tol, t0))
    return records, {}


# ---------------------------------------------------------------------------
# form selection & witnesses
# ---------------------------------------------------------------------------

def _form_params(cfg: RunConfig) -> dict:
    params = {}
    for key in ("p", "i"):
        if cfg.extra.get(key) is not None:
            params[key] = cfg.extra[key]
    if cfg.extra.get("l") is not None:
        params["lambda"] = cfg.extra["l"]
    if cfg.extra.get("m") is not None:
        params["mu"] = cfg.extra["m"]
    if cfg.extra.get("v") is not None:
        params["nu"] = cfg.extra["v"]
    if cfg.extra.get("pairing"):
        params["pairing"] = cfg.extra["pairing"]
    return params


def _build_named(cfg: RunConfig, model, parser) -> catalog.NamedForm:
    name = cfg.extra.get("form")
    if not name:
        parser.error("--form is required for this command")
    try:
        return catalog.named_form(model, name, **_form_params(cfg))
    except (KeyError, ValueError) as exc:
        parser.error(f"cannot build form {name!r}: {exc}")


def _face_kind(nf: catalog.NamedForm):
    """(kind, param, structure) of the claimed face family, if any."""
    structure = nf.params.get("structure", "I")
    if nf.face_class == catalog.FACE_QUATERNIONIC:
        return "quaternionic", nf.params["p"], structure
    if nf.face_class == catalog.FACE_COMPLEX_LAGRANGIAN:
        return "complex_lagrangian", None, structure
    if nf.face_class == catalog.FACE_COMPLEX_ISOTROPIC:
        return "complex_isotropic", nf.params.get("p"), structure
    if nf.face_class == catalog.FACE_COMPLEX_COISOTROPIC:
        key = "i" if "i" in nf.params else "p"
        return "complex_coisotropic", nf.params[key], structure
    return None


def _witnesses_for(model, nf: catalog.NamedForm):
    """Analytic warm-start frames for the estimator."""
    if nf.name == "bryant_harvey":
        frames = [subspaces.standard_face(model, "quaternionic", 1)]
        eye = np.eye(model.dim)
        for lab in ("I", "J", "K"):
            L = model.structure(lab)
            cols = [eye[:, 0], L @ eye[:, 0]]
            if model.n >= 2:
                cols += [eye[:, 4], L @ eye[:, 4]]
                frames.append(subspaces.SubspaceFrame(np.column_stack(cols)))
        return tuple(frames)
    if nf.name == "omega_i":
        return (subspaces.standard_face(model, "complex_isotropic", 1)
                if model.n > 1 else subspaces.standard_face(model, "complex_lagrangian"),)
    if nf.name == "kahler":
        p = nf.params["p"]
        kind = "complex_lagrangian" if p == model.n else "complex_isotropic"
        return (subspaces.standard_face(model, kind, None if p == model.n else p),)
    spec = _face_kind(nf)
    if spec is None:
        return ()
    kind, param, structure = spec
    return (subspaces.standard_face(model, kind, param, structure),)


# ---------------------------------------------------------------------------
# comass command
# ---------------------------------------------------------------------------

def run_comass(cfg: RunConfig, parser) -> tuple[list[ClaimRecord], dict, int]:
    model = build_model(cfg.n)
    nf = _build_named(cfg, model, parser)
    witnesses = _witnesses_for(model, nf)
    t0 = time.monotonic()
    report = comass.comass_estimate(
        nf.form, starts=cfg.starts, seed=cfg.seed,
        witnesses=witnesses, form_name=nf.name)
    spec = _face_kind(nf)
    if report.best_frame is not None:
        cls = subspaces.classify(model, report.best_frame,
                                 structure=spec[2] if spec else "I")
        if spec and cls.matches(spec[0], spec[2]):
            report.face_class = nf.face_class
        elif cls.quaternionic:
            report.face_class = "quaternionic"

    if nf.name == "bryant_harvey" and not nf.region_ok:
        ok = report.comass > 1.0
        expected = "> 1 (outside calibration region)"
    else:
        ok = abs(report.comass - 1.0) <= max(cfg.tol_comass, 1e-4)
        expected = 1.0
    rec = _claim(
        f"comass_{nf.name}", f"comass of {nf.name} {nf.params}",
        ok, report.comass, expected, cfg.tol_comass, t0,
        witness=None if report.best_frame is None else report.best_frame.to_dict())
    code = EXIT_NON_CONVERGENCE if report.status == "non_converged" else None
    return [rec], {"comass_report": report.to_dict()}, code


# ---------------------------------------------------------------------------
# region command
# ---------------------------------------------------------------------------

def region_nodes(cfg: RunConfig):
    vals = np.arange(cfg.grid_lo, cfg.grid_hi + 1e-9, cfg.grid)
    vals = np.round(vals, 12)
    return [(float(a), float(b), float(c))
            for a in vals for b in vals for c in vals]


def run_region(cfg: RunConfig) -> tuple[list[ClaimRecord], dict, list]:
    model = build_model(max(cfg.n, 2))
    nodes = region_nodes(cfg)
    rng = np.random.default_rng(cfg.seed)
    node_seeds = rng.integers(0, 2 ** 31 - 1, size=len(nodes))
    # witness frames carry the exterior check exactly, so a few random
    # starts per node are plenty; interior consistency needs none at all
    # (ascent values never exceed the true comass)
    starts = min(cfg.starts, 8)
    opts = comass.ComassOptions(max_iters=200)
    rows = []
    t0 = time.monotonic()
    for idx, (lam, mu, nu) in enumerate(nodes):
        nf = catalog.bryant_harvey(model, lam, mu, nu)
        rep = comass.comass_estimate(
            nf.form, starts=starts, seed=int(node_seeds[idx]), options=opts,
            witnesses=_witnesses_for(model, nf), form_name="bryant_harvey")
        inside = nf.region_ok
        consistent = (rep.comass <= 1.0 + 1e-3) if inside else (rep.comass > 1.0)
        rows.append({
            "lambda": lam, "mu": mu, "nu": nu,
            "comass": rep.comass,
            "in_region": bool(inside),
            "consistent": bool(consistent),
        })
    inside_rows = [r for r in rows if r["in_region"]]
    outside_rows = [r for r in rows if not r["in_region"]]
    inside_bad = [r for r in inside_rows if not r["consistent"]]
    outside_ok = sum(1 for r in outside_rows if r["consistent"])
    records = [
        _claim("region_interior",
               "every in-region node has estimated comass <= 1 + 1e-3",
               not inside_bad, len(inside_bad), 0, 1e-3, t0),
        _claim("region_exterior",
               ">= 95% of exterior nodes produce a witness with value > 1",
               outside_ok >= 0.95 * max(1, len(outside_rows)),
               outside_ok, len(outside_rows), None, t0),
    ]
    return records, {"rows": rows}, rows


# ---------------------------------------------------------------------------
# faces command
# ---------------------------------------------------------------------------

def run_faces(cfg: RunConfig, parser) -> tuple[list[ClaimRecord], dict]:
    model = build_model(cfg.n)
    nf = _build_named(cfg, model, parser)
    spec = _face_kind(nf)
    if spec is None:
        parser.error(f"form {nf.name!r} has no claimed face family to verify")
    kind, param, structure = spec
    rng = np.random.default_rng(cfg.seed)
    positives = [subspaces.random_face(model, kind, param, rng, structure)
                 for _ in range(cfg.samples)]
    negatives = [subspaces.random_plane(model, nf.degree, rng)
                 for _ in range(cfg.samples)]
    t0 = time.monotonic()
    verdict = comass.verify_faces(nf, positives, negatives)
    rec = _claim(
        f"faces_{nf.name}",
        f"{cfg.samples} random {kind} frames give value 1; random planes stay below",
        verdict.passed,
        verdict.to_dict()["positive_max_err"], 0.0, verdict.face_tol, t0)
    return [rec], {"face_report": verdict.to_dict()}


# ---------------------------------------------------------------------------
# stabilizer command
# ---------------------------------------------------------------------------

def run_stabilizer(cfg: RunConfig, parser) -> tuple[list[ClaimRecord], dict]:
    model = build_model(cfg.n)
    nf = _build_named(cfg, model, parser)
    t0 = time.monotonic()
    rep = comass.stabilizer_dimension(nf.form)
    n = model.n
    expected = {
        "omega_i": 2 * n * (4 * n + 1),     # sp(4n, R)
        "vol": 16 * n * n - 1,              # sl(4n, R)
        "v": n * (2 * n + 1),               # claimed compact Sp(n)
        "theta": None,
    }.get(nf.name)
    ok = rep.gap_ok and (expected is None or rep.dimension == expected)
    rec = _claim(
        f"stabilizer_{nf.name}",
        f"gl-stabilizer dimension of {nf.name} {nf.params}",
        ok, rep.dimension, expected, None, t0,
        witness={"gap_ratio": rep.gap_ratio, "rank": rep.rank})
    return [rec], {"stabilizer_report": rep.to_dict()}


# ---------------------------------------------------------------------------
# report-all command
# ---------------------------------------------------------------------------

def run_report_all(cfg: RunConfig, parser) -> int:
    out_dir = cfg.extra.get("out_dir") or "reports"
    os.makedirs(out_dir, exist_ok=True)
    all_records = []

    ident_records, _ = run_identities(cfg)
    all_records += ident_records
    _write_json(os.path.join(out_dir, "identities.json"),
                _records_payload(ident_records))

    model = build_model(cfg.n)
    comass_targets = [("theta", {"p": 1}), ("psi", {"p": cfg.n}),
                      ("kahler", {"p": 2}), ("phi_coiso", {"p": 1}),
                      ("v", {"i": 1})]
    comass_payload = {}
    for name, params in comass_targets:
        if params.get("p", 1) > cfg.n or params.get("i", 0) > cfg.n:
            continue
        nf = catalog.named_form(model, name, **params)
        rep = comass.comass_estimate(
            nf.form, starts=cfg.starts, seed=cfg.seed,
            witnesses=_witnesses_for(model, nf), form_name=nf.name)
        t0 = time.monotonic()
        ok = abs(rep.comass - 1.0) <= max(cfg.tol_comass, 1e-4)
        all_records.append(_claim(
            f"comass_{name}", f"comass of {name} {params}", ok,
            rep.comass, 1.0, cfg.tol_comass, t0))
        comass_payload[name] = rep.to_dict()
        if cfg.plot:
            figures.save_comass_figure(
                rep, os.path.join(out_dir, f"comass_{name}.png"))
    _write_json(os.path.join(out_dir, "comass.json"), comass_payload)

    region_records, _, rows = run_region(cfg)
    all_records += region_records
    with open(os.path.join(out_dir, "region.csv"), "w", encoding="utf-8") as fh:
        fh.write(_csv_text(
            [[r["lambda"], r["mu"], r["nu"], r["comass"],
              r["in_region"], r["consistent"]] for r in rows],
            ["lambda", "mu", "nu", "comass", "in_region", "consistent"]))
    if cfg.plot:
        figures.save_region_figure(rows, os.path.join(out_dir, "region.png"))

    for name, params in [("omega_i", {}), ("vol", {}), ("v", {"i": 1})]:
        sub = RunConfig(**{**vars(cfg), "extra": {**params, "form": name}})
        recs, payload = run_stabilizer(sub, parser)
        all_records += recs
    _write_json(os.path.join(out_dir, "report.json"),
                _records_payload(all_records, {"n": cfg.n, "seed": cfg.seed}))
    sys.stdout.write(
        f"report-all: {sum(r.status == 'pass' for r in all_records)} passed, "
        f"{sum(r.status == 'fail' for r in all_records)} failed -> {out_dir}\n")
    return _exit_code(all_records)


def _write_json(path, payload):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(_canonical_json(payload) + "\n")


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hkcalib",
        description="verification workbench for quaternionic calibration forms")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_form=False):
        p.add_argument("--n", type=int, default=None,
                       help="quaternionic dimension (ambient R^{4n})")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--starts", type=int, default=None)
        p.add_argument("--tol-identity", dest="tol_identity", type=float, default=None)
        p.add_argument("--tol-comass", dest="tol_comass", type=float, default=None)
        p.add_argument("--out", type=str, default=None)
        p.add_argument("--format", choices=("json", "csv"), default=None)
        p.add_argument("--config", type=str, default=None,
                       help="flat key=value config file")
        if with_form:
            p.add_argument("--form", type=str, required=False,
                           help="theta|xi|psi|psi-raw|phi-coiso|bh|v|omega-i|kahler|vol")
            p.add_argument("--p", type=int, default=None)
            p.add_argument("--i", type=int, default=None)
            p.add_argument("--l", type=float, default=None)
            p.add_argument("--m", type=float, default=None)
            p.add_argument("--v", type=float, default=None)
            p.add_argument("--pairing", choices=catalog.PAIRINGS, default=None)

    common(sub.add_parser("identities", help="exact identity suite"))
    common(sub.add_parser("comass", help="comass certification"), with_form=True)
    rp = sub.add_parser("region", help="quadratic-family parameter sweep")
    common(rp)
    rp.add_argument("--grid", type=float, default=None, help="grid step in (0, 1]")
    rp.add_argument("--grid-lo", dest="grid_lo", type=float, default=None)
    rp.add_argument("--grid-hi", dest="grid_hi", type=float, default=None)
    rp.add_argument("--no-plot", action="store_true")
    fp = sub.add_parser("faces", help="sampled face verification")
    common(fp, with_form=True)
    fp.add_argument("--samples", type=int, default=None)
    common(sub.add_parser("stabilizer", help="gl-stabilizer dimension"),
           with_form=True)
    ap = sub.add_parser("report-all", help="full bundle with figures")
    common(ap)
    ap.add_argument("--grid", type=float, default=None)
    ap.add_argument("--grid-lo", dest="grid_lo", type=float, default=None)
    ap.add_argument("--grid-hi", dest="grid_hi", type=float, default=None)
    ap.add_argument("--out-dir", dest="out_dir", type=str, default=None)
    ap.add_argument("--no-plot", action="store_true")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = _resolve(args, parser)

    if cfg.command == "identities":
        records, extra = run_identities(cfg)
        _emit(_records_payload(records, extra), cfg)
        _print_summary(records, cfg)
        return _exit_code(records)
    if cfg.command == "comass":
        records, extra, override = run_comass(cfg, parser)
        _emit(_records_payload(records, extra), cfg)
        _print_summary(records, cfg)
        return override if override is not None else _exit_code(records)
    if cfg.command == "region":
        records, extra, rows = run_region(cfg)
        header = ["lambda", "mu", "nu", "comass", "in_region", "consistent"]
        csv_rows = [[r[h] for h in header] for r in rows]
        _emit(_records_payload(records, extra), cfg, csv_rows, header)
        if cfg.plot and cfg.out:
            figures.save_region_figure(
                rows, os.path.splitext(cfg.out)[0] + ".png")
        _print_summary(records, cfg)
        return _exit_code(records)
    if cfg.command == "faces":
        records, extra = run_faces(cfg, parser)
        _emit(_records_payload(records, extra), cfg)
        _print_summary(records, cfg)
        return _exit_code(records)
    if cfg.command == "stabilizer":
        records, extra = run_stabilizer(cfg, parser)
        _emit(_records_payload(records, extra), cfg)
        _print_summary(records, cfg)
        return _exit_code(records)
    if cfg.command == "report-all":
        return run_report_all(cfg, parser)
    parser.error(f"unknown command {cfg.command!r}")
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
