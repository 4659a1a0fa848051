"""Command-line front end.

::

    conformal-curves invariants  --curve helix:a=0.5,b=0.5 --samples 101 --out helix.csv
    conformal-curves verify      --curve trefoil --seed 3
    conformal-curves reconstruct --config run.ini --format both --out recon
    conformal-curves canal       --curve tube:c=1

A run is described by an optional INI file (sections ``[curve]``, ``[run]``
and, for ``reconstruct``, ``[profile]``) and flag overrides.  Exit codes: 0
success, 1 usage or configuration error, 2 degenerate input, 3 failed
verification.
"""

import argparse
import configparser
import csv
import io
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import canal, suite
from . import frames as fr
from . import invariants as inv
from .curve_jets import FAMILIES, CurveSpec
from .errors import ConfigError, ConformalError

EXIT_OK, EXIT_USAGE, EXIT_DEGENERATE, EXIT_FAILED = 0, 1, 2, 3

CANAL_SOURCES = ("tube", "pencil", "split_rotation")

FAMILY_PARAMS = {
    "helix": {"a", "b"},
    "circle": {"r"},
    "trefoil": set(),
    "twisted_cubic": set(),
    "trig_polynomial": {"cos", "sin"},
    "plane_parabola": {"a"},
    "log_spiral": {"a", "b"},
    "samples": {"file", "smoothing"},
    "tube": {"c"},
    "pencil": set(),
    "split_rotation": set(),
}
CURVE_KEYS = {"family", "interval", "samples"}
RUN_KEYS = {"tol", "seed", "trials", "out", "format", "span"}
PROFILE_KEYS = {"q", "t", "table", "span", "plane"}

INVARIANT_HEADER = (
    "t", "s", "rho", "kappa", "tau", "nu", "T_mink", "T_eucl", "Q_mink", "Q_eucl", "max_route_disagreement",
)  # fmt: skip


@dataclass
class RunConfig:
    command: str
    curve: CurveSpec = None
    samples: int = None
    span: tuple = None
    tol: float = None
    seed: int = 0
    trials: int = 20
    out: str = None
    format: str = "csv"
    profile: dict = field(default_factory=dict)


# -- parsing ------------------------------------------------------------------------


def _floats(text, what, where=None):
    try:
        return tuple(float(x) for x in re.split(r"[,\s]+", text.strip()) if x)
    except ValueError:
        raise ConfigError(f"{what}: expected numbers, got {text!r}", *(where or (None, None))) from None


def _pair(text, what, where=None):
    vals = _floats(text, what, where)
    if len(vals) != 2 or not vals[0] < vals[1]:
        raise ConfigError(f"{what}: expected 'a, b' with a < b, got {text!r}", *(where or (None, None)))
    return vals


def _matrix(text, what, where=None):
    rows = [_floats(r, what, where) for r in text.split(";") if r.strip()]
    if not rows or len({len(r) for r in rows}) != 1:
        raise ConfigError(f"{what}: rows separated by ';' must have equal length", *(where or (None, None)))
    return np.array(rows)


def _curve_params(family, raw, locate):
    allowed = FAMILY_PARAMS.get(family)
    if allowed is None:
        known = sorted(FAMILY_PARAMS)
        raise ConfigError(f"unknown curve family {family!r}; choose from {', '.join(known)}", *locate("family"))
    params = {}
    for key, text in raw.items():
        if key not in allowed:
            raise ConfigError(f"unknown key {key!r} for family {family!r}", *locate(key))
        if key in ("cos", "sin"):
            params[key + "_coeffs"] = _matrix(text, key, locate(key))
        elif key == "file":
            params["file"] = text.strip()
        else:
            vals = _floats(text, key, locate(key))
            if len(vals) != 1:
                raise ConfigError(f"{key}: expected one number", *locate(key))
            params[key] = vals[0]
    return params


def parse_curve_flag(text):
    """``family`` or ``family:key=value,key=value`` (``cos``/``sin`` rows use ';')."""
    family, _, rest = text.partition(":")
    raw = {}
    for item in filter(None, re.split(r",(?=\s*[A-Za-z_]+\s*=)", rest)):
        key, eq, value = item.partition("=")
        if not eq:
            raise ConfigError(f"--curve: expected key=value, got {item!r}")
        raw[key.strip().lower()] = value
    return family.strip(), raw


def _key_positions(text):
    """``(section, key) -> (line, column)`` of every option in an INI text."""
    pos, section = {}, None
    for n, line in enumerate(text.splitlines(), 1):
        m = re.match(r"\s*\[([^\]]+)\]", line)
        if m:
            section = m.group(1).strip().lower()
            continue
        m = re.match(r"(\s*)([^=:\s;#][^=:]*?)\s*[=:]", line)
        if m and section is not None:
            pos[(section, m.group(2).strip().lower())] = (n, len(m.group(1)) + 1)
    return pos


def load_config(path):
    """Parse an INI file into ``{section: {key: text}}`` plus key positions."""
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"), interpolation=None)
    try:
        parser.read_string(text, source=path)
    except configparser.ParsingError as exc:
        line, content = exc.errors[0]
        raise ConfigError(f"cannot parse {content!r}", line, 1) from None
    except configparser.DuplicateOptionError as exc:
        raise ConfigError(f"duplicate key {exc.option!r} in [{exc.section}]", exc.lineno, 1) from None
    except configparser.DuplicateSectionError as exc:
        raise ConfigError(f"duplicate section [{exc.section}]", exc.lineno, 1) from None
    except configparser.MissingSectionHeaderError as exc:
        raise ConfigError("expected a [section] header", exc.lineno, 1) from None
    pos = _key_positions(text)
    sections = {}
    for name in parser.sections():
        if name.lower() not in ("curve", "run", "profile"):
            line = next((n for n, ln in enumerate(text.splitlines(), 1) if ln.strip().lower() == f"[{name.lower()}]"), None)
            raise ConfigError(f"unknown section [{name}]", line, 1)
        items = dict(parser.items(name))
        for key, value in items.items():
            if "\n" in value:
                line, col = pos.get((name.lower(), key), (None, None))
                extra = None if line is None else line + 1
                raise ConfigError(f"unexpected continuation line in value of {key!r}", extra, 1)
        sections[name.lower()] = items
    return sections, pos


def build_config(args):
    sections, pos = load_config(args.config) if args.config else ({}, {})

    def locate(section):
        return lambda key: pos.get((section, key), (None, None))

    cfg = RunConfig(command=args.command)
    run = sections.get("run", {})
    for key in run:
        if key not in RUN_KEYS:
            raise ConfigError(f"unknown key {key!r} in [run]", *locate("run")(key))
    if "tol" in run:
        cfg.tol = _floats(run["tol"], "tol", locate("run")("tol"))[0]
    if "seed" in run:
        cfg.seed = int(_floats(run["seed"], "seed", locate("run")("seed"))[0])
    if "trials" in run:
        cfg.trials = int(_floats(run["trials"], "trials", locate("run")("trials"))[0])
    if "span" in run:
        cfg.span = _pair(run["span"], "span", locate("run")("span"))
    cfg.out = run.get("out", cfg.out)
    cfg.format = run.get("format", cfg.format).strip()

    curve = dict(sections.get("curve", {}))
    cpos = locate("curve")
    if args.curve:
        family, raw = parse_curve_flag(args.curve)
        curve = {"family": family, **raw, **{k: v for k, v in curve.items() if k in ("interval", "samples")}}
        cpos = lambda key: (None, None)  # noqa: E731
    if curve:
        if "family" not in curve:
            raise ConfigError("[curve] needs a 'family' key")
        family = curve.pop("family").strip()
        interval = _pair(curve.pop("interval"), "interval", cpos("interval")) if "interval" in curve else None
        if "samples" in curve:
            cfg.samples = int(_floats(curve.pop("samples"), "samples", cpos("samples"))[0])
        cfg.curve = CurveSpec(family, _curve_params(family, curve, cpos), interval)

    profile = sections.get("profile", {})
    for key in profile:
        if key not in PROFILE_KEYS:
            raise ConfigError(f"unknown key {key!r} in [profile]", *locate("profile")(key))
    cfg.profile = dict(profile)

    if args.samples is not None:
        cfg.samples = args.samples
    if args.span is not None:
        cfg.span = _pair(args.span, "--span")
    if args.tol is not None:
        cfg.tol = args.tol
    if args.seed is not None:
        cfg.seed = args.seed
    if args.out is not None:
        cfg.out = args.out
    if args.format is not None:
        cfg.format = args.format
    if cfg.format not in ("csv", "svg", "both"):
        raise ConfigError(f"format must be csv, svg or both, not {cfg.format!r}")
    if cfg.samples is not None and cfg.samples < 2:
        raise ConfigError("samples must be at least 2")
    return cfg


def build_curve(spec):
    params = dict(spec.params)
    if spec.family == "samples":
        path = params.pop("file", None)
        if path is None:
            raise ConfigError("family 'samples' needs a 'file' key")
        data = _read_table(path, None)
        t = data.pop("t", None)
        if t is None:
            raise ConfigError(f"{path}: sample table needs a 't' column")
        axes = [data[k] for k in ("x", "y", "z") if k in data]
        return FAMILIES["samples"](t, np.column_stack(axes), **params)
    spec = CurveSpec(spec.family, params, spec.interval, spec.samples)
    try:
        return spec.build()
    except TypeError as exc:
        raise ConfigError(f"bad parameters for {spec.family!r}: {exc}") from None


# -- output ---------------------------------------------------------------------------

_G17 = "{:.17g}".format


def write_csv(rows, header, fh):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_G17(v) if isinstance(v, (float, np.floating)) else v for v in row])


def _panel(polylines, axes, x0, size, title):
    pts = np.concatenate([p[:, axes] for p, _ in polylines])
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    center, half = (lo + hi) / 2, max(float(np.max(hi - lo)) / 2, 1e-12) * 1.08
    scale = (size / 2 - 10) / half
    out = [f'<text x="{x0 + 10}" y="20" font-family="sans-serif" font-size="14">{title}</text>']
    for poly, style in polylines:
        xy = (poly[:, axes] - center) * scale
        coords = " ".join(f"{x0 + size / 2 + x:.3f},{size / 2 + 15 - y:.3f}" for x, y in xy)
        out.append(f'<polyline points="{coords}" fill="none" {style}/>')
    return out


def svg_projections(polylines, plane=False, size=400):
    """Static SVG of xy (and xz) projections of ``[(points, style), ...]``."""
    panels = [((0, 1), "xy")] if plane else [((0, 1), "xy"), ((0, 2), "xz")]
    width = size * len(panels)
    body = []
    for k, (axes, title) in enumerate(panels):
        body += _panel(polylines, axes, k * size, size, title)
    return "\n".join(
        [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{size + 30}" viewBox="0 0 {width} {size + 30}">',
            f'<rect width="{width}" height="{size + 30}" fill="white"/>',
            *body,
            "</svg>",
            "",
        ]
    )


CURVE_STYLE = 'stroke="black" stroke-width="1.5"'
CIRCLE_STYLE = 'stroke="#c0392b" stroke-width="0.8" stroke-dasharray="4,3"'


def osculating_circle_points(curve, t, n=96):
    """Points of the osculating circle at ``t`` (display only)."""
    j = curve.jet(t, 2)
    d1, d2 = j[1], 2 * j[2]
    if curve.dim == 2:
        d1, d2 = np.append(d1, 0.0), np.append(d2, 0.0)
    speed = np.linalg.norm(d1)
    tangent = d1 / speed
    normal = d2 - np.dot(d2, tangent) * tangent
    kappa = np.linalg.norm(normal) / speed**2
    normal /= np.linalg.norm(normal)
    center = np.append(j.value, 0.0)[:3] if curve.dim == 2 else j.value
    center = center + normal / kappa
    phi = np.linspace(0, 2 * np.pi, n)
    pts = center - np.outer(np.cos(phi), normal) / kappa + np.outer(np.sin(phi), tangent) / kappa
    return pts[:, : curve.dim]


def _emit(cfg, name, text, suffix):
    if cfg.out is None:
        sys.stdout.write(text)
        return
    path = cfg.out if cfg.out.endswith(suffix) else f"{cfg.out}{suffix}"
    d = os.path.dirname(path)
    if d:
        os.makedirs(d, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(text)
    print(f"wrote {path}", file=sys.stderr)


def _threads():
    try:
        return max(1, int(os.environ.get("CONFORMAL_CURVES_THREADS", "1")))
    except ValueError:
        return 1


def _map(fn, items):
    n = _threads()
    if n == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


# -- commands -------------------------------------------------------------------------


def _grid(cfg, curve):
    a, b = cfg.span if cfg.span else curve.interval
    return np.linspace(a, b, cfg.samples or 101)


def _invariant_row(curve, t):
    p = inv.analyze(curve, t)
    fd = p.frenet
    if curve.dim == 2:
        q_m, q_e, t_m, t_e, spread = p.Q2, p.Q_euclidean, 0.0, 0.0, 0.0
    else:
        q_m, q_e, t_m, t_e = p.Q, p.Q_euclidean, p.T, p.T_euclidean
        spread = max(max(p.T_routes.values()) - min(p.T_routes.values()), abs(t_m - t_e)) / t_e
    dis = max(abs(q_m - q_e) / max(abs(q_e), 1.0), spread)
    return [float(t), fd.kappa, fd.tau, fd.nu, t_m, t_e, q_m, q_e, dis], p.circle.drho_dt


def cmd_invariants(cfg):
    curve = build_curve(_require_curve(cfg))
    ts = _grid(cfg, curve)

    def one(t):
        try:
            return _invariant_row(curve, t)
        except ConformalError as exc:
            return exc

    results = _map(one, ts)
    bad = [(t, r) for t, r in zip(ts, results) if isinstance(r, Exception)]
    for t, exc in bad:
        print(f"degenerate input at t = {t:.17g}: {type(exc).__name__}: {exc}", file=sys.stderr)
    good = [(t, r) for t, r in zip(ts, results) if not isinstance(r, Exception)]
    if not good:
        return EXIT_DEGENERATE
    gts = np.array([t for t, _ in good])
    s = inv.cumulative(lambda t: inv.speed(curve, t), gts)
    dens = [r[1] for _, r in good]
    rho = inv.cumulative_from_jets(gts, dens, density=lambda t: inv.conformal_speed(curve, t))
    rows = [[r[0][0], s[k], rho[k], *r[0][1:]] for k, (_, r) in enumerate(good)]
    tol = cfg.tol if cfg.tol is not None else 1e-6
    if cfg.format in ("csv", "both"):
        buf = io.StringIO()
        write_csv(rows, INVARIANT_HEADER, buf)
        _emit(cfg, "invariants", buf.getvalue(), ".csv")
    if cfg.format in ("svg", "both"):
        dense = curve.points(np.linspace(gts[0], gts[-1], 400))
        lines = [(dense, CURVE_STYLE)]
        for t in gts[:: max(1, len(gts) // 5)]:
            lines.append((osculating_circle_points(curve, t), CIRCLE_STYLE))
        _emit(cfg, "invariants", svg_projections(lines, plane=curve.dim == 2), ".svg")
    worst = max(r[-1] for r in rows)
    if worst > tol:
        print(f"route disagreement {worst:.3e} exceeds {tol:.1e}", file=sys.stderr)
        return EXIT_FAILED
    return EXIT_DEGENERATE if bad else EXIT_OK


def cmd_verify(cfg):
    curve = build_curve(cfg.curve) if cfg.curve else None
    checks = suite.run_suite(curve, samples=cfg.samples or 11, seed=cfg.seed, trials=cfg.trials, tol=cfg.tol)
    label = "helix:a=0.5,b=0.5" if cfg.curve is None else _describe(cfg.curve)
    lines = [f"curve {label}", f"seed {cfg.seed}, trials {cfg.trials}"]
    lines += [c.line() for c in checks]
    failed = [c.name for c in checks if not c.passed]
    lines.append(f"{len(checks) - len(failed)}/{len(checks)} passed" + (f"; failed: {', '.join(failed)}" if failed else ""))
    _emit(cfg, "verify", "\n".join(lines) + "\n", ".txt")
    return EXIT_FAILED if failed else EXIT_OK


def _describe(spec):
    parts = []
    for k, v in sorted(spec.params.items()):
        parts.append(f"{k}={np.array2string(np.asarray(v), separator=' ') if np.ndim(v) else f'{v:g}'}")
    return spec.family + (":" + ",".join(parts) if parts else "")


def _read_table(path, where):
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise ConfigError(f"cannot read table {path}: {exc.strerror}", *(where or (None, None))) from None
    rows = [r for r in rows if r and not r[0].lstrip().startswith("#")]
    if len(rows) < 2:
        raise ConfigError(f"{path}: table needs a header and data rows")
    header = [h.strip() for h in rows[0]]
    cols = {h: [] for h in header}
    for n, row in enumerate(rows[1:], 2):
        if len(row) != len(header):
            raise ConfigError(f"{path}: row has {len(row)} fields, header has {len(header)}", n, 1)
        for h, cell in zip(header, row):
            try:
                cols[h].append(float(cell))
            except ValueError:
                col = header.index(h) + 1
                raise ConfigError(f"{path}: {cell!r} is not a number", n, col) from None
    return {h: np.array(v) for h, v in cols.items()}


def _profiles(cfg):
    p = cfg.profile
    where = (None, None)
    plane = p.get("plane", "false").strip().lower() in ("1", "true", "yes")
    if "table" in p:
        data = _read_table(p["table"].strip(), where)
        if "rho" not in data or ("Q" not in data and "Q_mink" not in data):
            raise ConfigError(f"{p['table']}: table needs 'rho' and 'Q' columns")
        q_col = data.get("Q", data.get("Q_mink"))
        t_col = data.get("T", data.get("T_mink"))
        try:
            Q = fr.Profile.from_samples(data["rho"], q_col)
            T = fr.Profile.constant(0.0) if t_col is None else fr.Profile.from_samples(data["rho"], t_col)
        except ValueError as exc:
            raise ConfigError(f"{p['table']}: {exc}") from None
        return Q, T, plane
    try:
        Q = float(p.get("q", "-0.5"))
        T = float(p.get("t", "1.0"))
    except ValueError:
        raise ConfigError("[profile] Q and T must be numbers") from None
    return Q, T, plane


def cmd_reconstruct(cfg):
    Q, T, plane = _profiles(cfg)
    span = cfg.span or (_pair(cfg.profile["span"], "span") if "span" in cfg.profile else (0.0, 5.0))
    sol = fr.frenet_integrate(Q, 0.0 if plane else T, span=span, plane=plane, samples=cfg.samples or 201)
    print(f"gram drift {sol.drift:.3e}", file=sys.stderr)
    if cfg.format in ("csv", "both"):
        buf = io.StringIO()
        header = ("rho", "x", "y") if plane else ("rho", "x", "y", "z")
        write_csv([[r, *p] for r, p in zip(sol.rho, sol.points)], header, buf)
        _emit(cfg, "reconstruct", buf.getvalue(), ".csv")
    if cfg.format in ("svg", "both"):
        _emit(cfg, "reconstruct", svg_projections([(sol.points, CURVE_STYLE)], plane=plane), ".svg")
    tol = cfg.tol if cfg.tol is not None else 1e-8
    return EXIT_FAILED if sol.drift > tol else EXIT_OK


def _canal_source(cfg):
    spec = _require_curve(cfg)
    if spec.family == "tube":
        return canal.DeSitterCurve.tube(spec.params.get("c", 1.0))
    if spec.family == "pencil":
        return canal.DeSitterCurve.pencil()
    if spec.family == "split_rotation":
        return canal.CircleCurve.split_rotation()
    curve = build_curve(spec)
    if curve.dim != 3:
        raise ConfigError("canal needs a space curve, a sphere curve (tube, pencil) or split_rotation")
    return canal.DeSitterCurve.osculating_spheres(curve)


def cmd_canal(cfg):
    src = _canal_source(cfg)
    n = cfg.samples or 41
    ts = np.linspace(*(cfg.span or src.interval), n)
    rows, lines = [], [f"source {src.name}"]
    if isinstance(src, canal.CircleCurve):
        # cell midpoints: symmetric examples can be pure at the grid nodes
        a, b = cfg.span or src.interval
        ts = a + (b - a) * (np.arange(n) + 0.5) / n
        pr = canal.purity_check(src, ts)
        verdict = "canal" if pr.canal else "not a canal"
        lines += [f"verdict: {verdict}", f"max purity residual of gamma': {pr.residuals.max():.6e}"]
        rows = [[t, r, g] for t, r, g in zip(pr.ts, pr.residuals, pr.gamma_residuals)]
        header = ("t", "purity_gamma_dot", "purity_gamma")
    else:
        rep = canal.canal_classify(src, ts)
        counts = {k: rep.classes.count(k) for k in sorted(set(rep.classes))}
        lines += [
            f"classification: {rep.kind}",
            "k_g classes: " + ", ".join(f"{k} {v}" for k, v in counts.items()),
            f"max |<k_g,k_g> - <gamma',gamma'>|: {rep.identity_error:.6e}",
            f"max purity residual of gamma': {rep.max_purity:.6e}",
        ]
        rows = [[s.t, s.kg_norm, s.gamma_dot_norm, s.causal, s.purity] for s in rep.samples]
        header = ("t", "kg_norm", "gamma_dot_norm", "class", "purity")
    text = "\n".join(lines) + "\n"
    if cfg.out is None:
        sys.stdout.write(text)
        buf = io.StringIO()
        write_csv(rows, header, buf)
        sys.stdout.write(buf.getvalue())
        return EXIT_OK
    _emit(cfg, "canal", text, ".txt")
    buf = io.StringIO()
    write_csv(rows, header, buf)
    _emit(cfg, "canal", buf.getvalue(), ".csv")
    return EXIT_OK


def _require_curve(cfg):
    if cfg.curve is None:
        raise ConfigError(f"{cfg.command} needs a curve (--curve or a [curve] section)")
    return cfg.curve


COMMANDS = {
    "invariants": cmd_invariants,
    "verify": cmd_verify,
    "reconstruct": cmd_reconstruct,
    "canal": cmd_canal,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def make_parser():
    parser = _Parser(prog="conformal-curves", description="Mobius invariants of curves in E^3 and E^2.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    helps = {
        "invariants": "tabulate rho, Q, T by both routes",
        "verify": "run the verification suite",
        "reconstruct": "integrate the Frenet equations from Q and T",
        "canal": "classify a canal surface",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text)
        p.add_argument("--config", help="INI file with [curve], [run], [profile] sections")
        p.add_argument("--curve", help="family[:key=value,...], e.g. helix:a=1,b=2")
        p.add_argument("--samples", type=int)
        p.add_argument("--span", help="'a,b': parameter range (rho range for reconstruct)")
        p.add_argument("--tol", type=float)
        p.add_argument("--seed", type=int)
        p.add_argument("--out", help="output path (suffix added as needed); default stdout")
        p.add_argument("--format", choices=("csv", "svg", "both"))
    return parser


def main(argv=None):
    args = make_parser().parse_args(argv)
    try:
        cfg = build_config(args)
        return COMMANDS[cfg.command](cfg)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConformalError as exc:
        print(f"degenerate input: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE


if __name__ == "__main__":
    sys.exit(main())
