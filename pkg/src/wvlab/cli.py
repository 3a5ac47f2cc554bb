"""Command-line front end.

Subcommands: simulate | wigner | spectrum | stability | verify.  A JSON
config describes the scenario (constants, driver, states, time window,
grids); every config field can be overridden on the command line by a
flag of the same dotted name, e.g. ``--driver.a 2.0`` or
``--grid.x.points 301``.  Outputs are plot-ready CSV files plus a JSON
manifest echoing the resolved config with checksums; identical configs
produce byte-identical CSV bodies.

Exit codes: 0 success, 1 verification failure, 2 width-collapse
singularity, 3 spectrum accuracy failure, 64 invalid config/usage.
"""

import argparse
import copy
import hashlib
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .dynamics import (ConstantDriver, MathieuDriver, PhysicalParams,
                       SeparatrixDriver, SinSquaredDriver, driver_state,
                       floquet_classify, omega_squared)
from .errors import AccuracyError, SingularityError, WvlabError
from .highrank import (VARIANTS, ExtendedPhasePoint, moyal4_residual,
                       rank2_energy_rate, rank2_grid, rank4_grid,
                       schrodinger2_residual, wigner_rank4)
from .quadrature import Axis, GridSpec, integrate
from .spectrum import spectrum_by_quadrature, spectrum_by_trajectory
from .vlasov import FlowParams, continuity_residual, density, velocity_field
from .wavefunction import (hamilton_jacobi_residual, phase_energy_rate,
                           potential_U1, schrodinger_residual)
from .wigner import (PhasePoint, ellipse_geometry, epsilon_material_derivative,
                     moyal_residual, phase_grid, second_moments, wigner)

DEFAULT_CONFIG = {
    "params": {"m": 1.0, "hbar": 1.0, "hbar2": 1.0},
    "driver": {"kind": "mathieu", "a": 1.0, "g": 0.2, "sigma0": None,
               "sigma_dot0": 0.0},
    "states": [0, 1, 2],
    "time": {"t0": 0.0, "t1": 5.0 * math.pi, "dt": math.pi / 16.0},
    "grid": {"x": {"points": 241, "tails": 8.0},
             "p": {"points": 241, "tails": 8.0}},
    "ode_step": math.pi / 2000.0,
    "rank4_sign": "reduced",
    "rank4_slice": {"enabled": False, "p_dot": 0.0, "p_ddot": 0.0},
    "stability": {"a_min": 0.0, "a_max": 5.0, "a_points": 51,
                  "g_min": 0.0, "g_max": 1.0, "g_points": 21},
    "verify": {"dt": 1e-3, "n_list": [0, 2, 4],
               "times": [0.3, 1.0, 2.0], "residual_tol": 1e-5,
               "static_tol": 1e-10, "ratio_band": [2.5, 6.0],
               "corrupt_omega2_a": None},
    "out_dir": "out",
}


# ---------------------------------------------------------------------------
# config plumbing
# ---------------------------------------------------------------------------

def _merge(base, override):
    out = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], value)
        else:
            out[key] = value
    return out


def _parse_literal(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _apply_dotted(config, dotted, value):
    node = config
    parts = dotted.split(".")
    for part in parts[:-1]:
        if not isinstance(node.get(part), dict):
            node[part] = {}
        node = node[part]
    node[parts[-1]] = value


def load_config(path=None, overrides=()):
    config = copy.deepcopy(DEFAULT_CONFIG)
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            config = _merge(config, json.load(fh))
    for dotted, raw in overrides:
        _apply_dotted(config, dotted, _parse_literal(raw))
    return config


def build_params(config):
    p = config["params"]
    return PhysicalParams(m=float(p["m"]), hbar=float(p["hbar"]),
                          hbar2=float(p.get("hbar2", p["hbar"])))


def build_driver(config, params):
    cfg = config["driver"]
    kind = cfg.get("kind")
    if kind == "constant":
        if "omega0" in cfg and cfg["omega0"] is not None:
            return ConstantDriver.from_frequency(float(cfg["omega0"]), params)
        return ConstantDriver(float(cfg["sigma0"]))
    if kind == "sin_squared":
        return SinSquaredDriver(float(cfg["sigma0"]), float(cfg["varpi0"]))
    if kind == "separatrix":
        return SeparatrixDriver(float(cfg["c1"]), float(cfg.get("c2", 0.0)),
                                int(cfg.get("sign", 1)))
    if kind == "mathieu":
        sigma0 = cfg.get("sigma0")
        return MathieuDriver(a=float(cfg["a"]), g=float(cfg["g"]),
                             sigma0=None if sigma0 is None else float(sigma0),
                             sigma_dot0=float(cfg.get("sigma_dot0", 0.0)),
                             step=float(config["ode_step"]))
    raise ValueError(f"unknown driver kind {kind!r}")


def validate_config(config):
    params = build_params(config)
    driver = build_driver(config, params)
    t = config["time"]
    if not (t["t1"] > t["t0"] >= 0.0 and t["dt"] > 0.0):
        raise ValueError("need t1 > t0 >= 0 and dt > 0")
    for axis in ("x", "p"):
        g = config["grid"][axis]
        if g["points"] < 3 or g["points"] % 2 == 0:
            raise ValueError(f"grid.{axis}.points must be odd and >= 3")
        if g["tails"] <= 0:
            raise ValueError(f"grid.{axis}.tails must be positive")
    if config["rank4_sign"] not in VARIANTS:
        raise ValueError(f"rank4_sign must be one of {VARIANTS}")
    if not config["states"] or any(n < 0 for n in config["states"]):
        raise ValueError("states must be a nonempty list of nonnegative integers")
    return params, driver


def _time_samples(config):
    t = config["time"]
    count = int(math.floor((t["t1"] - t["t0"]) / t["dt"] + 1e-9)) + 1
    return [t["t0"] + i * t["dt"] for i in range(count)]


def _worker_count():
    raw = os.environ.get("WVL_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return min(4, os.cpu_count() or 1)


def _pool_map(fn, items):
    workers = _worker_count()
    if workers == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# output plumbing
# ---------------------------------------------------------------------------

def _fmt(value):
    if isinstance(value, (float, np.floating)):
        return repr(float(value))  # shortest round-trip decimal
    return str(value)


def _write_csv(path, header, rows):
    body = header + "\n" + "\n".join(",".join(_fmt(v) for v in row) for row in rows)
    if rows:
        body += "\n"
    path.write_text(body, encoding="utf-8")
    digest = hashlib.sha256(body.encode("utf-8")).hexdigest()
    return {"rows": len(rows), "sha256": digest}


def _write_manifest(out_dir, config, files, extra=None):
    manifest = {"config": config, "files": files}
    if extra:
        manifest.update(extra)
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _prepare_out(config):
    out_dir = Path(config["out_dir"])
    out_dir.mkdir(parents=True, exist_ok=True)
    return out_dir


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_simulate(config):
    params, driver = validate_config(config)
    out_dir = _prepare_out(config)
    times = _time_samples(config)
    states = [driver_state(driver, params, t, t_hint=times[-1]) for t in times]

    n_max = max(config["states"])
    gx = config["grid"]["x"]
    half = gx["tails"] * max(s.sigma for s in states) * math.sqrt(2 * n_max + 1)
    xs = GridSpec.line(0.0, half, gx["points"]).nodes(0)

    files = {}
    files["sigma.csv"] = _write_csv(
        out_dir / "sigma.csv",
        "t[t.u.],sigma[l.u.],sigma_dot[l.u./t.u.],sigma_ddot[l.u./t.u.^2],omega2[1/t.u.^2]",
        [(t, s.sigma, s.sigma_dot, s.sigma_ddot, omega_squared(s, params))
         for t, s in zip(times, states)])

    for n in config["states"]:
        rows = []
        for t, s in zip(times, states):
            f = density(n, s, xs)
            rows.extend((t, x, v) for x, v in zip(xs, f))
        files[f"density_n{n}.csv"] = _write_csv(
            out_dir / f"density_n{n}.csv", "t[t.u.],x[l.u.],f[1/l.u.]", rows)

    flow = FlowParams(C=0.0)
    rows_v, rows_u = [], []
    for t, s in zip(times, states):
        v = velocity_field(0, s, flow, xs)
        u = potential_U1(s, params, xs)
        rows_v.extend((t, x, vv) for x, vv in zip(xs, v))
        rows_u.extend((t, x, uu) for x, uu in zip(xs, u))
    files["velocity.csv"] = _write_csv(out_dir / "velocity.csv",
                                       "t[t.u.],x[l.u.],v[l.u./t.u.]", rows_v)
    files["potential.csv"] = _write_csv(out_dir / "potential.csv",
                                        "t[t.u.],x[l.u.],U1[e.u.]", rows_u)
    _write_manifest(out_dir, config, files)
    return 0


def cmd_wigner(config):
    params, driver = validate_config(config)
    out_dir = _prepare_out(config)
    times = _time_samples(config)
    gx, gp = config["grid"]["x"], config["grid"]["p"]
    driver_state(driver, params, times[-1])  # warm any ODE cache before fan-out

    files = {}
    minima = {}

    def grid_for(n, state):
        xx, pp, _ = second_moments(n, state, params)
        return GridSpec.plane(
            Axis(0.0, gx["tails"] * math.sqrt(xx), gx["points"]),
            Axis(0.0, gp["tails"] * math.sqrt(pp), gp["points"]))

    jobs = [(n, j, t) for n in config["states"] for j, t in enumerate(times)]

    def run(job):
        n, j, t = job
        state = driver_state(driver, params, t, t_hint=times[-1])
        grid = grid_for(n, state)
        xg, pg = grid.meshgrid()
        w = wigner(n, state, params, PhasePoint(x=xg, p=pg))
        rows = [(x, p, val) for x, p, val in
                zip(xg.ravel(), pg.ravel(), w.ravel())]
        return n, j, rows, float(w.min())

    for n, j, rows, w_min in _pool_map(run, jobs):
        name = f"wigner_n{n}_t{j}.csv"
        files[name] = _write_csv(out_dir / name,
                                 "x[l.u.],p[p.u.],W[1/(l.u.*p.u.)]", rows)
        minima[name] = w_min

    geo_rows = []
    for t in times:
        state = driver_state(driver, params, t, t_hint=times[-1])
        g = ellipse_geometry(state, params)
        geo_rows.append((t, g.a11, g.a12, g.a22, g.theta, g.det,
                         g.area_at_unit_level))
    files["ellipse_geometry.csv"] = _write_csv(
        out_dir / "ellipse_geometry.csv",
        "t[t.u.],a11[1],a12[1],a22[1],theta[rad],det[1],area[1]", geo_rows)

    slice_cfg = config["rank4_slice"]
    if slice_cfg.get("enabled"):
        for j, t in enumerate(times):
            state = driver_state(driver, params, t, t_hint=times[-1])
            grid = grid_for(0, state)
            xg, pg = grid.meshgrid()
            pt = ExtendedPhasePoint(
                x=xg, p=pg, p_dot=float(slice_cfg["p_dot"]),
                p_ddot=float(slice_cfg["p_ddot"]))
            w4 = wigner_rank4(state, params, pt, config["rank4_sign"])
            name = f"rank4_t{j}.csv"
            rows = list(zip(xg.ravel(), pg.ravel(), w4.ravel()))
            files[name] = _write_csv(out_dir / name,
                                     "x[l.u.],p[p.u.],W4[1/(l.u.*p.u.)^2]", rows)

    _write_manifest(out_dir, config, files, extra={"wigner_min": minima})
    return 0


def cmd_spectrum(config):
    params, driver = validate_config(config)
    out_dir = _prepare_out(config)
    times = _time_samples(config)

    rows = []
    for n in config["states"]:
        traj = spectrum_by_trajectory(n, driver, params, times,
                                      h=config["ode_step"])
        quads = _pool_map(
            lambda t: spectrum_by_quadrature(
                n, driver_state(driver, params, t, t_hint=times[-1]), params),
            times)
        for tr, qd in zip(traj, quads):
            rel = abs(tr.energy - qd.energy) / abs(qd.energy)
            tau_mark = 1 if abs(tr.t / math.pi - round(tr.t / math.pi)) < 1e-9 else 0
            rows.append((tr.t, n, qd.energy, tr.energy, rel, tau_mark))

    files = {"spectrum.csv": _write_csv(
        out_dir / "spectrum.csv",
        "t[t.u.],n[1],E_quadrature[e.u.],E_trajectory[e.u.],rel_diff[1],tau_mark[1]",
        rows)}
    _write_manifest(out_dir, config, files)
    return 0


def cmd_stability(config):
    params, _ = validate_config(config)
    out_dir = _prepare_out(config)
    sc = config["stability"]
    if sc["a_points"] < 2 or sc["g_points"] < 1:
        raise ValueError("stability raster needs a_points >= 2, g_points >= 1")
    a_values = np.linspace(sc["a_min"], sc["a_max"], int(sc["a_points"]))
    g_values = np.linspace(sc["g_min"], sc["g_max"], int(sc["g_points"]))

    jobs = [(float(a), float(g)) for g in g_values for a in a_values]
    verdicts = _pool_map(lambda ag: floquet_classify(ag[0], ag[1]), jobs)
    rows = [(v.a, v.g, v.trace, v.classification) for v in verdicts]
    files = {"incestrutt.csv": _write_csv(
        out_dir / "incestrutt.csv", "a[1],g[1],trace[1],classification[-]", rows)}
    _write_manifest(out_dir, config, files)
    return 0


# ---------------------------------------------------------------------------
# verify battery
# ---------------------------------------------------------------------------

def _run_verify_battery(config, params, driver):
    vc = config["verify"]
    is_static = isinstance(driver, ConstantDriver)
    tol = vc["static_tol"] if is_static else vc["residual_tol"]
    lo, hi = vc["ratio_band"]
    times = [float(t) for t in vc["times"]]
    n_list = [int(n) for n in vc["n_list"]]
    t_max = max(times)
    checks = []

    def add(name, value, tolerance, ratio=None, passed=None):
        if passed is None:
            passed = bool(value <= tolerance)
            if ratio is not None and not is_static:
                passed = passed and (lo < ratio < hi)
        checks.append({"check": name, "value": float(value),
                       "tolerance": float(tolerance),
                       "convergence_ratio": None if ratio is None else float(ratio),
                       "pass": bool(passed)})

    def step_for(rate):
        # static states only rotate phases: balancing the O(dt^2) stencil
        # truncation against the O(eps/dt) cancellation floor puts the
        # optimal step at (3 eps)^(1/3) / rate, with an n-independent
        # minimum error around 4e-11
        if not is_static:
            return vc["dt"]
        return (3.0 * 2.2e-16) ** (1.0 / 3.0) / max(abs(rate), 0.05)

    def ratio_pair(fn, dt):
        full = fn(dt)
        half = fn(dt / 2.0)
        ratio = full.max_norm / half.max_norm if half.max_norm > 0 else math.inf
        return full.max_norm, (None if is_static else ratio)

    grid_x = GridSpec.line(0.0, 6.0, 201)
    for n in n_list:
        for t in times:
            state = driver_state(driver, params, t, t_hint=t_max + 1.0)
            grid_xp = phase_grid(n, state, params, points=(101, 101), tails=5.0)
            dt_n = step_for(params.beta * phase_energy_rate(n, state, params))

            value, ratio = ratio_pair(lambda d: continuity_residual(
                n, driver, params, grid_x, t, dt=d), dt_n)
            add(f"continuity[n={n},t={t}]", value, tol, ratio)

            value, ratio = ratio_pair(lambda d: schrodinger_residual(
                n, driver, params, grid_x, t, dt=d), dt_n)
            add(f"schrodinger[n={n},t={t}]", value, tol, ratio)

            value, ratio = ratio_pair(lambda d: hamilton_jacobi_residual(
                n, driver, params, grid_x, t, dt=d), dt_n)
            add(f"hamilton_jacobi[n={n},t={t}]", value, tol, ratio)

            corrupt = vc.get("corrupt_omega2_a")
            if corrupt is None:
                override = None
            elif isinstance(driver, MathieuDriver):
                override = float(corrupt) - 2.0 * driver.g * math.cos(2.0 * t)
            else:
                override = float(corrupt)
            value, ratio = ratio_pair(lambda d: moyal_residual(
                n, driver, params, grid_xp, t, dt=d, omega2_override=override), dt_n)
            add(f"moyal[n={n},t={t}]", value, tol, ratio)

            half = 8.0 * state.sigma * math.sqrt(2 * n + 1)
            xs = np.linspace(-half, half, 2001)
            f_norm = np.trapezoid(density(n, state, xs), dx=xs[1] - xs[0])
            add(f"density_norm[n={n},t={t}]", abs(f_norm - 1.0), 1e-6)

            w_norm, _ = integrate(
                lambda x, p: wigner(n, state, params,
                                           PhasePoint(x=x, p=p)),
                phase_grid(n, state, params, points=(321, 321)))
            add(f"wigner_norm[n={n},t={t}]", abs(w_norm - 1.0), 1e-6)

    for t in times:
        state = driver_state(driver, params, t, t_hint=t_max + 1.0)
        geo = ellipse_geometry(state, params)
        add(f"ellipse_det[t={t}]", abs(geo.det - 1.0), 1e-12)
        add(f"ellipse_area[t={t}]", abs(geo.area_at_unit_level - math.pi), 1e-12)

        md = epsilon_material_derivative(
            driver, params, t, PhasePoint(x=1.0, p=0.5), dt=1e-4)
        add(f"epsilon_characteristic[t={t}]", abs(float(md)), 1e-6)

        grid_xv = rank2_grid(state, params)
        dt_r2 = step_for(rank2_energy_rate(state, params) / params.hbar2)
        value, ratio = ratio_pair(lambda d: schrodinger2_residual(
            driver, params, grid_xv, t, dt=d), dt_r2)
        add(f"rank2_schrodinger[t={t}]", value, tol, ratio)

    t0 = times[0]
    state0 = driver_state(driver, params, t0, t_hint=t_max + 1.0)
    rep = moyal4_residual(driver, params, rank4_grid(state0, params), t0,
                          dt=vc["dt"], variant=config["rank4_sign"])
    add(f"rank4_transport[t={t0}]", rep.max_norm,
        1e-8 if is_static else vc["residual_tol"],
        None if is_static else rep.ratio,
        passed=rep.consistent if not is_static else rep.max_norm <= 1e-8)
    return checks


def cmd_verify(config):
    params, driver = validate_config(config)
    out_dir = _prepare_out(config)
    checks = _run_verify_battery(config, params, driver)
    report = {"config": config, "checks": checks,
              "pass": all(c["pass"] for c in checks)}
    (out_dir / "verify.json").write_text(
        json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    for c in checks:
        status = "PASS" if c["pass"] else "FAIL"
        print(f"[{status}] {c['check']}: value={c['value']:.3e} "
              f"tol={c['tolerance']:.1e}")
    if not report["pass"]:
        first = next(c for c in checks if not c["pass"])
        print(f"verification failed at: {first['check']}", file=sys.stderr)
        return 1
    return 0


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

COMMANDS = {
    "simulate": cmd_simulate,
    "wigner": cmd_wigner,
    "spectrum": cmd_spectrum,
    "stability": cmd_stability,
    "verify": cmd_verify,
}


def _extract_dotted(args):
    """Split leftover argv into (dotted, value) override pairs."""
    overrides = []
    i = 0
    while i < len(args):
        token = args[i]
        if not token.startswith("--") or "." not in token.split("=")[0]:
            raise ValueError(f"unrecognized argument {token!r}")
        if "=" in token:
            dotted, value = token[2:].split("=", 1)
            i += 1
        else:
            if i + 1 >= len(args):
                raise ValueError(f"missing value for {token!r}")
            dotted, value = token[2:], args[i + 1]
            i += 2
        overrides.append((dotted, value))
    return overrides


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="wvlab",
        description="Simulation and verification toolkit for the "
                    "time-dependent quantum oscillator in phase space")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", type=str, default=None,
                        help="JSON scenario file")
    parser.add_argument("--out", type=str, default=None,
                        help="output directory (overrides out_dir)")
    parser.add_argument("--n", type=str, default=None,
                        help="comma-separated state numbers")
    parser.add_argument("--t0", type=float, default=None)
    parser.add_argument("--t1", type=float, default=None)
    parser.add_argument("--dt", type=float, default=None)
    parser.add_argument("--rank4-sign", choices=VARIANTS, default=None)
    known, leftover = parser.parse_known_args(argv)

    try:
        overrides = _extract_dotted(leftover)
        config = load_config(known.config, overrides)
        if known.out is not None:
            config["out_dir"] = known.out
        if known.n is not None:
            config["states"] = [int(s) for s in known.n.split(",")]
        for field in ("t0", "t1", "dt"):
            value = getattr(known, field)
            if value is not None:
                config["time"][field] = value
        if known.rank4_sign is not None:
            config["rank4_sign"] = known.rank4_sign
        validate_config(config)
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 64

    try:
        return COMMANDS[known.command](config)
    except SingularityError as exc:
        print(f"width collapse at t={exc.t}: {exc}", file=sys.stderr)
        return 2
    except AccuracyError as exc:
        print(f"accuracy failure: {exc}", file=sys.stderr)
        return 3
    except WvlabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
