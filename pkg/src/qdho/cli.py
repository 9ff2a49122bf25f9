"""Command line surface: simulate, compare, check, classical.

simulate   evolve one scenario, emit a CSV time series of observables
compare    evolve with several methods, emit a JSON distance report
check      run the internal consistency suite (algebra + closed forms)
classical  the classical damped-oscillator reference trajectory

Exit codes: 0 ok, 1 tolerance or invariant failure, 2 invalid config,
3 truncation inadequate for the requested scenario.
"""

import argparse
import cmath
import itertools
import json
import math
import sys
from dataclasses import asdict, dataclass

import numpy as np

from . import analytic, fock, lindblad, linalg, observables
from .fock import TruncationError

EXIT_OK = 0
EXIT_TOLERANCE = 1
EXIT_CONFIG = 2
EXIT_TRUNCATION = 3

METHODS = ("analytic", "expm", "rk4")


class ConfigError(ValueError):
    """Scenario configuration violates an invariant (exit code 2)."""


@dataclass
class ScenarioConfig:
    """One simulation scenario; defaults keep the truncation boundary
    population below 1e-10 out to t_max = 5."""

    omega: float = 1.0
    mu: float = 0.4
    nu: float = 0.1
    dim: int = 20
    initial: str = "coherent:1,0"
    t_max: float = 5.0
    steps: int = 10
    methods: tuple = ("analytic", "expm")
    rk4_dt: float = None


_CONFIG_FIELDS = ("omega", "mu", "nu", "dim", "initial", "t_max", "steps",
                  "methods", "rk4_dt")


def validate_config(cfg):
    if not (cfg.mu > cfg.nu >= 0.0):
        raise ConfigError(f"need mu > nu >= 0, got mu={cfg.mu}, nu={cfg.nu}")
    if cfg.dim < 2:
        raise ConfigError(f"need dim >= 2, got {cfg.dim}")
    if cfg.t_max < 0.0:
        raise ConfigError(f"need t_max >= 0, got {cfg.t_max}")
    if cfg.steps < 1:
        raise ConfigError(f"need steps >= 1, got {cfg.steps}")
    if not cfg.methods:
        raise ConfigError("need at least one method")
    for m in cfg.methods:
        if m not in METHODS:
            raise ConfigError(
                f"unknown method {m!r}, choose from {'/'.join(METHODS)}")
    if cfg.rk4_dt is not None and not cfg.rk4_dt > 0.0:
        raise ConfigError(f"need dt > 0, got {cfg.rk4_dt}")
    parse_initial_tag(cfg.initial)
    return cfg


def parse_initial_tag(text):
    """Split an --initial value into (kind, payload) without building the
    state; grammar: vacuum | fock:n | coherent:re,im | squeezed:re,im."""
    grammar = "vacuum | fock:n | coherent:re,im | squeezed:re,im"
    if text == "vacuum":
        return ("vacuum", None)
    kind, sep, arg = text.partition(":")
    if not sep:
        raise ConfigError(f"initial must be {grammar}, got {text!r}")
    if kind == "fock":
        try:
            return ("fock", int(arg))
        except ValueError:
            raise ConfigError(f"fock level must be an integer, got {arg!r}")
    if kind in ("coherent", "squeezed"):
        parts = arg.split(",")
        if len(parts) != 2:
            raise ConfigError(
                f"{kind} takes re,im (two reals), got {arg!r}")
        try:
            return (kind, complex(float(parts[0]), float(parts[1])))
        except ValueError:
            raise ConfigError(f"{kind} takes re,im (two reals), got {arg!r}")
    raise ConfigError(f"initial must be {grammar}, got {text!r}")


def build_initial(cfg, space):
    kind, arg = parse_initial_tag(cfg.initial)
    if kind == "vacuum":
        psi = fock.fock_state(space, 0)
    elif kind == "fock":
        psi = fock.fock_state(space, arg)
    elif kind == "coherent":
        psi = fock.coherent_state(space, arg)
    else:
        psi = fock.squeezed_state(space, arg)
    return fock.density_from_pure(psi)


def load_config_file(path):
    with open(path, "r") as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict):
        raise ConfigError("config file must hold a JSON object")
    for key in raw:
        if key not in _CONFIG_FIELDS:
            raise ConfigError(f"unknown config key {key!r}")
    return raw


def merge_config(args):
    """Defaults, then the JSON config file, then explicit flags."""
    values = asdict(ScenarioConfig())
    if getattr(args, "config", None):
        values.update(load_config_file(args.config))
    flag_map = (("omega", "omega"), ("mu", "mu"), ("nu", "nu"),
                ("dim", "dim"), ("initial", "initial"), ("tmax", "t_max"),
                ("steps", "steps"), ("dt", "rk4_dt"))
    for flag, field in flag_map:
        val = getattr(args, flag, None)
        if val is not None:
            values[field] = val
    if getattr(args, "methods", None) is not None:
        values["methods"] = tuple(args.methods.split(","))
    if isinstance(values["methods"], list):
        values["methods"] = tuple(values["methods"])
    try:
        values["dim"] = int(values["dim"])
        values["steps"] = int(values["steps"])
        for key in ("omega", "mu", "nu", "t_max"):
            values[key] = float(values[key])
        if values["rk4_dt"] is not None:
            values["rk4_dt"] = float(values["rk4_dt"])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad config value: {exc}")
    if not isinstance(values["initial"], str):
        raise ConfigError("initial must be a string")
    return validate_config(ScenarioConfig(**values))


def time_grid(cfg):
    if cfg.steps == 1:
        return np.array([cfg.t_max])
    return np.linspace(0.0, cfg.t_max, cfg.steps)


def evolve_method(method, params, rho0, times, rk4_dt):
    if method == "analytic":
        return [analytic.general_solution(params, rho0, t) for t in times]
    if method == "expm":
        liou = lindblad.build_liouvillian(params)
        return [lindblad.propagate_expm(params, rho0, t, liouvillian=liou)
                for t in times]
    return [lindblad.propagate_rk4(params, rho0, t, dt=rk4_dt)
            for t in times]


def _open_out(spec_path):
    if spec_path is None or spec_path == "stdout":
        return sys.stdout, False
    return open(spec_path, "w"), True


def _fmt(x):
    return f"{x:.17g}"


def cmd_simulate(cfg, out_path):
    """CSV time series: one row per (method, time point), observables per
    row; rows ordered by (method, t)."""
    space = fock.FockSpace(cfg.dim)
    params = lindblad.ModelParams(cfg.omega, cfg.mu, cfg.nu, space)
    rho0 = build_initial(cfg, space)
    times = time_grid(cfg)
    lines = ["t,method,trace_drift,purity,mean_n,re_mean_a,im_mean_a,min_eig"]
    for method in sorted(set(cfg.methods)):
        states = evolve_method(method, params, rho0, times, cfg.rk4_dt)
        for t, rho in zip(times, states):
            rec = observables.observe(rho, t=float(t))
            lines.append(",".join([
                _fmt(rec.t), method, _fmt(rec.trace_drift), _fmt(rec.purity),
                _fmt(rec.mean_n), _fmt(rec.mean_a.real), _fmt(rec.mean_a.imag),
                _fmt(rec.min_eig)]))
    out, close = _open_out(out_path)
    out.write("\n".join(lines) + "\n")
    if close:
        out.close()
    return EXIT_OK


def cmd_compare(cfg, out_path, tol):
    """JSON report of pairwise Frobenius distances between methods at every
    time point; exit 1 when the max distance exceeds tol."""
    if len(cfg.methods) < 2:
        raise ConfigError("compare needs at least two methods")
    space = fock.FockSpace(cfg.dim)
    params = lindblad.ModelParams(cfg.omega, cfg.mu, cfg.nu, space)
    rho0 = build_initial(cfg, space)
    times = time_grid(cfg)
    cache = {}
    for method in cfg.methods:
        if method not in cache:
            cache[method] = evolve_method(method, params, rho0, times,
                                          cfg.rk4_dt)
    pairs = []
    overall = 0.0
    for i, j in itertools.combinations(range(len(cfg.methods)), 2):
        mi, mj = cfg.methods[i], cfg.methods[j]
        dists = [float(linalg.frobenius_norm(a.matrix - b.matrix))
                 for a, b in zip(cache[mi], cache[mj])]
        pair_max = max(dists)
        overall = max(overall, pair_max)
        pairs.append({
            "methods": [mi, mj],
            "max_distance": pair_max,
            "distances": [{"t": float(t), "frobenius": d}
                          for t, d in zip(times, dists)],
        })
    scenario = asdict(cfg)
    scenario["methods"] = list(scenario["methods"])
    report = {
        "scenario": scenario,
        "tol": tol,
        "pairs": pairs,
        "max_distance": overall,
        "pass": bool(overall <= tol),
    }
    out, close = _open_out(out_path)
    json.dump(report, out, indent=2)
    out.write("\n")
    if close:
        out.close()
    return EXIT_OK if overall <= tol else EXIT_TOLERANCE


# ---------------------------------------------------------------------------
# the check suite: every invariant the construction leans on, one line each

def _crand(rng, n, m):
    return (rng.standard_normal((n, m))
            + 1j * rng.standard_normal((n, m))) / math.sqrt(2.0)


def _chk_kron_mixed_product(rng):
    a, c = _crand(rng, 4, 4), _crand(rng, 4, 4)
    b, d = _crand(rng, 3, 3), _crand(rng, 3, 3)
    lhs = linalg.kron(a, b) @ linalg.kron(c, d)
    rhs = linalg.kron(a @ c, b @ d)
    return float(np.max(np.abs(lhs - rhs))), 1e-10


def _chk_kron_expm_factorization(rng):
    a = 0.4 * _crand(rng, 4, 4)
    b = 0.4 * _crand(rng, 3, 3)
    gen = linalg.kron(a, np.eye(3)) + linalg.kron(np.eye(4), b)
    lhs = linalg.expm(gen)
    rhs = linalg.kron(linalg.expm(a), linalg.expm(b))
    return float(np.max(np.abs(lhs - rhs))), 1e-10


def _chk_kron_adjoint(rng):
    a, b = _crand(rng, 4, 4), _crand(rng, 3, 3)
    lhs = linalg.adjoint(linalg.kron(a, b))
    rhs = linalg.kron(linalg.adjoint(a), linalg.adjoint(b))
    return float(np.max(np.abs(lhs - rhs))), 1e-12


def _chk_vec_roundtrip(rng):
    x = _crand(rng, 6, 6)
    back = linalg.devectorize(linalg.vectorize(x), 6, 6)
    return float(np.max(np.abs(back - x))), 1e-15


def _chk_vec_sandwich(rng):
    a, x, b = _crand(rng, 5, 5), _crand(rng, 5, 5), _crand(rng, 5, 5)
    lhs = linalg.vectorize(a @ x @ b)
    rhs = linalg.kron(a, b.T) @ linalg.vectorize(x)
    return float(np.max(np.abs(lhs - rhs))), 1e-10


_K3_2X2 = np.array([[0.5, 0.0], [0.0, -0.5]], dtype=np.complex128)
_KP_2X2 = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=np.complex128)
_KM_2X2 = np.array([[0.0, 0.0], [-1.0, 0.0]], dtype=np.complex128)


def _comm(a, b):
    return a @ b - b @ a


def _chk_su11_2x2(rng):
    r1 = np.max(np.abs(_comm(_K3_2X2, _KP_2X2) - _KP_2X2))
    r2 = np.max(np.abs(_comm(_K3_2X2, _KM_2X2) + _KM_2X2))
    r3 = np.max(np.abs(_comm(_KP_2X2, _KM_2X2) + 2.0 * _K3_2X2))
    return float(max(r1, r2, r3)), 1e-15


def _interior_index(d):
    return np.array([i * d + j for i in range(d - 1) for j in range(d - 1)])


def _chk_su11_k(rng):
    sp = fock.FockSpace(12)
    kp, km, k3m = lindblad.k_plus(sp), lindblad.k_minus(sp), lindblad.k3(sp)
    sub = np.ix_(_interior_index(12), _interior_index(12))
    r1 = np.max(np.abs((_comm(k3m, kp) - kp)[sub]))
    r2 = np.max(np.abs((_comm(k3m, km) + km)[sub]))
    r3 = np.max(np.abs((_comm(kp, km) + 2.0 * k3m)[sub]))
    return float(max(r1, r2, r3)), 1e-10


def _chk_k0_centrality(rng):
    sp = fock.FockSpace(12)
    k0m = lindblad.k0(sp)
    sub = np.ix_(_interior_index(12), _interior_index(12))
    vals = [np.max(np.abs(_comm(k0m, other)[sub]))
            for other in (lindblad.k_plus(sp), lindblad.k3(sp),
                          lindblad.k_minus(sp))]
    return float(max(vals)), 1e-10


def _chk_bch_displacement(rng):
    # evaluated on a doubled working space: the one-exponential side loses
    # up-and-back paths through the cut, the ordered product does not
    dim = 30
    work = fock.FockSpace(2 * dim)
    alpha = (0.3 + 0.7 * rng.random()) * cmath.exp(2j * math.pi * rng.random())
    a = fock.annihilation(work)
    adg = fock.creation(work)
    lhs = linalg.expm(alpha * adg - np.conj(alpha) * a)
    rhs = (math.exp(-0.5 * abs(alpha) ** 2)
           * (linalg.expm(alpha * adg) @ linalg.expm(-np.conj(alpha) * a)))
    keep = dim - max(2, dim // 4)
    return analytic._block_discrepancy(lhs, rhs, keep), 1e-8


def _chk_coherent_equivalences(rng):
    sp = fock.FockSpace(30)
    alpha = (0.3 + 0.7 * rng.random()) * cmath.exp(2j * math.pi * rng.random())
    v1 = fock.coherent_state(sp, alpha).amplitudes
    v2 = fock.coherent_state_via_displacement(sp, alpha).amplitudes
    series_vs_expm = np.linalg.norm(v1 - v2)
    lowered = fock.annihilation(sp) @ v1
    eigen = np.linalg.norm(lowered[:sp.dim - 1] - alpha * v1[:sp.dim - 1])
    return float(max(series_vs_expm, eigen)), 1e-8


def _chk_scalar_disentangle(rng):
    sp = fock.FockSpace(40)
    jitter = 0.05 * (rng.random(6) - 0.5)
    alpha = complex(0.3 + jitter[0], jitter[1])
    beta = complex(-0.2 + jitter[2], jitter[3])
    gamma = complex(0.5 + jitter[4], 0.1 + jitter[5])
    main = analytic.disentangle_check(alpha, beta, gamma, sp)
    shuffle = analytic.shuffle_check(0.2 + jitter[0], 0.3 + jitter[2], sp)
    return float(max(main, shuffle)), 1e-8


def _chk_superop_disentangle(rng):
    sp = fock.FockSpace(12)
    params = lindblad.ModelParams(1.0, 2.0, 1.0, sp)
    t = 0.5 + 0.5 * rng.random()  # invariant asserted for t <= 1
    return analytic.superop_disentangle_check(params, t), 1e-7


def _chk_riccati(rng):
    sp = fock.FockSpace(4)
    mu = 2.0 + 0.5 * (rng.random() - 0.5)
    nu = 1.0 + 0.3 * (rng.random() - 0.5)
    params = lindblad.ModelParams(1.0, mu, nu, sp)
    worst = max(analytic.riccati_residual(params, t) for t in (0.5, 1.0, 5.0))
    return float(worst), 1e-7


def _chk_gauss_roundtrip(rng):
    sp = fock.FockSpace(4)
    mu = 1.2 + 0.8 * rng.random()
    nu = 0.2 + 0.5 * rng.random()
    params = lindblad.ModelParams(1.0, mu, nu, sp)
    t = 0.3 + 1.2 * rng.random()
    m = analytic.two_by_two_exponential(params, t)
    upper, diag, lower = analytic.gauss_decompose(m)
    c = analytic.efg(params, t)
    resid = np.max(np.abs(upper @ diag @ lower - m))
    factors = max(abs(upper[0, 1] - c.g_val), abs(diag[1, 1] - c.f_val),
                  abs(lower[1, 0] + c.e_val))
    return float(max(resid, factors)), 1e-10


def _chk_two_by_two(rng):
    sp = fock.FockSpace(4)
    mu = 1.2 + 0.8 * rng.random()
    nu = 0.2 + 0.5 * rng.random()
    params = lindblad.ModelParams(1.0, mu, nu, sp)
    t = 0.3 + 1.2 * rng.random()
    gen = np.array([[-(mu + nu) / 2.0, nu], [-mu, (mu + nu) / 2.0]],
                   dtype=np.complex128)
    delta = analytic.two_by_two_exponential(params, t) - linalg.expm(t * gen)
    return float(np.max(np.abs(delta))), 1e-12


CHECKS = (
    ("kron_mixed_product", _chk_kron_mixed_product),
    ("kron_expm_factorization", _chk_kron_expm_factorization),
    ("kron_adjoint", _chk_kron_adjoint),
    ("vec_roundtrip", _chk_vec_roundtrip),
    ("vec_sandwich", _chk_vec_sandwich),
    ("su11_2x2_commutators", _chk_su11_2x2),
    ("su11_K_commutators", _chk_su11_k),
    ("k0_centrality", _chk_k0_centrality),
    ("bch_displacement_split", _chk_bch_displacement),
    ("coherent_equivalences", _chk_coherent_equivalences),
    ("scalar_disentangle", _chk_scalar_disentangle),
    ("superop_disentangle", _chk_superop_disentangle),
    ("riccati_residual", _chk_riccati),
    ("gauss_roundtrip", _chk_gauss_roundtrip),
    ("two_by_two_exponential", _chk_two_by_two),
)


def cmd_check(seed, list_only, out_path):
    """Run every internal invariant; one pass/fail line each."""
    out, close = _open_out(out_path)
    try:
        if list_only:
            for name, _ in CHECKS:
                out.write(name + "\n")
            return EXIT_OK
        failures = 0
        for name, fn in CHECKS:
            rng = np.random.default_rng(seed)
            measured, budget = fn(rng)
            ok = measured <= budget
            failures += 0 if ok else 1
            status = "pass" if ok else "FAIL"
            out.write(f"{name:<26s} {status}  measured={measured:.3e}  "
                      f"budget={budget:.1e}\n")
        return EXIT_OK if failures == 0 else EXIT_TOLERANCE
    finally:
        if close:
            out.close()


def cmd_classical(omega, gamma, alpha, t_max, steps, out_path):
    """CSV of the classical trajectory and its small-damping approximation."""
    cp = analytic.ClassicalParams(omega, gamma, alpha)
    if steps == 1:
        times = np.array([t_max])
    else:
        times = np.linspace(0.0, t_max, steps)
    lines = ["t,x_exact,x_approx,abs_diff"]
    for t in times:
        xe = analytic.classical_trajectory(cp, float(t))
        xa = analytic.classical_trajectory_approx(cp, float(t))
        lines.append(",".join([_fmt(float(t)), _fmt(xe), _fmt(xa),
                               _fmt(abs(xe - xa))]))
    out, close = _open_out(out_path)
    out.write("\n".join(lines) + "\n")
    if close:
        out.close()
    return EXIT_OK


def _add_scenario_flags(p):
    p.add_argument("--omega", type=float, help="oscillator frequency")
    p.add_argument("--mu", type=float, help="downward rate, mu > nu")
    p.add_argument("--nu", type=float, help="upward rate, nu >= 0")
    p.add_argument("--dim", type=int, help="Fock truncation dimension")
    p.add_argument("--initial",
                   help="vacuum | fock:n | coherent:re,im | squeezed:re,im")
    p.add_argument("--tmax", type=float, help="final time")
    p.add_argument("--steps", type=int, help="number of grid points")
    p.add_argument("--methods", help="comma list from analytic,expm,rk4")
    p.add_argument("--dt", type=float, help="rk4 step (default t/2048)")
    p.add_argument("--config", help="JSON file with scenario fields")
    p.add_argument("--seed", type=int, default=0, help="unused; determinism")
    p.add_argument("--out", default="stdout", help="output path or 'stdout'")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="qdho",
        description="Damped quantum oscillator: analytic solution vs "
                    "brute-force propagation on a truncated Fock space.")
    sub = ap.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="CSV time series of observables")
    _add_scenario_flags(p_sim)

    p_cmp = sub.add_parser("compare", help="JSON distance report")
    _add_scenario_flags(p_cmp)
    p_cmp.add_argument("--tol", type=float, default=1e-6,
                       help="max allowed Frobenius distance")

    p_chk = sub.add_parser("check", help="internal invariant suite")
    p_chk.add_argument("--seed", type=int, default=0)
    p_chk.add_argument("--list", action="store_true",
                       help="print invariant names without running")
    p_chk.add_argument("--out", default="stdout")

    p_cls = sub.add_parser("classical", help="classical reference trajectory")
    p_cls.add_argument("--omega", type=float, default=1.0)
    p_cls.add_argument("--gamma", type=float, default=0.1,
                       help="friction; requires omega > gamma/2")
    p_cls.add_argument("--alpha-re", type=float, default=0.5)
    p_cls.add_argument("--alpha-im", type=float, default=0.0)
    p_cls.add_argument("--tmax", type=float, default=10.0)
    p_cls.add_argument("--steps", type=int, default=101)
    p_cls.add_argument("--out", default="stdout")
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "simulate":
            return cmd_simulate(merge_config(args), args.out)
        if args.command == "compare":
            return cmd_compare(merge_config(args), args.out, args.tol)
        if args.command == "check":
            return cmd_check(args.seed, args.list, args.out)
        return cmd_classical(args.omega, args.gamma,
                             complex(args.alpha_re, args.alpha_im),
                             args.tmax, args.steps, args.out)
    except TruncationError as exc:
        print(f"error: truncation inadequate: {exc}", file=sys.stderr)
        return EXIT_TRUNCATION
    except OverflowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
