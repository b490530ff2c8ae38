"""Scan drivers: single propagations, parameter sweeps and the
diagnostics report.  All outputs are flat files written with fixed
formatting so identical inputs give byte-identical results."""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .analytic import (CoincidentSpec, adiabaticity_window,
                       coincident_populations, landau_zener_conditions,
                       transfer_asymptotics)
from .config import AreaScan, DetuningGrid, SystemConfig, WidthScan
from .model import (FanoParams, commutator_defect, assemble_hamiltonian,
                    eigen_split, mixing_angles, trapping_detunings)
from .propagate import (AutoTrap, final_amplitudes_batch,
                        policy_detunings, propagate)
from .pulses import ConstantPulse, GaussianPulse, PulseTriple, evaluate


def _fmt(x: float) -> str:
    """17 significant digits: enough to round-trip a double exactly."""
    return format(float(x), ".17g")


def _write_rows(path: str, header: str, rows, comment: str | None = None) -> None:
    with open(path, "w", newline="\n") as fh:
        if comment is not None:
            fh.write(f"# {comment}\n")
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(_fmt(x) for x in row) + "\n")


def _chunked(n: int, workers: int, fn) -> np.ndarray:
    """Evaluate fn over index chunks, preserving row order.

    fn maps an index array to a 2-D result block; chunks run on a small
    thread pool when workers > 1.  Per-index results are independent, so
    the output does not depend on the chunking.
    """
    idx = np.arange(n)
    if workers <= 1:
        return fn(idx)
    chunks = [c for c in np.array_split(idx, workers) if len(c)]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        parts = list(ex.map(fn, chunks))
    return np.vstack(parts)


def _trap_detunings_vec(q: FanoParams, g1, g2, g3):
    d1 = 0.5 * q.q13 * (g3 - g1) + 0.5 * (q.q12 - q.q23) * g2
    d2 = 0.5 * q.q23 * (g3 - g2) + 0.5 * (q.q12 - q.q13) * g1
    return d1, d2


def run_propagate(system: SystemConfig, out: str,
                  tol: float | None = None) -> None:
    """Integrate one configuration and write the sampled trajectory."""
    traj = propagate(system.fano, system.pulses, system.policy,
                     init=system.initial_amplitudes(),
                     window=system.window(),
                     tol=tol if tol is not None else system.grid.tolerance,
                     samples=system.grid.samples)
    _write_rows(out, "t,P1,P2,P3,Pi,norm", traj.rows())


def run_scan_area(system: SystemConfig, spec: AreaScan, out: str,
                  workers: int = 1) -> None:
    """Closed-form final populations against total pulse area for
    coincident pulses with one shared Fano parameter."""
    areas = np.linspace(spec.lo, spec.hi, spec.steps)
    g1, g2, g3 = spec.weights

    def block(idx):
        rows = np.empty((len(idx), 5))
        for j, i in enumerate(idx):
            p = coincident_populations(
                CoincidentSpec(gamma1=g1, gamma2=g2, gamma3=g3,
                               q=spec.q, area=float(areas[i])))
            rows[j] = (areas[i], *p)
        return rows

    rows = _chunked(spec.steps, workers, block)
    _write_rows(out, "A,P1,P2,P3,Pi",
                rows,
                comment=f"area scan: A in [{_fmt(spec.lo)}, {_fmt(spec.hi)}], "
                        f"{spec.steps} steps, q = {_fmt(spec.q)}, "
                        f"weights = ({_fmt(g1)}, {_fmt(g2)}, {_fmt(g3)})")


def run_scan_width(system: SystemConfig, spec: WidthScan, out: str,
                   workers: int = 1) -> None:
    """Final populations against the pump/Stokes width T with trapping
    detunings, unit peak rates and a constant control rate.

    Integrates in the scaled time u = t/T, where the equations for
    different T differ only through rates multiplied by T; that lets one
    fixed-step batch cover the whole sweep.
    """
    widths = np.linspace(spec.lo, spec.hi, spec.steps)
    a = spec.tau_over_width
    q = system.fano
    init = system.initial_amplitudes()
    span = a + 6.0
    n_steps = max(4000, int(80 * (2.0 + spec.gamma3) * spec.hi))

    def block(idx):
        x = widths[idx]

        def rates_at(u):
            # pump peaks late, Stokes early
            return (x * math.exp(-(u - a) ** 2),
                    x * math.exp(-(u + a) ** 2),
                    x * spec.gamma3)

        def detunings_at(u, g1, g2, g3):
            return _trap_detunings_vec(q, g1, g2, g3)

        y = final_amplitudes_batch(q, rates_at, detunings_at,
                                   -span, span, n_steps, init=init)
        p = np.abs(y) ** 2
        pi = 1.0 - p.sum(axis=1)
        return np.column_stack([x, p, pi])

    rows = _chunked(spec.steps, workers, block)
    _write_rows(out, "T,P1,P2,P3,Pi",
                rows,
                comment=f"width scan: T in [{_fmt(spec.lo)}, {_fmt(spec.hi)}] "
                        f"(units 1/gamma0), {spec.steps} steps, "
                        f"tau/T = {_fmt(a)}, gamma3 = {_fmt(spec.gamma3)}, "
                        f"trapping detunings")


def run_scan_detuning(system: SystemConfig, spec: DetuningGrid, out: str,
                      workers: int = 1) -> None:
    """Final populations over a static-detuning grid, one pass per
    constant control rate; Stark shifts are zero."""
    q = system.fano
    init = system.initial_amplitudes()
    sums = np.linspace(spec.sum_lo, spec.sum_hi, spec.steps)
    diffs = np.linspace(spec.diff_lo, spec.diff_hi, spec.steps)
    S, D = np.meshgrid(sums, diffs, indexing="ij")
    d1_all = ((S + D) / 2.0).ravel()
    d2_all = ((S - D) / 2.0).ravel()
    n_grid = d1_all.size

    pump = system.pulses.pump
    stokes = system.pulses.stokes
    t0, t1 = system.window()
    dmax = 0.5 * (max(abs(spec.sum_lo), abs(spec.sum_hi))
                  + max(abs(spec.diff_lo), abs(spec.diff_hi)))
    probe_t = np.linspace(t0, t1, 513)
    peak12 = float(np.max(pump.rate(probe_t) + stokes.rate(probe_t)))

    all_rows = []
    for g3 in spec.gamma3:
        scale = peak12 + g3 + dmax
        n_steps = max(3000, int(40 * scale * (t1 - t0)))

        def block(idx, g3=g3, n_steps=n_steps):
            d1 = d1_all[idx]
            d2 = d2_all[idx]

            def rates_at(t):
                return (pump.rate(t), stokes.rate(t), np.asarray(g3))

            def detunings_at(t, g1, g2, g3r):
                return d1, d2

            y = final_amplitudes_batch(q, rates_at, detunings_at,
                                       t0, t1, n_steps, init=init)
            p = np.abs(y) ** 2
            pi = 1.0 - p.sum(axis=1)
            return np.column_stack([np.full(len(idx), g3),
                                    S.ravel()[idx], D.ravel()[idx], p, pi])

        all_rows.append(_chunked(n_grid, workers, block))

    _write_rows(out, "gamma3,delta_sum,delta_diff,P1,P2,P3,Pi",
                np.vstack(all_rows),
                comment=f"detuning grid: delta1+delta2 in "
                        f"[{_fmt(spec.sum_lo)}, {_fmt(spec.sum_hi)}], "
                        f"delta1-delta2 in "
                        f"[{_fmt(spec.diff_lo)}, {_fmt(spec.diff_hi)}], "
                        f"{spec.steps}x{spec.steps} points, gamma3 = "
                        f"({', '.join(_fmt(g) for g in spec.gamma3)}), "
                        f"static detunings, zero Stark shifts")


def _json_num(x):
    if x is None or not math.isfinite(x):
        return None
    return float(x)


def _window_parameters(p: PulseTriple):
    """(tau, T, gamma3) when the pulses are a symmetric delayed Gaussian
    pair plus a constant control; None otherwise."""
    if not (isinstance(p.pump, GaussianPulse)
            and isinstance(p.stokes, GaussianPulse)
            and isinstance(p.control, ConstantPulse)):
        return None
    if p.pump.width != p.stokes.width:
        return None
    tau = 0.5 * abs(p.pump.center - p.stokes.center)
    return tau, p.pump.width, p.control.gamma


def run_report(system: SystemConfig, out: str) -> None:
    """Write a JSON diagnostics summary evaluated at the pulse peak."""
    t0, t1 = system.window()
    ts = np.linspace(t0, t1, 2001)
    totals = (system.pulses.pump.rate(ts) + system.pulses.stokes.rate(ts)
              + system.pulses.control.rate(ts))
    t_peak = float(ts[int(np.argmax(totals))])
    r = evaluate(system.pulses, t_peak)

    trap = trapping_detunings(system.fano, r)
    d = policy_detunings(system.policy, system.fano, r)
    H = assemble_hamiltonian(system.fano, r, d)
    split = eigen_split(system.fano, r)
    angles = mixing_angles(system.fano, r)

    if isinstance(system.policy, AutoTrap):
        policy_doc = {"kind": "autotrap"}
    else:
        policy_doc = {"kind": "static",
                      "delta1": system.policy.delta1,
                      "delta2": system.policy.delta2}

    wp = _window_parameters(system.pulses)
    if wp is None:
        window_doc = None
    else:
        tau, T, g3 = wp
        w = adiabaticity_window(system.fano, g3, tau, T)
        window_doc = {"lower": _json_num(w.lower),
                      "upper": _json_num(w.upper),
                      "value": _json_num(w.value),
                      "inside": w.contains()}

    try:
        lz = landau_zener_conditions(system.fano, system.pulses, (t0, t1))
        lz_doc = {"crossing_time": _json_num(lz.crossing_time),
                  "max_coupling": _json_num(lz.max_coupling),
                  "min_gap": _json_num(lz.min_gap),
                  "lz_coupling_sq": _json_num(lz.lz_coupling_sq),
                  "lz_slope": _json_num(lz.lz_slope),
                  "hab_identically_zero": lz.hab_identically_zero}
    except ValueError:
        lz_doc = None

    doc = {
        "peak_time": t_peak,
        "window": [t0, t1],
        "rates": {"g1": r.g1, "g2": r.g2, "g3": r.g3, "total": r.total()},
        "policy": policy_doc,
        "trapping_detunings": {"delta1": trap.delta1, "delta2": trap.delta2},
        "commutator_defect": commutator_defect(H),
        "eigenvalues": {
            "lam_a": list(split.lam_a),
            "lam_b": list(split.lam_b),
            "lam_h": [[z.real, z.imag] for z in split.lam_h],
        },
        "mixing_angles": {"theta": angles.theta, "phi": angles.phi,
                          "chi": angles.chi,
                          "chi_indeterminate": angles.chi_indeterminate},
        "adiabaticity_window": window_doc,
        "landau_zener": lz_doc,
        "classification": transfer_asymptotics(system.fano).value,
    }
    with open(out, "w", newline="\n") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
