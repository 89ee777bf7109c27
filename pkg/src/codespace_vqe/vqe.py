"""Energy objective, shift-rule gradients and the BFGS driver.

The optimizer runs with the settings used for all reported experiments:
every parameter starts at 0.001, and a run stops after 100 iterations or
once an accepted step is shorter than 1e-6.
"""

from __future__ import annotations

import logging
import os
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import line_search

from .circuit import ParamCircuit, combined_codes, compile_and_count, single_code, vha
from .clifford import diagonalize_group
from .grouping import order_groups, partition
from .oracle import ground_energy, hf_energy
from .pauli import Hamiltonian, PauliSum, load_hamiltonian
from .simulator import expectation, fastpath_expectation, run

__all__ = [
    "ANSATZ_KINDS",
    "VqeConfig",
    "VqeResult",
    "objective",
    "gradient",
    "minimize",
    "minimize_function",
    "run_experiment",
]

log = logging.getLogger(__name__)

ANSATZ_KINDS = ("single_code", "combined_codes", "vha", "vha_grouped")
SHIFT = np.pi / 4
GRAD_TOL = 1e-8


def _threads() -> int:
    return max(1, int(os.environ.get("CODESPACE_VQE_THREADS", "1")))


@dataclass
class VqeConfig:
    ansatz: str = "combined_codes"
    layers: int = 1
    init_value: float = 0.001
    max_iterations: int = 100
    step_tolerance: float = 1e-6
    grad_tolerance: float = GRAD_TOL
    warm_start: np.ndarray | None = None
    group_index: int | None = None  # single_code only; None tries every group

    def __post_init__(self):
        if self.ansatz not in ANSATZ_KINDS:
            raise ValueError(f"unknown ansatz {self.ansatz!r}; choose from {ANSATZ_KINDS}")
        if self.layers < 1:
            raise ValueError("layers must be >= 1")
        if self.step_tolerance <= 0 or self.grad_tolerance <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_iterations < 0:
            raise ValueError("max_iterations must be >= 0")


@dataclass
class VqeResult:
    energy: float
    params: np.ndarray
    trace: list[dict] = field(default_factory=list)
    nfev: int = 0
    ngev: int = 0
    reason: str = ""

    @property
    def iterations(self) -> int:
        return self.trace[-1]["iteration"] if self.trace else 0

    @property
    def success(self) -> bool:
        return self.reason != "line_search_failed"

    def to_dict(self) -> dict:
        return {
            "energy": self.energy,
            "params": [float(v) for v in self.params],
            "iterations": self.iterations,
            "nfev": self.nfev,
            "ngev": self.ngev,
            "reason": self.reason,
            "trace": self.trace,
        }


def objective(c: ParamCircuit, h: PauliSum, params) -> float:
    """``<psi(params)|H|psi(params)>``; single-code circuits skip the state vector."""
    params = np.asarray(params, dtype=float)
    if c.kind == "single_code":
        if len(params) != c.n_params:
            raise ValueError(f"expected {c.n_params} parameters, got {len(params)}")
        return fastpath_expectation(c.meta["clifford"], params, c.meta["n_electrons"], h)
    return expectation(run(c, params), h)


def gradient(c: ParamCircuit, h: PauliSum, params, threads: int | None = None) -> np.ndarray:
    """Shift-rule gradient ``E(theta + pi/4 e_k) - E(theta - pi/4 e_k)``.

    Exact for gates ``exp(-i theta G)`` with ``G**2 = I``. A slot read by
    several gates gets one shifted pair per gate occurrence.
    """
    params = np.asarray(params, dtype=float)
    readers = c.slot_gates()

    def component(k: int) -> float:
        gates = readers.get(k, [])
        if len(gates) == 1:
            e = np.zeros_like(params)
            e[k] = SHIFT
            return objective(c, h, params + e) - objective(c, h, params - e)
        total = 0.0
        for gi in gates:
            total += expectation(run(c, params, shift=(gi, SHIFT)), h)
            total -= expectation(run(c, params, shift=(gi, -SHIFT)), h)
        return total

    threads = threads or _threads()
    if threads > 1 and len(params) > 1:
        with ThreadPoolExecutor(threads) as pool:
            return np.array(list(pool.map(component, range(len(params)))))
    return np.array([component(k) for k in range(len(params))])


def _backtrack(f, x, p, fx, slope, c1=1e-4, shrink=0.5, tries=40):
    alpha = 1.0
    for _ in range(tries):
        fn = f(x + alpha * p)
        if fn <= fx + c1 * alpha * slope:
            return alpha, fn
        alpha *= shrink
    return None, None


def minimize_function(fun, grad, x0, max_iterations=100, step_tolerance=1e-6, grad_tolerance=GRAD_TOL) -> VqeResult:
    """BFGS on the inverse Hessian with a strong-Wolfe line search (c1=1e-4, c2=0.9).

    Stops after ``max_iterations`` accepted steps, when an accepted step is
    shorter than ``step_tolerance``, or when the gradient norm drops below
    ``grad_tolerance``. Accepted energies never increase.
    """
    counts = {"f": 0, "g": 0}
    f_cache: dict[bytes, float] = {}
    g_cache: dict[bytes, np.ndarray] = {}

    def f(x):
        key = x.tobytes()
        if key not in f_cache:
            counts["f"] += 1
            f_cache[key] = float(fun(x))
        return f_cache[key]

    def g(x):
        key = x.tobytes()
        if key not in g_cache:
            counts["g"] += 1
            g_cache[key] = np.asarray(grad(x), dtype=float)
        return g_cache[key]

    x = np.array(x0, dtype=float)
    fx, gx = f(x), g(x)
    n = len(x)
    hinv = np.eye(n)
    prev_f = None
    trace = [{"iteration": 0, "energy": fx, "grad_norm": float(np.linalg.norm(gx)), "step_norm": 0.0}]
    reason = "max_iterations"
    for it in range(1, max_iterations + 1):
        if np.linalg.norm(gx) < grad_tolerance:
            reason = "gradient"
            break
        p = -hinv @ gx
        if p @ gx >= 0:
            hinv = np.eye(n)
            p = -gx
        with warnings.catch_warnings():
            warnings.filterwarnings("ignore", message="(The line search algorithm|Rounding errors)")
            alpha, _, _, f_new, _, _ = line_search(f, g, x, p, gfk=gx, old_fval=fx, old_old_fval=prev_f, c1=1e-4, c2=0.9)
        if alpha is None or f_new is None or f_new > fx:
            alpha, f_new = _backtrack(f, x, p, fx, float(p @ gx))
            if alpha is None:
                reason = "line_search_failed"
                break
        s = alpha * p
        x_new = x + s
        g_new = g(x_new)
        y = g_new - gx
        sy = float(s @ y)
        if sy > 1e-12:
            if it == 1:
                hinv = np.eye(n) * (sy / float(y @ y))
            rho = 1.0 / sy
            a = np.eye(n) - rho * np.outer(s, y)
            hinv = a @ hinv @ a.T + rho * np.outer(s, s)
        prev_f, x, fx, gx = fx, x_new, f(x_new), g_new
        step = float(np.linalg.norm(s))
        trace.append({"iteration": it, "energy": fx, "grad_norm": float(np.linalg.norm(gx)), "step_norm": step})
        if step < step_tolerance:
            reason = "step"
            break
    else:
        if np.linalg.norm(gx) < grad_tolerance:
            reason = "gradient"
    return VqeResult(fx, x, trace, counts["f"], counts["g"], reason)


def minimize(cfg: VqeConfig, c: ParamCircuit, h: PauliSum) -> VqeResult:
    if cfg.warm_start is not None:
        x0 = np.asarray(cfg.warm_start, dtype=float)
        if len(x0) != c.n_params:
            raise ValueError(f"warm start has {len(x0)} values for {c.n_params} slots")
    else:
        x0 = np.full(c.n_params, cfg.init_value)
    res = minimize_function(
        lambda x: objective(c, h, x),
        lambda x: gradient(c, h, x),
        x0,
        cfg.max_iterations,
        cfg.step_tolerance,
        cfg.grad_tolerance,
    )
    if res.reason == "line_search_failed":
        log.warning("line search failed after %d iterations; keeping best point", res.iterations)
    return res


def _electrons(ham: Hamiltonian, n_electrons: int | None) -> int:
    n_e = n_electrons if n_electrons is not None else ham.electrons
    if n_e is None:
        raise ValueError("electron count missing: add an 'electrons:' header or pass it explicitly")
    return n_e


def run_experiment(source, cfg: VqeConfig | None = None, n_electrons: int | None = None, exact: bool = True) -> dict:
    """Full pipeline for one Hamiltonian: group, diagonalize, build, optimize.

    ``source`` is a path or a parsed :class:`Hamiltonian`. Combined-codes
    runs with several layers are grown one layer at a time, each warm-started
    from the previous optimum with the new slots at zero.
    """
    cfg = cfg or VqeConfig()
    ham = source if isinstance(source, Hamiltonian) else load_hamiltonian(source)
    h = ham.operator
    n_e = _electrons(ham, n_electrons)
    t0 = time.perf_counter()

    parts = order_groups(partition(h))
    diags = [diagonalize_group(g) for g in parts]
    e_hf = hf_energy(h, n_e)
    e_exact = ground_energy(h)[0] if exact else None

    extra: dict = {}
    if cfg.ansatz == "single_code":
        indices = range(len(parts)) if cfg.group_index is None else [cfg.group_index]
        per_group = []
        for i in indices:
            g, u = parts[i], diags[i]
            c = single_code(u, n_e)
            res = minimize(VqeConfig("single_code", 1, cfg.init_value, cfg.max_iterations, cfg.step_tolerance, cfg.grad_tolerance), c, g.terms)
            full = objective(c, h, res.params)
            per_group.append({"group": g.index, "group_energy": res.energy, "full_energy": full, "result": res, "circuit": c})
        best = min(per_group, key=lambda r: r["full_energy"])
        circuit, result = best["circuit"], best["result"]
        energy = best["full_energy"]
        extra["single_codes"] = [
            {"group": r["group"], "group_energy": r["group_energy"], "full_energy": r["full_energy"], "iterations": r["result"].iterations}
            for r in per_group
        ]
        extra["best_group"] = best["group"]
    elif cfg.ansatz == "combined_codes":
        warm = cfg.warm_start
        per_layer = []
        for layers in range(1, cfg.layers + 1):
            circuit = combined_codes(parts, diags, n_e, layers)
            if warm is not None and len(warm) < circuit.n_params:
                warm = np.concatenate([warm, np.zeros(circuit.n_params - len(warm))])
            layer_cfg = VqeConfig("combined_codes", layers, cfg.init_value, cfg.max_iterations, cfg.step_tolerance, cfg.grad_tolerance, warm)
            result = minimize(layer_cfg, circuit, h)
            per_layer.append({"layers": layers, "energy": result.energy, "iterations": result.iterations})
            warm = result.params
        energy = result.energy
        extra["per_layer"] = per_layer
        extra["param_convention"] = circuit.meta["param_convention"]
        extra["param_note"] = circuit.meta["note"]
    else:
        grouped = cfg.ansatz == "vha_grouped"
        circuit = vha(h, n_e, grouped, diags if grouped else None, parts if grouped else None, cfg.layers)
        result = minimize(cfg, circuit, h)
        energy = result.energy

    counts = compile_and_count(circuit)
    error = None if e_exact is None else energy - e_exact
    return {
        "molecule": ham.meta.get("molecule", ham.name or ""),
        "geometry": ham.meta.get("geometry", ham.name or ""),
        "ansatz": cfg.ansatz,
        "layers": cfg.layers,
        "n_qubits": h.n_qubits,
        "n_electrons": n_e,
        "n_groups": len(parts),
        "params": circuit.n_params,
        "two_qubit_gates": counts.two_qubit,
        "single_qubit_gates": counts.single_qubit,
        "E_HF": e_hf,
        "E_exact": e_exact,
        "E_opt": energy,
        "error_Ha": error,
        "iterations": result.iterations,
        "fevals": result.nfev,
        "gevals": result.ngev,
        "converged_reason": result.reason,
        "result": result,
        "seconds": time.perf_counter() - t0,
        **extra,
    }
