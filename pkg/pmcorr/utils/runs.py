"""Runners behind the `evolve`, `asymptotic` and `validate` subcommands.

Each runner returns a `pandas.DataFrame` with one row per time point, sweep point
or check. Rows are computed with a `multiprocessing.Pool` when more than one CPU
is requested and always come back in input order.
"""

from dataclasses import replace
from multiprocessing import Pool
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
import tqdm
from logzero import logger

from ..core import correlations, oracle
from ..core.correlations import OptimizerConfig
from ..core.dissipator import BathParams
from ..core.model import DensityMatrix, SystemParams
from ..core.propagator import Propagator
from . import errors
from .scenario import Scenario, SweepSpec

EVOLVE_COLUMNS = [
    "t",
    "concurrence",
    "discord_A",
    "discord_B",
    "mutual_info",
    "purity",
    "min_eigenvalue",
    "trace_error",
    "flag",
]
ASYMPTOTIC_COLUMNS = [
    "concurrence",
    "discord_A",
    "discord_B",
    "discord_gap",
    "discord_mean",
    "flag",
]
VALIDATE_COLUMNS = ["check", "value", "tolerance", "status", "detail"]

POPULATION_TOL = 1e-6
STATE_TOL = 1e-6
DISCORD_GRID_TOL = 1e-5
# rank-deficient states (the Bell state) lose about 1e-8 in the square roots
CONCURRENCE_PATH_TOL = 1e-7


def parallel_map(
    func: Callable[[Tuple[Any, int]], Dict[str, Any]],
    items: Sequence[Any],
    ncpus: int,
    desc: str,
) -> List[Dict[str, Any]]:
    """Maps `func` over `(item, loglevel)` pairs, preserving order."""

    jobs = [(item, logger.level) for item in items]
    if ncpus <= 1 or len(jobs) <= 1:
        return [func(job) for job in tqdm.tqdm(jobs, desc=desc)]
    with Pool(min(ncpus, len(jobs))) as pool:
        return list(tqdm.tqdm(pool.imap(func, jobs), total=len(jobs), desc=desc))


def _measures(rho: DensityMatrix, cfg: OptimizerConfig) -> Dict[str, float]:
    found = rho.violations()
    row: Dict[str, Any] = {
        "purity": rho.purity,
        "min_eigenvalue": rho.min_eigenvalue,
        "trace_error": rho.trace_error,
        "flag": ";".join(found),
    }
    try:
        measured = correlations.report(rho, cfg)
    except errors.NotDensityMatrix as err:
        logger.warning("Skipping correlation measures for an invalid state: %s", err)
        row.update(concurrence=np.nan, discord_A=np.nan, discord_B=np.nan, mutual_info=np.nan)
        return row

    row.update(
        concurrence=measured.concurrence,
        discord_A=measured.discord_A,
        discord_B=measured.discord_B,
        mutual_info=measured.mutual_info,
    )
    return row


def _evolve_row(job: Tuple[Tuple[float, DensityMatrix, OptimizerConfig], int]) -> Dict[str, Any]:
    (t, rho, cfg), loglevel = job
    # must explicitly set the log level since this function runs in a `multiprocessing.Pool`
    # worker, which does not inherit the level of the main process.
    logger.setLevel(loglevel)
    row = _measures(rho, cfg)
    row["t"] = t
    if row["flag"]:
        logger.warning("State at t = %g violates %s.", t, row["flag"])
    return row


def run_evolve(scenario: Scenario, ncpus: int = 1) -> pd.DataFrame:
    """Correlation measures along the scenario's time grid.

    Raises:
        ConfigError: if the scenario has no time grid (`t_stop`).
    """

    if scenario.t_grid is None:
        errors.raise_error(
            f"Scenario {scenario.name} has no time grid; set `t_stop` (and `t_points`).",
            suggest_report=False,
            error=errors.ConfigError,
        )

    propagator = Propagator(scenario.system, scenario.baths, scenario.degeneracy_tol)
    logger.info(
        "Evolving %s over %d time points up to t = %g.",
        scenario.initial_state,
        len(scenario.t_grid),
        scenario.t_grid[-1],
    )
    states = propagator.trajectory(scenario.rho0, scenario.t_grid)
    jobs = [(float(t), rho, scenario.optimizer) for t, rho in zip(scenario.t_grid, states)]
    rows = parallel_map(_evolve_row, jobs, ncpus, "Evolving")
    return pd.DataFrame(rows, columns=EVOLVE_COLUMNS)


def asymptotic_cell(
    system: SystemParams,
    baths: BathParams,
    cfg: OptimizerConfig,
    tol: Optional[float] = None,
) -> Dict[str, Any]:
    """Correlations of the steady state for one parameter point.

    `tol` is the degeneracy tolerance on |ξ - η|, as in `validate_params`.
    """

    propagator = Propagator(system, baths, tol)
    row = _measures(propagator.asymptotic(), cfg)
    row["discord_gap"] = row["discord_B"] - row["discord_A"]
    row["discord_mean"] = 0.5 * (row["discord_A"] + row["discord_B"])
    return row


def _asymptotic_row(
    job: Tuple[Tuple[str, float, SystemParams, BathParams, OptimizerConfig, Optional[float]], int]
) -> Dict[str, Any]:
    (axis, value, system, baths, cfg, tol), loglevel = job
    logger.setLevel(loglevel)
    try:
        row = asymptotic_cell(system, baths, cfg, tol)
    except errors.PhysicsDomainError as err:
        logger.warning("Sweep point %s = %g skipped: %s", axis, value, err)
        row = {
            "concurrence": np.nan,
            "discord_A": np.nan,
            "discord_B": np.nan,
            "discord_gap": np.nan,
            "discord_mean": np.nan,
            "flag": type(err).__name__,
        }
    row[axis] = value
    return row


def run_asymptotic(scenario: Scenario, sweep: SweepSpec, ncpus: int = 1) -> pd.DataFrame:
    """Steady-state concurrence and discords along one parameter axis."""

    values = sweep.values
    logger.info(
        "Sweeping %s over %d points from %g to %g.",
        sweep.axis,
        len(values),
        sweep.start,
        sweep.stop,
    )
    jobs = []
    for value in values:
        system, baths = scenario.at(sweep.axis, float(value))
        jobs.append(
            (sweep.axis, float(value), system, baths, scenario.optimizer, scenario.degeneracy_tol)
        )
    rows = parallel_map(_asymptotic_row, jobs, ncpus, "Sweeping")
    columns = [sweep.axis] + ASYMPTOTIC_COLUMNS
    return pd.DataFrame(rows, columns=columns)


def _check(
    check: str, value: float, tolerance: float, status: str, detail: str = ""
) -> Dict[str, Any]:
    logger.info("%-28s %-9s %.3e (tolerance %.1e) %s", check, status, value, tolerance, detail)
    return dict(check=check, value=value, tolerance=tolerance, status=status, detail=detail)


def _verdict(value: float, tolerance: float) -> str:
    return "pass" if value <= tolerance else "fail"


def _grid_row(
    job: Tuple[Tuple[str, DensityMatrix, str, OptimizerConfig, Tuple[int, int]], int]
) -> Dict[str, Any]:
    (label, rho, side, cfg, grid), loglevel = job
    logger.setLevel(loglevel)
    optimized = correlations.discord(rho, side, cfg)
    brute = oracle.discord_grid_oracle(rho, side, *grid)
    deviation = abs(optimized - brute)
    return _check(
        f"discord_{side} optimizer vs grid ({label})",
        deviation,
        DISCORD_GRID_TOL,
        _verdict(deviation, DISCORD_GRID_TOL),
        f"optimizer {optimized:.9f}, grid {brute:.9f}",
    )


def run_validate(
    scenario: Scenario,
    cfg: oracle.OracleConfig = oracle.OracleConfig(),
    ncpus: int = 1,
    grid: Tuple[int, int] = (512, 1024),
) -> pd.DataFrame:
    """Cross-checks every computation path against its independent oracle.

    Populations: S diag(ξ) S⁻¹ against the integrated master equation. Printed
    closed forms: each of the sixteen elements against S diag(ξ) S⁻¹, with single
    sign repairs searched for deviating ones. States: evolve against the
    integrated master equation (asserted in hamiltonian_inside mode, reported in
    hamiltonian_outside mode). Discord: optimizer against the brute-force grid.
    Concurrence: the ρρ̃ path against the Hermitian R path.
    """

    t_grid = scenario.t_grid
    if t_grid is None:
        t_grid = np.linspace(0.0, cfg.t_max, 101)
    if cfg.degeneracy_tol is None:
        cfg = replace(cfg, degeneracy_tol=scenario.degeneracy_tol)

    propagator = Propagator(scenario.system, scenario.baths, scenario.degeneracy_tol)
    rates = propagator.rates
    logger.info(
        "Rates: X1+ = %.6g, X1- = %.6g, Y2+ = %.6g, Y2- = %.6g.",
        rates.X1p,
        rates.X1m,
        rates.Y2p,
        rates.Y2m,
    )

    rows = []
    report = oracle.compare_propagators(
        rates, scenario.baths.gamma0, t_grid, cfg, scenario.system, scenario.baths
    )
    deviation = report.deviations["s_path_vs_oracle"]
    rows.append(
        _check(
            "populations S-path vs oracle",
            deviation,
            POPULATION_TOL,
            _verdict(deviation, POPULATION_TOL),
        )
    )
    rows.append(
        _check(
            "appendix vs S-path (max)",
            report.deviations["appendix_vs_s_path"],
            oracle.APPENDIX_FLAG_TOL,
            "reported",
        )
    )
    for flag in report.flags:
        if flag.repair is None:
            status, detail = "fail", "no single sign change repairs this element"
        else:
            status = "repaired"
            detail = f"{flag.repair} (residual {flag.repaired_deviation:.1e})"
        rows.append(
            _check(
                f"appendix p{flag.i}{flag.j}",
                flag.deviation,
                oracle.APPENDIX_FLAG_TOL,
                status,
                detail,
            )
        )
        if flag.repair is not None:
            logger.warning(
                "Printed p%d%d is off by %.3e; %s.", flag.i, flag.j, flag.deviation, flag.repair
            )

    analytic = propagator.trajectory(scenario.rho0, t_grid)
    integrated = oracle.integrate_master_equation(
        scenario.rho0, scenario.system, scenario.baths, cfg, t_grid
    )
    state_deviation = max(
        float(np.max(np.abs(a.elements - b.elements))) for a, b in zip(analytic, integrated)
    )
    state_status = (
        _verdict(state_deviation, STATE_TOL) if cfg.mode == "hamiltonian_inside" else "reported"
    )
    rows.append(
        _check(f"states evolve vs oracle ({cfg.mode})", state_deviation, STATE_TOL, state_status)
    )

    checked = [
        ("initial", scenario.rho0),
        ("final", analytic[-1]),
        ("asymptotic", propagator.asymptotic()),
    ]
    for label, rho in checked:
        two_paths = abs(correlations.concurrence(rho) - correlations.concurrence_hermitian(rho))
        rows.append(
            _check(
                f"concurrence two paths ({label})",
                two_paths,
                CONCURRENCE_PATH_TOL,
                _verdict(two_paths, CONCURRENCE_PATH_TOL),
            )
        )

    jobs = [
        (label, rho, side, scenario.optimizer, grid)
        for label, rho in checked
        for side in correlations.SIDES
    ]
    rows.extend(parallel_map(_grid_row, jobs, ncpus, "Discord grid oracle"))
    return pd.DataFrame(rows, columns=VALIDATE_COLUMNS)


def failed_checks(result: pd.DataFrame) -> Iterable[str]:
    return list(result.loc[result["status"] == "fail", "check"])
