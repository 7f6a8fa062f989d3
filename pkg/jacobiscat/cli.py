"""Command-line front end.

Each command loads an instance, runs one pipeline over a grid of points
and emits one or more :class:`~jacobiscat.output.Table` objects as CSV or
JSON. ``report`` runs every pipeline and keeps their summary tables.
"""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Union

import numpy as np

from jacobiscat.coefficients import (
    CoefficientData, exponential_moment_sum, exponential_radius, moment_sum, trace_norm_budget,
)
from jacobiscat.exc import CoefficientError, JacobiscatError
from jacobiscat.generate import random_instance
from jacobiscat.jost import Species, build_series_data, default_window, jost_recursion, jost_series
from jacobiscat.output import Table, create_output
from jacobiscat.scattering import (
    alpha_inverse_extension, circle_limit, scattering_extension, scattering_matrix,
)
from jacobiscat.spectrum import (
    bs_zero_scan, compare_reports, eigenvalue_bounds, truncation_eigen, wronskian_scan,
)
from jacobiscat.tolerances import DEFAULT_TOLERANCES, Tolerances
from jacobiscat.utils import opnorm
from jacobiscat.wronskian import (
    Basis, adjoint_conjugate_solution, alpha_beta, fundamental_matrix, jost_identities, wronskian_constant,
    z_operator,
)

__all__ = [
    'RunConfig',
    'command',
    'z_grid',
    'execute',
    'run',
    'main',
]

LOGGER = logging.getLogger(__name__)

COMMANDS = ('validate', 'jost', 'wronskian', 'scatter', 'spectrum', 'bound', 'report', 'gen')


@dataclass
class RunConfig:
    command: str
    instance_path: Optional[str] = None
    grid: int = 64
    radius: Union[float, str] = 'circle'
    output_path: Optional[str] = None
    format: str = 'csv'
    seed: int = 0
    epsilon: Optional[float] = None
    bound_radius: float = 0.9
    count_radius: Optional[float] = None
    half_width: int = 80
    scan_grid: int = 2000
    refine_tol: Optional[float] = None
    dim: int = 1
    width: int = 3
    bound: float = 1.0
    verbose: bool = False
    tolerances: Tolerances = field(default_factory=lambda: DEFAULT_TOLERANCES)

    @property
    def on_circle(self) -> bool:
        return self.radius == 'circle'

    def validate(self) -> None:
        """:raise ValueError: if the settings are inconsistent"""
        if self.command not in COMMANDS:
            raise ValueError(f'Unknown command {self.command!r}')
        if self.grid < 1:
            raise ValueError(f'The grid needs at least one point, got {self.grid}')
        if self.command != 'gen' and not self.instance_path:
            raise ValueError(f'Command {self.command!r} needs an instance file')
        if not self.on_circle:
            radius = float(self.radius)
            limit = exponential_radius(self.epsilon) if self.epsilon is not None else 1.0
            if not 0 < radius < limit or (self.epsilon is None and radius >= 1):
                raise ValueError(f'The radius must lie in (0, {limit:g}), got {radius}')


CommandFn = Callable[[RunConfig, CoefficientData], List[Table]]

_commands: Dict[str, CommandFn] = {}


def command(name: str):
    """A decorator registering a pipeline under a command name."""

    def decorator(f: CommandFn):
        _commands[name] = f
        return f

    return decorator


def z_grid(config: RunConfig) -> np.ndarray:
    """``count`` points ``r·e^{iθ_k}``, ``θ_k = 2π(k + ½)/count``; on the
    unit circle the points ``±1`` are never sampled."""
    theta = 2 * np.pi * (np.arange(config.grid) + 0.5) / config.grid
    radius = 1.0 if config.on_circle else float(config.radius)
    zs = radius * np.exp(1j * theta)
    if config.on_circle:
        zs = zs[(np.abs(zs - 1) > 1e-6) & (np.abs(zs + 1) > 1e-6)]
    return zs


@command('validate')
def validate(config: RunConfig, c: CoefficientData) -> List[Table]:
    moments = Table('moments', ['k', 'moment_sum'])
    for k in range(4):
        moments.add(k, moment_sum(c, k))

    budgets = Table('budgets', ['name', 'value'])
    budgets.add('dim', c.dim)
    budgets.add('n_min', c.n_min if c.support else None)
    budgets.add('n_max', c.n_max if c.support else None)
    budgets.add('trace_norm_budget', trace_norm_budget(c))
    if config.epsilon is not None:
        budgets.add('epsilon', config.epsilon)
        budgets.add('exponential_moment_sum', exponential_moment_sum(c, config.epsilon))
        budgets.add('exponential_radius', exponential_radius(config.epsilon))
    return [moments, budgets]


@command('jost')
def jost(config: RunConfig, c: CoefficientData) -> List[Table]:
    window = default_window(c)
    series = build_series_data(c, window, tol=config.tolerances)
    values = Table('jost', ['z', 'species', 'n', 'row', 'col', 'value'])
    summary = Table('jost_summary', ['z', 'species', 'series_difference'])
    for z in z_grid(config):
        for species in Species:
            u = jost_recursion(c, species, z, window)
            s = jost_series(c, series, species, z, window)
            summary.add(z, species.value, float(np.max(opnorm(u.blocks - s.blocks))) / u.max_norm())
            for n in u.indices:
                for (i, j), x in np.ndenumerate(u[n]):
                    values.add(z, species.value, n, i, j, x)
    return [values, summary]


@command('wronskian')
def wronskian(config: RunConfig, c: CoefficientData) -> List[Table]:
    window = default_window(c)
    table = Table('wronskian', ['z', 'check', 'residual'])
    for z in z_grid(config):
        for name, residual in jost_identities(c, z, window, tol=config.tolerances).items():
            table.add(z, name, residual)

        left = adjoint_conjugate_solution(c, Species.PLUS, z, window)
        w = wronskian_constant(c, left, jost_recursion(c, Species.MINUS, z, window), tol=config.tolerances)
        table.add(z, 'constancy', w.deviation / max(1.0, opnorm(w.value)))
        table.add(z, 'expansion', alpha_beta(c, z, window, tol=config.tolerances).residual)

        j = (window[0] + window[1]) // 2
        z_j = z_operator(c, z, j, Basis.PLUS_PAIR, window, tol=config.tolerances)
        y_j = fundamental_matrix(c, z, j, Basis.PLUS_PAIR, window)
        table.add(z, 'z_operator', opnorm(z_j @ y_j - np.eye(2 * c.dim)))
    return [table]


def _entries(table: Table, key, name: str, block: np.ndarray) -> None:
    for (i, j), x in np.ndenumerate(block):
        table.add(key, name, i, j, x)


@command('scatter')
def scatter(config: RunConfig, c: CoefficientData) -> List[Table]:
    if not config.on_circle:
        raise ValueError('Scattering data is defined on the unit circle; use --radius circle')
    tol = config.tolerances
    entries = Table('scatter', ['z', 'name', 'row', 'col', 'value'])
    residuals = Table('scatter_residuals', [
        'z', 'transfer_inverse', 'transfer_relation', 'scattering_relation',
        'unitarity_plus', 'unitarity_minus', 'alpha_plus_inverse_norm', 'alpha_minus_inverse_norm',
    ])
    for z in z_grid(config):
        data = scattering_matrix(c, z, tol=tol)
        cc = data.coefficients
        for name, block in (
                ('alpha_plus', cc.alpha_plus), ('beta_plus', cc.beta_plus),
                ('alpha_minus', cc.alpha_minus), ('beta_minus', cc.beta_minus),
                ('M', data.transfer), ('S', data.scattering),
        ):
            _entries(entries, z, name, block)
        residuals.add(z, *(data.residuals[column] for column in residuals.columns[1:]))

    extension = Table('extension', ['z0', 'name', 'row', 'col', 'value'])
    summary = Table('extension_summary', ['z0', 'species', 'kernel_rank', 'delta_deviation', 'circle_limit_difference'])
    for z0 in (1, -1):
        s_ext = scattering_extension(c, z0, tol=tol)
        limit = circle_limit(lambda z: scattering_matrix(c, z, tol=tol).scattering, z0)
        difference = opnorm(s_ext - limit)
        for species in Species:
            data = alpha_inverse_extension(c, z0, species, tol=tol)
            _entries(extension, z0, f'alpha_{species.value}_inverse', data.alpha_inverse)
            summary.add(z0, species.value, data.kernel_rank, data.delta_deviation, difference)
        _entries(extension, z0, 'S', s_ext)
    return [entries, residuals, extension, summary]


def _reports(config: RunConfig, c: CoefficientData):
    tol = config.tolerances
    return (
        wronskian_scan(c, config.scan_grid, config.refine_tol, tol=tol),
        truncation_eigen(c, config.half_width, tol=tol),
        bs_zero_scan(c, config.scan_grid, config.refine_tol, tol=tol),
    )


@command('spectrum')
def spectrum(config: RunConfig, c: CoefficientData) -> List[Table]:
    reports = _reports(config, c)
    eigenvalues = Table('eigenvalues', ['method', 'z', 'lam', 'multiplicity', 'residual'])
    for report in reports:
        for item in report:
            eigenvalues.add(report.method.value, item.z, item.lam, item.multiplicity, item.residual)

    comparison = compare_reports(*reports)
    methods = [method.value for method in comparison.methods]
    agreement = Table('agreement', ['lam', *methods, 'diff'])
    for row in comparison.rows:
        agreement.add(row['lam'], *(row[m] for m in methods), row['diff'])
    counts = Table('agreement_summary', ['method', 'count', 'agree'])
    for method, count in comparison.counts.items():
        counts.add(method, count, comparison.agree)
    return [eigenvalues, agreement, counts]


@command('bound')
def bound(config: RunConfig, c: CoefficientData) -> List[Table]:
    report = wronskian_scan(c, config.scan_grid, config.refine_tol, tol=config.tolerances)
    bounds = eigenvalue_bounds(c, config.bound_radius, report.within(config.bound_radius), config.count_radius)
    table = Table('bound', [
        'radius', 'count_radius', 'product_lhs', 'product_rhs', 'count_lhs', 'count_rhs', 'holds',
    ])
    table.add(bounds.radius, bounds.count_radius, bounds.product_lhs, bounds.product_rhs,
              bounds.count_lhs, bounds.count_rhs, bounds.holds)
    return [table]


_SUMMARY_TABLES = {
    'validate': None,
    'jost': ('jost_summary',),
    'wronskian': ('wronskian',),
    'scatter': ('scatter_residuals', 'extension_summary'),
    'spectrum': ('eigenvalues', 'agreement', 'agreement_summary'),
    'bound': ('bound',),
}


@command('report')
def report(config: RunConfig, c: CoefficientData) -> List[Table]:
    tables = []
    for name, keep in _SUMMARY_TABLES.items():
        if name == 'scatter' and not config.on_circle:
            continue
        for table in _commands[name](config, c):
            if keep is None or table.name in keep:
                tables.append(table)
    return tables


def execute(config: RunConfig) -> List[Table]:
    """Run the configured pipeline and return its tables."""
    config.validate()
    c = CoefficientData.loadf(config.instance_path, tol=config.tolerances)
    LOGGER.debug('Running %s on %r', config.command, c)
    return _commands[config.command](config, c)


def _write(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, 'w', newline='') as f:
            f.write(text)


def run(config: RunConfig) -> int:
    """Run a command, write its output and return the exit status:
    ``1`` for invalid instances or settings, ``2`` when a numerical
    hypothesis fails, ``0`` otherwise."""
    try:
        if config.command == 'gen':
            config.validate()
            c = random_instance(config.dim, config.width, config.bound, config.seed, tol=config.tolerances)
            _write(c.dumps() + '\n', config.output_path)
        else:
            _write(create_output(execute(config), config.format), config.output_path)
    except (CoefficientError, OSError, ValueError) as e:
        LOGGER.error('%s', e)
        return 1
    except JacobiscatError as e:
        LOGGER.error('%s: %s', type(e).__name__, e)
        return 2
    return 0


def _radius(value: str) -> Union[float, str]:
    if value == 'circle':
        return value
    try:
        return float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f'expected a number or "circle", got {value!r}') from None


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog='jacobiscat',
        description='Scattering data and discrete spectrum of block Jacobi operators.',
    )
    p.add_argument('--command', required=True, choices=COMMANDS, help='Pipeline to run.')
    p.add_argument('--instance', dest='instance_path', help='Instance JSON file.')
    p.add_argument('--grid', type=int, default=RunConfig.grid, help=f'Number of z points (default: {RunConfig.grid}).')
    p.add_argument('--radius', type=_radius, default=RunConfig.radius,
                   help='Radius of the z grid, or "circle" for the unit circle (default).')
    p.add_argument('--format', choices=('csv', 'json'), default=RunConfig.format, help='Output format.')
    p.add_argument('--out', dest='output_path', help='Output file (default: stdout).')
    p.add_argument('--seed', type=int, default=RunConfig.seed, help='Seed for gen.')
    p.add_argument('--epsilon', type=float, help='Exponential moment parameter.')
    p.add_argument('--bound-radius', type=float, default=RunConfig.bound_radius, dest='bound_radius',
                   help=f'Radius R of the eigenvalue bounds (default: {RunConfig.bound_radius}).')
    p.add_argument('--count-radius', type=float, dest='count_radius',
                   help='Radius r < R of the eigenvalue count bound (default: R/2).')
    p.add_argument('--half-width', type=int, default=RunConfig.half_width, dest='half_width',
                   help=f'Truncation half width M (default: {RunConfig.half_width}).')
    p.add_argument('--scan-grid', type=int, default=RunConfig.scan_grid, dest='scan_grid',
                   help=f'Points per real scan interval (default: {RunConfig.scan_grid}).')
    p.add_argument('--inv-tol', type=float, dest='inv_tol', help='Invertibility threshold.')
    p.add_argument('--refine-tol', type=float, dest='refine_tol',
                   help='Absolute root acceptance threshold of the Wronskian and determinant scans.')
    p.add_argument('--dim', type=int, default=RunConfig.dim, help='Block dimension for gen.')
    p.add_argument('--width', type=int, default=RunConfig.width, help='Support width for gen.')
    p.add_argument('--bound', type=float, default=RunConfig.bound, help='Block norm bound for gen.')
    p.add_argument('--verbose', '-v', action='store_true', help='Log debug output.')
    return p


def parse_args(argv: Sequence[str] = None) -> RunConfig:
    args = vars(_parser().parse_args(argv))
    inv_tol = args.pop('inv_tol')
    return RunConfig(**args, tolerances=DEFAULT_TOLERANCES.replace(inv_tol=inv_tol))


def main(argv: Sequence[str] = None) -> int:
    config = parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if config.verbose else logging.WARNING,
        format='%(levelname)s %(name)s: %(message)s',
    )
    return run(config)
