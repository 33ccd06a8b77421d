"""
Command implementations shared by the command-line front end and the HTTP
blueprints.

Each ``cmd_*`` function takes a resolved RunConfig and returns
``(document, exit_code)``. The document is the JSON report:

    {command, config, results: [{name, quantity, tolerance, passed, expected, witnesses, ...}],
     seed, version, warnings}

Documents carry no timestamps so a replayed config reproduces them byte for
byte.
"""
import json
import logging
import math
from dataclasses import dataclass, asdict, fields

import numpy as np
import yaml

from hvaudit import __version__
from hvaudit import commutator_lab, hv_models, nonsignaling_audit as audit, quantum_oracle, sampler
from hvaudit.models import Angle, Outcome, HVValue, Variant, OUTCOMES
from hvaudit.settings import load_settings, parse_seed

logger = logging.getLogger(__name__)

COMMANDS = ('oracle', 'model', 'audit', 'sweep', 'lemma')
FORMATS = ('table', 'json', 'csv')
SWEEP_QUANTITIES = ('correlation', 'joint', 'conditional', 'L', 'marginal_y')
FLOAT_FIELDS = ('theta', 'phi', 'v', 'tol', 'confidence', 'start', 'stop')

EXIT_OK = 0
EXIT_EXPECTATION = 1
EXIT_USAGE = 2

# Standard CHSH settings at which the quantum value reaches 2*sqrt(2)
CHSH_SETTINGS = (0.0, math.pi / 4, math.pi / 8, -math.pi / 8)

# Pre-verified hidden-variable witness: phi = pi/3, v = 0.1, y = +1, theta = 0 vs theta = phi
REFERENCE_WITNESS = {'phi': math.pi / 3, 'v': 0.1, 'y': 1, 'thetas': (0.0, math.pi / 3)}


@dataclass
class RunConfig:
    command: str = 'oracle'
    variant: str = 'disjoint'
    x_rule: str = 'threshold'
    theta: float = 0.0
    phi: float = 0.0
    v: float | None = None
    y: int | None = None
    n: int = 100_000
    seed: int = 20080418
    theta_points: int = 50
    v_points: int = 1000
    phi_points: int = 8
    grid: int = 20
    marginal_points: int = 50
    tol: float = 1e-12
    confidence: float = 0.99
    quantity: str = 'correlation'
    axis: str = 'phi'
    start: float = 0.0
    stop: float = math.pi
    steps: int = 100
    monte_carlo: bool = False
    dim: int = 8
    matrices: int = 100
    workers: int = 1
    format: str = 'table'
    out: str | None = None
    degrees: bool = False

    @classmethod
    def from_settings(cls, settings=None, **overrides):
        settings = settings or load_settings()
        base = cls(
            n=settings.trials,
            seed=settings.seed,
            theta_points=settings.theta_points,
            v_points=settings.v_points,
            phi_points=settings.phi_points,
            tol=settings.tolerance,
            confidence=settings.confidence,
            matrices=settings.lemma_matrices,
            workers=settings.workers,
        )
        return base.replace(**overrides)

    def replace(self, **overrides):
        known = {f.name for f in fields(self)}
        unknown = set(overrides) - known
        if unknown:
            raise ValueError(f"Unknown config keys: {sorted(unknown)}")
        values = asdict(self)
        values.update({k: v for k, v in overrides.items() if v is not None})
        return RunConfig(**values)

    def resolved(self):
        """Convert degree inputs to radians and normalise types; the result has degrees=False"""
        config = RunConfig(**asdict(self))
        if config.degrees:
            config.theta = Angle.from_degrees(config.theta).radians
            config.phi = Angle.from_degrees(config.phi).radians
            # sweep bounds are not settings; 180 must stay pi
            config.start = math.radians(config.start)
            config.stop = math.radians(config.stop)
            config.degrees = False
        config.seed = parse_seed(config.seed)
        config.variant = Variant.of(config.variant).value
        if config.y is not None:
            config.y = int(Outcome.of(config.y))
        config.validate()
        return config

    def validate(self):
        if self.command not in COMMANDS:
            raise ValueError(f"Unknown command {self.command!r}. Valid commands: {list(COMMANDS)}")
        if self.format not in FORMATS:
            raise ValueError(f"Unknown format {self.format!r}. Valid formats: {list(FORMATS)}")
        for name in ('theta', 'phi', 'start', 'stop', 'tol', 'confidence'):
            if not math.isfinite(float(getattr(self, name))):
                raise ValueError(f"{name} must be a finite number")
        if self.tol <= 0:
            raise ValueError("tolerance must be positive")
        if not 0.0 < self.confidence < 1.0:
            raise ValueError("confidence must lie in (0, 1)")
        if self.n < 1:
            raise ValueError("zero trials")
        for name in ('theta_points', 'v_points', 'phi_points', 'grid', 'marginal_points', 'matrices', 'workers'):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")
        if self.v is not None:
            HVValue(self.v)
        hv_models.x_rule_by_name(self.x_rule)
        if self.command == 'sweep':
            if self.quantity not in SWEEP_QUANTITIES:
                raise ValueError(f"Unknown sweep quantity {self.quantity!r}. Valid: {list(SWEEP_QUANTITIES)}")
            if self.axis not in ('theta', 'phi'):
                raise ValueError("sweep axis must be theta or phi")
            if self.steps < 1 or not self.stop > self.start:
                raise ValueError("empty sweep range")
        if self.command == 'lemma' and self.dim < 2:
            raise ValueError("dimension must be at least 2")

    def to_dict(self):
        values = asdict(self)
        values['seed_hex'] = hex(self.seed)
        return values


def load_config_file(path):
    """YAML mapping of RunConfig fields; a saved JSON report is accepted and its config replayed"""
    with open(path, 'r') as file:
        if str(path).lower().endswith('.json'):
            data = json.load(file)
        else:
            data = yaml.safe_load(file) or {}
    if not isinstance(data, dict):
        raise ValueError(f"config file {path} must contain a mapping")
    if isinstance(data.get('config'), dict):
        data = data['config']
    data.pop('seed_hex', None)
    # YAML 1.1 reads exponent-only literals such as 1e-12 as strings
    for name in FLOAT_FIELDS:
        if isinstance(data.get(name), str):
            try:
                data[name] = float(data[name])
            except ValueError:
                raise ValueError(f"Invalid {name} in {path}: {data[name]!r}")
    return data


def _document(config, results, warnings=None):
    return {
        'command': config.command,
        'config': config.to_dict(),
        'results': results,
        'seed': config.seed,
        'version': __version__,
        'warnings': list(warnings or []),
    }


def _row(name, quantity, tolerance=None, passed=None, expected=None, witnesses=None, **extra):
    row = {
        'name': name,
        'quantity': quantity,
        'tolerance': tolerance,
        'passed': passed,
        'expected': expected,
        'witnesses': list(witnesses or []),
    }
    row.update(extra)
    return row


def _report_row(report, expected):
    row = report.to_dict()
    row['expected'] = expected
    return row


def _model(config):
    return hv_models.make_model(config.variant, config.x_rule)


def _expectations_met(results):
    return all(r['expected'] is None or r['passed'] == r['expected'] for r in results)


# ---------------------------------------------------------------------------
# oracle
# ---------------------------------------------------------------------------

def cmd_oracle(config):
    theta, phi = Angle(config.theta), Angle(config.phi)
    joint = quantum_oracle.joint_distribution(theta, phi)
    results = []
    for x in OUTCOMES:
        for y in OUTCOMES:
            results.append(_row(f"joint({x.label},{y.label})", joint[x, y]))
    results.append(_row('P[X=Y]', sum(joint[o, o] for o in OUTCOMES)))
    for x in OUTCOMES:
        results.append(_row(f"marginal_x({x.label})", quantum_oracle.marginal_x(theta, phi, x)))
    for y in OUTCOMES:
        results.append(_row(f"marginal_y({y.label})", quantum_oracle.marginal_y(theta, phi, y)))
    for x in OUTCOMES:
        for y in OUTCOMES:
            results.append(_row(f"conditional(y={y.label}|x={x.label})",
                                quantum_oracle.conditional_y_given_x(theta, phi, y, x)))
    results.append(_row('correlation', quantum_oracle.correlation(theta, phi)))
    logger.info(f"oracle at theta={theta.radians:.6f} phi={phi.radians:.6f}")
    return _document(config, results), EXIT_OK


# ---------------------------------------------------------------------------
# model
# ---------------------------------------------------------------------------

def cmd_model(config):
    model = _model(config)
    theta, phi = Angle(config.theta), Angle(config.phi)
    x_run, y_run = hv_models.sample_run(model, theta, phi, np.random.default_rng(config.seed))
    sets = hv_models.response_sets(model, theta, phi)

    results = [_row('sample_run', None, x=int(x_run), y=int(y_run), response_sets=sets.to_dict())]
    seeds = sampler.derive_seeds(config.seed, 6)
    for (x, y), seed in zip([(x, y) for x in OUTCOMES for y in OUTCOMES], seeds):
        estimate = sampler.estimate_joint(model, theta, phi, x, y, config.n, seed, config.confidence, config.workers)
        exact = quantum_oracle.joint_prob(theta, phi, x, y)
        results.append(_row(f"joint({x.label},{y.label})", estimate.p_hat, passed=estimate.covers(exact),
                            expected=True, exact=exact, estimate=estimate.to_dict()))

    if config.v is not None:
        for y in ([Outcome.of(config.y)] if config.y is not None else OUTCOMES):
            estimate = sampler.estimate_L(model, theta, phi, config.v, y, config.n, seeds[4], config.confidence,
                                          config.workers)
            exact = audit.averaged_conditional_L(model, theta, phi, config.v, y)
            results.append(_row(f"L(v={config.v},y={y.label})", estimate.p_hat, passed=estimate.covers(exact),
                                expected=True, exact=exact, estimate=estimate.to_dict()))

    chsh = sampler.estimate_chsh(model, *CHSH_SETTINGS, config.n, seeds[5], config.confidence, config.workers)
    results.append(_row('chsh', chsh.value, passed=chsh.covers(quantum_oracle.TSIRELSON_BOUND), expected=True,
                        exact=quantum_oracle.chsh_value(*CHSH_SETTINGS), estimate=chsh.to_dict()))

    exit_code = EXIT_OK if _expectations_met(results) else EXIT_EXPECTATION
    return _document(config, results), exit_code


# ---------------------------------------------------------------------------
# audit
# ---------------------------------------------------------------------------

def _audit_phis(config):
    phis = audit.uniform_angles(config.phi_points)
    extra = Angle(config.phi)
    if extra not in phis:
        phis.append(extra)
    return phis


def cmd_audit(config):
    model = _model(config)
    disjoint = model.variant is Variant.DISJOINT
    tol = config.tol
    ys = [Outcome.of(config.y)] if config.y is not None else list(OUTCOMES)
    warnings = []
    if tol >= audit.MAX_L_SPREAD:
        warnings.append(f"tolerance exceeds maximal possible spread ({audit.MAX_L_SPREAD})")

    independence_reports = []
    for phi in _audit_phis(config):
        thetas = audit.default_theta_grid(config.theta_points)
        if phi not in thetas:
            thetas.append(phi)
        v_grid = audit.default_v_grid(model, phi, thetas, config.v_points)
        for y in ys:
            independence_reports.append(audit.check_eq10(model, phi, y, thetas, v_grid, tol))
    independence = audit.merge_reports('theta_independence', independence_reports, tol)

    ref = REFERENCE_WITNESS
    scan = audit.theta_scan(model, ref['phi'], ref['v'], ref['y'], list(ref['thetas']))
    reference = _row('theta_independence_witness', scan.spread, tol, scan.spread <= tol, disjoint,
                     witnesses=[scan.to_dict()])

    faithfulness = audit.faithfulness_check(model, audit.settings_grid(config.grid), tol)
    marginals = audit.observable_marginal_check(model, audit.settings_grid(config.marginal_points), tol)

    uniform_points = [(Angle(config.theta), Angle(config.phi)), (Angle(0.0), Angle(ref['phi']))]
    uniform_points += [(t, p) for t in audit.uniform_angles(config.phi_points)
                       for p in audit.uniform_angles(config.phi_points)]
    uniform = audit.merge_reports(
        'uniform_conditional',
        [audit.uniform_conditional_check(model, t, p, tol, config.v_points) for t, p in uniform_points],
        tol,
    )

    u_grid = [k / config.v_points for k in range(config.v_points)]
    alice = audit.check_alice_side(model, Angle(config.theta), _audit_phis(config), u_grid, tol)

    census_thetas = audit.default_theta_grid(config.theta_points)
    census = audit.l_case_census(model, Angle(config.phi), census_thetas,
                                 audit.default_v_grid(model, Angle(config.phi), census_thetas, config.v_points))

    results = [
        _report_row(independence, disjoint),
        reference,
        _report_row(faithfulness, True),
        _report_row(marginals, True),
        _report_row(uniform, disjoint),
        _report_row(alice, True),
        _report_row(census, not disjoint),
    ]
    for row in results:
        if row['name'] != 'l_case_census':
            row['detail'] = row.get('detail', [])[:audit.MAX_WITNESSES]

    met = _expectations_met(results)
    logger.info(f"audit {model.variant.value}: independence spread {independence.quantity}, expectations met: {met}")
    if not met:
        logger.warning(f"audit {model.variant.value}: results differ from the documented behaviour")
    return _document(config, results, warnings), EXIT_OK if met else EXIT_EXPECTATION


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

def sweep_points(config):
    step = (config.stop - config.start) / config.steps
    return [config.start + k * step for k in range(config.steps)]


def _sweep_columns(config):
    if config.quantity == 'correlation':
        columns = ['correlation']
        if config.monte_carlo:
            columns += ['mc_correlation', 'mc_ci_low', 'mc_ci_high']
        return columns
    if config.quantity == 'joint':
        return [f"joint_{x.name.lower()}_{y.name.lower()}" for x in OUTCOMES for y in OUTCOMES]
    if config.quantity == 'conditional':
        return [f"p_y_{y.name.lower()}_given_x_{x.name.lower()}" for x in OUTCOMES for y in OUTCOMES]
    if config.quantity == 'L':
        return ['v', 'l_plus', 'l_minus', 'membership']
    return ['model_marginal_y_plus', 'oracle_marginal_y_plus']


def sweep_rows(config):
    model = _model(config)
    values = sweep_points(config)
    mc_seeds = sampler.derive_seeds(config.seed, len(values)) if config.monte_carlo else []
    v = HVValue(config.v if config.v is not None else REFERENCE_WITNESS['v'])
    rows = []
    for k, value in enumerate(values):
        theta = Angle(value) if config.axis == 'theta' else Angle(config.theta)
        phi = Angle(value) if config.axis == 'phi' else Angle(config.phi)
        row = {'theta': theta.radians, 'phi': phi.radians}
        q = config.quantity
        if q == 'correlation':
            row['correlation'] = quantum_oracle.correlation(theta, phi)
            if config.monte_carlo:
                est = sampler.estimate_correlation(model, theta, phi, config.n, mc_seeds[k], config.confidence,
                                                   config.workers)
                row.update(mc_correlation=est.value, mc_ci_low=est.ci_low, mc_ci_high=est.ci_high)
        elif q == 'joint':
            for x in OUTCOMES:
                for y in OUTCOMES:
                    row[f"joint_{x.name.lower()}_{y.name.lower()}"] = quantum_oracle.joint_prob(theta, phi, x, y)
        elif q == 'conditional':
            for x in OUTCOMES:
                for y in OUTCOMES:
                    row[f"p_y_{y.name.lower()}_given_x_{x.name.lower()}"] = \
                        quantum_oracle.conditional_y_given_x(theta, phi, y, x)
        elif q == 'L':
            row['v'] = v.point
            row['l_plus'] = audit.averaged_conditional_L(model, theta, phi, v, Outcome.PLUS)
            row['l_minus'] = audit.averaged_conditional_L(model, theta, phi, v, Outcome.MINUS)
            row['membership'] = hv_models.classify_membership(model, theta, phi, v).value
        else:
            row['model_marginal_y_plus'] = audit.observable_marginal_y(model, theta, phi, Outcome.PLUS)
            row['oracle_marginal_y_plus'] = quantum_oracle.marginal_y(theta, phi, Outcome.PLUS)
        rows.append(row)
    return ['theta', 'phi'] + _sweep_columns(config), rows


def cmd_sweep(config):
    columns, rows = sweep_rows(config)
    logger.info(f"sweep {config.quantity} over {config.axis}: {len(rows)} rows")
    result = _row('sweep', float(len(rows)), columns=columns, rows=rows)
    return _document(config, [result]), EXIT_OK


# ---------------------------------------------------------------------------
# lemma
# ---------------------------------------------------------------------------

def cmd_lemma(config):
    trials = commutator_lab.lemma_sweep(config.matrices, config.seed, config.dim, config.dim)
    worst = max(trials, key=lambda t: t.norm / t.bound)
    functions_ok = all(t.passed for t in trials)
    lemma_row = _row('function_commutators', max(t.norm for t in trials), worst.bound, functions_ok, True,
                     witnesses=[worst.to_dict()], trials=len(trials), worst_ratio=worst.norm / worst.bound)

    profile = commutator_lab.zp_commutator_profile(config.dim)
    zp_row = _row('zp_commutator', profile.frobenius_norm, None, profile.frobenius_norm > 1.0, True,
                  lower_bound=1.0, **profile.to_dict())

    results = [lemma_row, zp_row]
    return _document(config, results), EXIT_OK if _expectations_met(results) else EXIT_EXPECTATION


HANDLERS = {
    'oracle': cmd_oracle,
    'model': cmd_model,
    'audit': cmd_audit,
    'sweep': cmd_sweep,
    'lemma': cmd_lemma,
}


def run(config):
    """Resolve, validate and dispatch a RunConfig"""
    config = config.resolved()
    logger.debug(f"running {config.command} with {config.to_dict()}")
    return HANDLERS[config.command](config)
