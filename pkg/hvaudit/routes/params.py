"""Query-string parsing shared by the API blueprints"""
from flask import current_app, request

from hvaudit.commands import RunConfig, FLOAT_FIELDS

FLOAT_PARAMS = FLOAT_FIELDS
INT_PARAMS = ('n', 'grid', 'theta_points', 'v_points', 'phi_points', 'marginal_points', 'steps', 'dim',
              'matrices', 'workers')
TEXT_PARAMS = ('variant', 'x_rule', 'y', 'seed', 'quantity', 'axis', 'format')
BOOL_PARAMS = ('degrees', 'monte_carlo')


def _parse(name, raw, cast):
    try:
        return cast(raw)
    except ValueError:
        raise ValueError(f"Invalid {name}: {raw!r}")


def _flag(raw):
    return raw.strip().lower() in ('1', 'true', 'yes', 'on')


def config_from_request(command):
    """Build a RunConfig from request.args on top of the app settings"""
    overrides = {'command': command, 'format': 'json'}
    for name in FLOAT_PARAMS:
        if name in request.args:
            overrides[name] = _parse(name, request.args[name], float)
    for name in INT_PARAMS:
        if name in request.args:
            overrides[name] = _parse(name, request.args[name], int)
    for name in TEXT_PARAMS:
        if name in request.args:
            overrides[name] = request.args[name]
    for name in BOOL_PARAMS:
        if name in request.args:
            overrides[name] = _flag(request.args[name])
    return RunConfig.from_settings(current_app.config['HVAUDIT'], **overrides)
