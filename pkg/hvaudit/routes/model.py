from flask import Blueprint, jsonify
import logging

import numpy as np

from hvaudit import hv_models
from hvaudit.commands import run
from hvaudit.models import Angle
from hvaudit.routes.params import config_from_request

model_bp = Blueprint('model', __name__)
logger = logging.getLogger(__name__)


@model_bp.route('/sample', methods=['GET'])
def sample_model_run():
    """One seeded run of the chosen counter-example model plus its response sets"""
    try:
        logger.info("GET /api/model/sample - Request received")
        config = config_from_request('model').resolved()
        model = hv_models.make_model(config.variant, config.x_rule)
        theta, phi = Angle(config.theta), Angle(config.phi)

        x, y = hv_models.sample_run(model, theta, phi, np.random.default_rng(config.seed))
        logger.debug(f"Sampled run x={int(x)} y={int(y)} seed={config.seed}")

        return jsonify({
            'model': model.describe(),
            'theta': theta.radians,
            'phi': phi.radians,
            'seed': config.seed,
            'x': int(x),
            'y': int(y),
            'response_sets': hv_models.response_sets(model, theta, phi).to_dict()
        }), 200

    except ValueError as e:
        logger.warning(f"Invalid sample request: {str(e)}")
        return jsonify({'error': str(e)}), 400
    except Exception as e:
        logger.error(f"Error sampling model: {str(e)}")
        return jsonify({'error': 'Failed to sample model'}), 500


@model_bp.route('/estimate', methods=['GET'])
def estimate_model():
    """Monte Carlo estimates of the model's joint probabilities against the oracle"""
    try:
        logger.info("GET /api/model/estimate - Request received")
        document, exit_code = run(config_from_request('model'))
        document['expectations_met'] = exit_code == 0
        return jsonify(document), 200

    except ValueError as e:
        logger.warning(f"Invalid estimate request: {str(e)}")
        return jsonify({'error': str(e)}), 400
    except Exception as e:
        logger.error(f"Error estimating model: {str(e)}")
        return jsonify({'error': 'Failed to estimate model'}), 500
