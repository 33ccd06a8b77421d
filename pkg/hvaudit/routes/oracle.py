from flask import Blueprint, jsonify
import logging

from hvaudit.commands import run
from hvaudit.routes.params import config_from_request

oracle_bp = Blueprint('oracle', __name__)
logger = logging.getLogger(__name__)


@oracle_bp.route('', methods=['GET'])
def get_oracle():
    """Closed-form joint, marginal and conditional probabilities and the correlation"""
    try:
        logger.info("GET /api/oracle - Request received")
        document, _ = run(config_from_request('oracle'))
        return jsonify(document), 200

    except ValueError as e:
        logger.warning(f"Invalid oracle request: {str(e)}")
        return jsonify({'error': str(e)}), 400
    except Exception as e:
        logger.error(f"Error evaluating oracle: {str(e)}")
        return jsonify({'error': 'Failed to evaluate oracle'}), 500
