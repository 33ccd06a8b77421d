from flask import Blueprint, jsonify
import logging

from hvaudit.commands import run
from hvaudit.routes.params import config_from_request

lemma_bp = Blueprint('lemma', __name__)
logger = logging.getLogger(__name__)


@lemma_bp.route('', methods=['GET'])
def get_lemma():
    """Function-commutator norms and the truncated [Z, P] profile"""
    try:
        logger.info("GET /api/lemma - Request received")
        document, exit_code = run(config_from_request('lemma'))
        document['expectations_met'] = exit_code == 0
        return jsonify(document), 200

    except ValueError as e:
        logger.warning(f"Invalid lemma request: {str(e)}")
        return jsonify({'error': str(e)}), 400
    except Exception as e:
        logger.error(f"Error running lemma check: {str(e)}")
        return jsonify({'error': 'Failed to run lemma check'}), 500
