from flask import Blueprint, Response, jsonify
import logging

from hvaudit.cli import render_csv
from hvaudit.commands import run
from hvaudit.routes.params import config_from_request

audit_bp = Blueprint('audit', __name__)
logger = logging.getLogger(__name__)


@audit_bp.route('/audit', methods=['GET'])
def get_audit():
    """Run every audit for one model variant"""
    try:
        logger.info("GET /api/audit - Request received")
        document, exit_code = run(config_from_request('audit'))
        document['expectations_met'] = exit_code == 0
        if exit_code != 0:
            logger.warning(f"Audit expectations not met for variant {document['config']['variant']}")
        return jsonify(document), 200

    except ValueError as e:
        logger.warning(f"Invalid audit request: {str(e)}")
        return jsonify({'error': str(e)}), 400
    except Exception as e:
        logger.error(f"Error running audit: {str(e)}")
        return jsonify({'error': 'Failed to run audit'}), 500


@audit_bp.route('/sweep', methods=['GET'])
def get_sweep():
    """Sweep a quantity along theta or phi; format=csv returns plot-ready CSV"""
    try:
        logger.info("GET /api/sweep - Request received")
        document, _ = run(config_from_request('sweep'))
        if document['config']['format'] == 'csv':
            return Response(render_csv(document), mimetype='text/csv'), 200
        return jsonify(document), 200

    except ValueError as e:
        logger.warning(f"Invalid sweep request: {str(e)}")
        return jsonify({'error': str(e)}), 400
    except Exception as e:
        logger.error(f"Error running sweep: {str(e)}")
        return jsonify({'error': 'Failed to run sweep'}), 500
