from flask import Flask, request
from flask_swagger_ui import get_swaggerui_blueprint
from flask_cors import CORS
from datetime import datetime, timezone
import os
import logging
import yaml

from hvaudit.settings import load_settings, configure_logging


def create_swagger_spec(host='localhost', port=5001):
    """Create swagger specification with dynamic server URL"""
    # Read the base swagger.yaml file
    swagger_file_path = os.path.join(os.path.dirname(__file__), 'static', 'swagger.yaml')
    with open(swagger_file_path, 'r') as file:
        swagger_spec = yaml.safe_load(file)

    # Update the server URL dynamically
    swagger_spec['servers'] = [
        {
            'url': f'http://{host}:{port}',
            'description': 'Local audit server'
        }
    ]

    return swagger_spec


def create_app(settings=None):
    # Initialize Flask app
    app = Flask(__name__)

    settings = settings or load_settings()
    configure_logging(settings.log_level, settings.log_file)
    app.logger.setLevel(getattr(logging, settings.log_level, logging.INFO))
    app.logger.info(f"Audit server starting with log level: {settings.log_level}")

    # Configuration
    app.config['HVAUDIT'] = settings
    app.json.sort_keys = False

    # Read-only API: allow GET from any origin
    CORS(app, resources={
        r"/api/*": {
            "origins": ["*"],
            "methods": ["GET", "OPTIONS"],
            "allow_headers": ["Content-Type"]
        }
    })

    # Import routes
    from hvaudit.routes.oracle import oracle_bp
    from hvaudit.routes.model import model_bp
    from hvaudit.routes.audit import audit_bp
    from hvaudit.routes.lemma import lemma_bp

    # Dynamic swagger endpoint
    @app.route('/api/swagger.json')
    def swagger_spec():
        """Dynamic swagger specification endpoint"""
        host = request.host.split(':')[0] if ':' in request.host else request.host
        port_str = request.host.split(':')[1] if ':' in request.host else '80'
        return create_swagger_spec(host, int(port_str))

    SWAGGER_URL = '/api/docs'
    API_URL = '/api/swagger.json'
    swaggerui_blueprint = get_swaggerui_blueprint(
        SWAGGER_URL,
        API_URL,
        config={
            'app_name': "Hidden-Variable Audit API"
        }
    )
    app.register_blueprint(swaggerui_blueprint, url_prefix=SWAGGER_URL)

    # Register API blueprints
    app.register_blueprint(oracle_bp, url_prefix='/api/oracle')
    app.register_blueprint(model_bp, url_prefix='/api/model')
    app.register_blueprint(audit_bp, url_prefix='/api')
    app.register_blueprint(lemma_bp, url_prefix='/api/lemma')

    @app.route('/api/health')
    def health_check():
        return {'status': 'healthy', 'timestamp': datetime.now(timezone.utc).isoformat()}

    @app.route('/')
    def home():
        from hvaudit import __version__
        return {
            'message': 'Hidden-Variable Audit API',
            'version': __version__,
            'docs': '/api/docs',
            'health': '/api/health'
        }

    return app
