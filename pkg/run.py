#!/usr/bin/env python3
"""
Audit API server runner
"""
import sys
import os

# Add the current directory to Python path for package imports
sys.path.insert(0, os.path.dirname(__file__))

from hvaudit import create_app

if __name__ == '__main__':
    app = create_app()
    port = app.config['HVAUDIT'].port

    app.run(debug=os.getenv('FLASK_DEBUG', '0') == '1', host='0.0.0.0', port=port)
