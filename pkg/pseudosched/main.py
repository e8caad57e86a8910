import logging
import os

from flask import Flask
from flask_cors import CORS

from pseudosched import __version__
from pseudosched.config import Settings
from pseudosched.routes.schedule import schedule_bp


def create_app(settings=None):
    settings = settings or Settings.from_env()
    logging.basicConfig(level=settings.log_level)

    app = Flask(__name__)
    app.config['SECRET_KEY'] = os.environ.get('SECRET_KEY', 'pseudosched-dev')
    app.config['PSEUDOSCHED_SETTINGS'] = settings

    # Enable CORS for all routes
    CORS(app)

    # Register blueprints
    app.register_blueprint(schedule_bp, url_prefix='/api')

    @app.route('/')
    def root():
        return {"message": "Pseudo-scheduling API is running", "version": __version__}

    return app


app = create_app()


if __name__ == '__main__':
    app.run(host='0.0.0.0', port=int(os.environ.get('PORT', 5000)), debug=True)
