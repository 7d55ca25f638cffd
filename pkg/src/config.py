"""
Application Configuration
Manages logging, seeding, and experiment defaults loaded from environment variables
"""
import os
from dotenv import load_dotenv

# Load environment variables
load_dotenv()


class Config:
    """Base configuration class"""

    # Environment
    SELECT_ENV = os.getenv('SELECT_ENV', 'development')
    TESTING = False

    # Logging
    LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO')
    LOG_FILE = os.getenv('LOG_FILE', '')

    # Randomness: omitted --seed flags fall back to this, never to wall-clock entropy
    DEFAULT_SEED = int(os.getenv('DEFAULT_SEED', 0))

    # Verification
    MAX_EXHAUSTIVE_N = int(os.getenv('MAX_EXHAUSTIVE_N', 8))

    # Experiments
    OUTPUT_DIR = os.getenv('OUTPUT_DIR', 'results')
    FIT_MIN_DECADES = float(os.getenv('FIT_MIN_DECADES', 2.0))
    PROBE_MIN_DECADES = float(os.getenv('PROBE_MIN_DECADES', 1.0))


# Configuration instances for different environments
class DevelopmentConfig(Config):
    """Development configuration"""
    LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO')


class ProductionConfig(Config):
    """Production configuration"""
    LOG_LEVEL = os.getenv('LOG_LEVEL', 'WARNING')


class TestingConfig(Config):
    """Testing configuration"""
    TESTING = True
    LOG_LEVEL = os.getenv('LOG_LEVEL', 'WARNING')
    OUTPUT_DIR = os.getenv('TEST_OUTPUT_DIR', 'results/test')


# Get config based on environment
def get_config():
    """Return configuration based on SELECT_ENV"""
    env = os.getenv('SELECT_ENV', 'development')

    if env == 'production':
        return ProductionConfig()
    elif env == 'testing':
        return TestingConfig()
    else:
        return DevelopmentConfig()


config = get_config()
