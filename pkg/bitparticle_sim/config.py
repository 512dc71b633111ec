import copy
import os
import jsonschema
import yaml

from bitparticle_sim.exceptions import ConfigurationError

grid_schema = {
    "type": "object",
    "additionalProperties": {
        "type": "array",
        "minItems": 1,
        "items": {"type": ["number", "string", "boolean"]},
    },
    "description": "Parameter name to the list of values to sweep.",
}

count_schema = {"type": "integer", "minimum": 1}

experiment_schema = {
    "type": "object",
    "properties": {
        "preset": {
            "type": ["string", "null"],
            "description": "Name of the experiment preset",
        },
        "out": {
            "type": ["string", "null"],
            "description": "Result file; standard output when null",
        },
        "format": {"enum": ["csv", "json"]},
        "seed": {"type": "integer", "minimum": 0},
        "replicates": count_schema,
        "grid": grid_schema,
        "profile": {
            "type": ["string", "null"],
            "description": "Filepath to a per-layer sparsity profile CSV",
        },
        "rows": count_schema,
        "cols": count_schema,
        "steps": count_schema,
        "samples": count_schema,
        "workers": {"type": ["integer", "null"], "minimum": 1},
    },
    "additionalProperties": False,
}


def validate(instance):
    try:
        jsonschema.validate(instance=instance, schema=experiment_schema)
    except jsonschema.ValidationError as e:
        raise ConfigurationError(f"Invalid configuration: {e.message}")


def read_config(path):
    try:
        with open(path, encoding='utf-8') as fp:
            document = yaml.safe_load(fp)
    except OSError as e:
        raise ConfigurationError(f"Cannot read config file: {e}")
    except yaml.YAMLError as e:
        raise ConfigurationError(f"Malformed config file {path}: {e}")
    if document is None:
        document = {}
    validate(document)
    return document


def load_config(path=None, overrides=None):
    """The effective configuration.

    The packaged defaults, then the YAML file at `path`, then `overrides`
    (entries that are None are skipped), each merged over the previous.
    """
    config = copy.deepcopy(DEFAULT_CONFIG)
    if path is not None:
        config.update(read_config(path))
    if overrides:
        config.update({key: value for key, value in overrides.items()
                       if value is not None})
    validate(config)
    return config


# NOTE: importlib replaces setuptools' pkg_resources as of Python 3.7
# See: https://stackoverflow.com/questions/6028000/how-to-read-a-static-file-from-inside-a-python-package # noqa

PACKAGE_NAME = __name__.split('.')[0]
CONFIG_FILE = os.getenv("BPSIM_CFG", "sim_config.yml")

try:
    import importlib.resources as pkg_resources
    with pkg_resources.open_text(PACKAGE_NAME, CONFIG_FILE) as fp:
        DEFAULT_CONFIG = yaml.safe_load(fp)
    validate(DEFAULT_CONFIG)

except ImportError:
    import pkg_resources
    content = pkg_resources.resource_string(PACKAGE_NAME, CONFIG_FILE)
    DEFAULT_CONFIG = yaml.safe_load(content)
    validate(DEFAULT_CONFIG)
