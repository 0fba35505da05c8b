"""Configuration loading utilities."""

import yaml
from anystore.io import smart_read
from anystore.types import SDict, Uri
from anystore.util import dict_merge, dump_yaml_model
from pydantic import ValidationError

from spdelab.core.settings import Settings
from spdelab.exceptions import ImproperlyConfigured


def read_config(uri: Uri) -> SDict:
    """Read a yaml experiment config into a dict."""
    try:
        data = yaml.safe_load(smart_read(uri))
    except yaml.YAMLError as e:
        raise ImproperlyConfigured(f"Invalid yaml in `{uri}`: {e}")
    except FileNotFoundError:
        raise ImproperlyConfigured(f"Config `{uri}` not found")
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ImproperlyConfigured(f"Config `{uri}` is not a mapping")
    return data


def load_config(uri: Uri | None = None, **data):
    """
    Load an experiment configuration.

    Values are resolved as keyword data > environment (``SPDELAB_SEED``) >
    config file > defaults.

    Args:
        uri: Yaml config to load, defaults only if omitted
        data: Additional (nested) data to override

    Returns:
        The validated `ExperimentConfig`

    Raises:
        ImproperlyConfigured: On unreadable or invalid configuration
    """
    from spdelab.model.experiment import ExperimentConfig

    config = read_config(uri) if uri else {}
    settings = Settings()
    if "seed" in settings.model_fields_set:
        config = dict_merge(config, {"ensemble": {"master_seed": settings.seed}})
    config = dict_merge(config, data)
    try:
        return ExperimentConfig(**config)
    except (ValidationError, ValueError) as e:
        raise ImproperlyConfigured(f"Invalid experiment config: {e}")


def dump_config(config) -> str:
    """Serialize a config to yaml (loading the result gives it back)."""
    return dump_yaml_model(config, clean=True, newline=True).decode()
