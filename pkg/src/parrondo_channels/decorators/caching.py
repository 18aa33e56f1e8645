import hashlib
import json
import logging
from functools import wraps
from typing import Any, Callable

from ..exceptions import ParrondoChannelsError
from ..utilities import output_file


def cache_ensemble(
    dump: Callable[[Any], dict],
    load: Callable[[Any, dict], Any],
):
    """Cache the result of an ensemble function keyed on the sha256 of its configuration.

    The wrapped function takes the configuration as its first argument and an
    optional `cache_dir` keyword. `dump` turns a result into JSON-ready data,
    `load` rebuilds a result from the configuration and that data. Results
    holding recorded trajectories are never cached.
    """

    def decorator(func):
        @wraps(func)
        def wrapped(config, *args, cache_dir=None, **kwargs):
            if cache_dir is None or getattr(config, "record_trajectories", False):
                return func(config, *args, **kwargs)

            config_json = config.to_json()
            sha256_hash = hashlib.sha256(config_json.encode("utf-8")).hexdigest()
            cache_file = output_file(cache_dir, f"{func.__name__}_{sha256_hash}.json", mkdir=True)

            # Reuse the cached result when the stored configuration matches exactly
            if cache_file.exists():
                try:
                    cached = json.loads(cache_file.read_text())
                    if cached["config"] == json.loads(config_json):
                        logging.info("Reusing cached ensemble %s", cache_file)
                        return load(config, cached["result"])
                    logging.warning("Cache entry %s belongs to another configuration.", cache_file)
                except (ValueError, KeyError, TypeError, ParrondoChannelsError) as e:
                    logging.warning("Ignoring unreadable cache entry %s: %s", cache_file, e)

            result = func(config, *args, **kwargs)
            cache_file.write_text(
                json.dumps({"config": json.loads(config_json), "result": dump(result)})
            )
            logging.debug("Cached ensemble result in %s", cache_file)
            return result

        return wrapped

    return decorator
