from stablewalk.massive import plugin_spec
from typing import Dict

import logging
import pluggy


logger = logging.getLogger(__name__)


def setup_plugin_manager():
    from stablewalk.massive.sets import BuiltinFamilies

    plugin_manager = pluggy.PluginManager("stablewalk.massive")
    plugin_manager.add_hookspecs(plugin_spec)
    plugin_manager.register(BuiltinFamilies)
    plugin_manager.load_setuptools_entrypoints("stablewalk.massive")
    return plugin_manager


def validate_families(families) -> Dict[str, Dict]:
    """Keep well formed family descriptors, keyed by name.

    When two plugins declare the same name the one registered last wins,
    so third party plugins can override built-in kinds.
    """
    registry: Dict[str, Dict] = {}
    for family in families:
        valid = True
        if not family:
            logger.info(f"Skip loading empty family '{family}'")
            continue
        for field in ["name", "factory"]:
            if not family.get(field):
                logger.error(
                    f"Skip loading family '{family}'. Missing '{field}' field."
                )
                valid = False
        if valid and not callable(family["factory"]):
            logger.error(f"Skip loading family '{family}'. 'factory' is not callable.")
            valid = False
        if valid:
            registry[family["name"]] = family
    return registry


def family_registry() -> Dict[str, Dict]:
    plugin_manager = setup_plugin_manager()
    # pluggy returns results in reverse registration order
    hook_results = reversed(plugin_manager.hook.massive_set_families())
    return validate_families(family for result in hook_results for family in result)
