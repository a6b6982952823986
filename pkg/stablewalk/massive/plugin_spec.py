from typing import Callable
from typing import Dict
from typing import List
from typing import Union

import pluggy


hookspec = pluggy.HookspecMarker("stablewalk.massive")


@hookspec
def massive_set_families() -> List[Dict[str, Union[str, Callable]]]:
    """Return a list of dicts describing set families this plugin provides.
    The `name` key is the kind used in family specs, `factory` is called
    with the parsed parameters (a dict of strings) and the dimension and
    must return a `stablewalk.massive.sets.SetFamily`, `help` is a one line
    description shown by `massive sets kinds`.

    Called every time a family spec is parsed.

    Example:

    .. code-block:: python

        [
            {
                "name": "squares",
                "factory": lambda params, d: PowerSequence(beta=2),
                "help": "Perfect squares",
            }
        ]
    """
