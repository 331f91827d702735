# SPDX-License-Identifier: Apache-2.0
"""Code knowledge graph engine.

`Session` wraps one indexed or loaded graph and answers retrieval queries;
the module-level helpers expose tokenization, the hashing embedder and the
offline benchmark runner.
"""

from ._core import (
    ConfigError,
    GraphError,
    InputError,
    Session,
    __version__,
    cosine,
    embed,
    run_eval,
    tokenize,
)

__all__ = [
    "ConfigError",
    "GraphError",
    "InputError",
    "Session",
    "__version__",
    "cosine",
    "embed",
    "run_eval",
    "tokenize",
]
