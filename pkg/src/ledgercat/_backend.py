"""Select the canonical-labelling kernel at import time.

The compiled extension is used when it was built; set
``LEDGERCAT_PURE_PYTHON=1`` to force the pure-Python twin.
"""

import os

from . import _canon_py

if os.environ.get("LEDGERCAT_PURE_PYTHON", "") not in ("", "0"):
    canonical_order = _canon_py.canonical_order
    BACKEND = "python"
else:
    try:
        from ._canon import canonical_order  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        canonical_order = _canon_py.canonical_order
        BACKEND = "python"

python_canonical_order = _canon_py.canonical_order
