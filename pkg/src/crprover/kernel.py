"""Term kernel selection.

The compiled ``_ckernel`` extension is used when it is importable; otherwise
the pure-Python ``_pykernel`` twin. Setting ``CRPROVER_PURE=1`` in the
environment forces the fallback (used by the benchmark and parity tests).
"""

import os

if os.environ.get("CRPROVER_PURE", "") not in ("", "0"):
    from ._pykernel import (  # noqa: F401
        BACKEND, Fn, Var, apply, is_ground, is_var, match, occurs, term_depth,
        term_vars, unify, variant,
    )
else:
    try:
        from ._ckernel import (  # noqa: F401
            BACKEND, Fn, Var, apply, is_ground, is_var, match, occurs,
            term_depth, term_vars, unify, variant,
        )
    except ImportError:
        from ._pykernel import (  # noqa: F401
            BACKEND, Fn, Var, apply, is_ground, is_var, match, occurs,
            term_depth, term_vars, unify, variant,
        )
