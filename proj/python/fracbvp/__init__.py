"""Solver and verification toolkit for two-sided variable-coefficient
conservative space-fractional diffusion boundary-value problems."""

try:
    from ._core import (  # noqa: F401
        __version__,
        converge,
        find_coercivity_violation,
        gamma,
        identity_suite,
        lambda_beta,
        left_frac_integral,
        one_sided_xi,
        perturbation_check,
        right_frac_integral,
        solve,
        two_sided_integral,
        wellposed,
    )
except ImportError as exc:  # pragma: no cover - build-tree fallback
    import importlib.util as _ilu
    import os as _os
    import sys as _sys

    _ext_dir = _os.environ.get("FRACBVP_EXT_DIR")
    if not _ext_dir:
        raise
    for _name in _os.listdir(_ext_dir):
        if _name.startswith("_core") and _name.endswith((".so", ".pyd")):
            _spec = _ilu.spec_from_file_location(__name__ + "._core",
                                                 _os.path.join(_ext_dir, _name))
            _mod = _ilu.module_from_spec(_spec)
            _spec.loader.exec_module(_mod)
            _sys.modules[__name__ + "._core"] = _mod
            globals().update({k: v for k, v in vars(_mod).items()
                              if not k.startswith("__")})
            __version__ = _mod.__version__
            break
    else:
        raise exc
