"""Test that the package can be imported."""


def test_package_import():
    """Test that lptype_nets can be imported."""
    import lptype_nets
    assert lptype_nets is not None
    assert hasattr(lptype_nets, '__version__')


def test_main_module_import():
    """Test that main modules can be imported."""
    from lptype_nets import __main__
    assert __main__ is not None


def test_public_api():
    from lptype_nets import run_meta, run_mpc, tci_recursive
    assert callable(run_meta) and callable(run_mpc) and callable(tci_recursive)
