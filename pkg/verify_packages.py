#!/usr/bin/env python3

"""Checks that the numerical stack is importable and reports the host."""

import sys


def check_python_version():
    """Check the interpreter version"""
    print("🐍 Checking Python version...")
    ok = sys.version_info >= (3, 9)
    mark = "✓" if ok else "✗"
    print(f"  {mark} Python {sys.version_info.major}.{sys.version_info.minor} (3.9 or newer required)")
    return ok


def check_python_packages():
    """Check the runtime and test dependencies"""
    print("\n📦 Checking Python packages...")

    required_packages = {
        'numpy': ('numpy', 'Arrays and counter-based random streams'),
        'scipy': ('scipy', 'Filters, Welch spectra and least squares'),
        'pydantic': ('pydantic', 'Configuration schema'),
        'psutil': ('psutil', 'Worker count and host snapshot'),
        'pytest': ('pytest', 'Test runner'),
        'hypothesis': ('hypothesis', 'Property-based tests'),
    }

    missing_packages = []
    for package_name, (import_name, description) in required_packages.items():
        try:
            module = __import__(import_name)
            version = getattr(module, '__version__', 'unknown')
            print(f"  ✓ {package_name} {version} - {description}")
        except ImportError:
            print(f"  ✗ {package_name} - {description} (MISSING)")
            missing_packages.append(package_name)

    if missing_packages:
        print("\n📦 To install missing Python packages:")
        print(f"pip install {' '.join(missing_packages)}")

    return len(missing_packages) == 0


def check_compute_resources():
    """Report the cores the ensemble runner will use"""
    print("\n🧮 Checking compute resources...")

    try:
        import psutil

        physical = psutil.cpu_count(logical=False)
        logical = psutil.cpu_count(logical=True)
        memory = psutil.virtual_memory().total / (1024 ** 3)
        print(f"  Physical cores: {physical} (default worker count)")
        print(f"  Logical cores: {logical}")
        print(f"  Memory: {memory:.1f} GB")
        # a full 671-run ensemble at 2 MHz for 8 ms keeps ~0.2 GB of samples
        return memory >= 1.0
    except ImportError:
        print("  ❌ psutil not available")
        return False


def check_package_import():
    """Import the package and its bundled configuration"""
    print("\n🔬 Checking nanoexpand...")

    try:
        from nanoexpand import __version__
        from nanoexpand.cli import parse_config

        config = parse_config("paper-defaults")
        print(f"  ✓ nanoexpand {__version__}")
        print(f"  ✓ paper-defaults: S = {config.modulation.depth}, {config.modulation.pulses} pulses, "
              f"ensemble = {config.sim.ensemble}")
        return True
    except Exception as e:
        print(f"  ❌ Import failed: {e}")
        return False


def main():
    print("🔧 nanoexpand Environment Verification\n")

    checks = [
        ("Python Version", check_python_version),
        ("Python Packages", check_python_packages),
        ("Compute Resources", check_compute_resources),
        ("Package Import", check_package_import),
    ]

    passed = 0
    total = len(checks)

    for check_name, check_func in checks:
        try:
            if check_func():
                passed += 1
        except Exception as e:
            print(f"  ❌ {check_name} check failed: {e}")

    print(f"\n📊 Summary: {passed}/{total} checks passed")

    if passed == total:
        print("🎉 All checks passed! Ready to simulate.")
    else:
        print("❌ Setup incomplete. Please address the issues above.")

    return 0 if passed == total else 1


if __name__ == "__main__":
    sys.exit(main())
