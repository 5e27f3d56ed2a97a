import subprocess
import sys
import textwrap


def test_numpy_fallback_selected_without_extension():
    script = textwrap.dedent(
        """
        import sys
        sys.modules["lindecomp._kernels"] = None  # makes the import fail
        import numpy as np
        from lindecomp import kernels
        from lindecomp.platform import make_block_fixture
        from lindecomp.protocols import run_kolee
        from lindecomp.attacks import attack_kolee
        assert kernels.available() == ["numpy"] and kernels.active() == "numpy"
        rng = np.random.default_rng(0)
        res = run_kolee(make_block_fixture(2, 2, 2, 2, 1009, rng), rng)
        assert (attack_kolee(res.transcript) == res.key).all()
        print("ok")
        """
    )
    out = subprocess.run([sys.executable, "-c", script], capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "ok"
