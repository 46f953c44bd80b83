import subprocess
import sys

BLOCK_EXTENSION = """
import sys
class Block:
    def find_spec(self, name, path=None, target=None):
        if name == "rainbowmatch._kernels":
            raise ImportError("blocked")
sys.meta_path.insert(0, Block())
import rainbowmatch
from rainbowmatch import _backend, count_rainbow_matchings, gen_cyclic
assert _backend.available() == ["python"], _backend.available()
print(rainbowmatch.backend(), count_rainbow_matchings(gen_cyclic(5)).count)
"""


def test_falls_back_to_python_kernels():
    proc = subprocess.run([sys.executable, "-c", BLOCK_EXTENSION], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.split() == ["python", "15"]
