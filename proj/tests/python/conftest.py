import os
import sys

# The CMake test driver points these at the built extension and the python
# package sources so the suite runs without installing the wheel.
for var in ("CAUSALID_EXT_DIR", "CAUSALID_PY_DIR"):
    path = os.environ.get(var)
    if path and path not in sys.path:
        sys.path.insert(0, path)
