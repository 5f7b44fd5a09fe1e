import os
import sys

ROOT = os.path.dirname(os.path.abspath(__file__))
for project in ("statfidelity_common", "statfidelity"):
    path = os.path.join(ROOT, project)
    if path not in sys.path:
        sys.path.insert(0, path)
