import os
import sys

# keep numba single threaded and quiet inside the test run
os.environ.setdefault("NUMBA_NUM_THREADS", "1")

sys.path.insert(0, os.path.dirname(__file__))
