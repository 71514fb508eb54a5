# conftest.py - pytest configuration file
import os
import sys

from hypothesis import settings

# Add src directory to Python path for testing
src_dir = os.path.join(os.path.dirname(os.path.abspath(__file__)), "src")
if src_dir not in sys.path:
    sys.path.insert(0, src_dir)

# power iteration and the rainbow oracle have uneven running times
settings.register_profile("default", deadline=None, max_examples=100)
settings.register_profile("thorough", deadline=None, max_examples=2000)
settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "default"))
