"""
Tame Quotient Calculator - Main Application Entry Point

Runs the command line front end from a source checkout.
Run with: python app.py quotient --r 2 --weights 1,1
"""

import sys
from pathlib import Path

# Add src to path for imports
src_path = Path(__file__).parent / "src"
sys.path.insert(0, str(src_path))

from tame_quotients.cli import main

if __name__ == "__main__":
    main()
