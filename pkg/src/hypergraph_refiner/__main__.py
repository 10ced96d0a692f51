"""`python -m hypergraph_refiner` 入口。"""

from __future__ import annotations

import sys

from hypergraph_refiner.cli.run import main

if __name__ == "__main__":
    sys.exit(main())
