# run.py
"""
Entry point for running the toolkit from a checkout
Usage: python run.py h0 tests/fixtures/p2_o2.json --format json
"""
from klyachko.main import main

if __name__ == "__main__":
    main()
