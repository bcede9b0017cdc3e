"""
Moral Frames - command line entry point

    python moral_frames.py build-axes --embeddings glove.txt --out out/
    python moral_frames.py partisan --embeddings glove.txt --corpus news.csv --out out/
"""
import sys

from modules.cli import main

if __name__ == "__main__":
    sys.exit(main())
