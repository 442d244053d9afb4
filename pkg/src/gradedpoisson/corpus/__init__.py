"""Example problem files shipped with the package."""
from pathlib import Path

CORPUS_DIR = Path(__file__).parent


def path(name: str) -> Path:
    return CORPUS_DIR / f"{name}.gp"


def names() -> list[str]:
    return sorted(p.stem for p in CORPUS_DIR.glob("*.gp"))
