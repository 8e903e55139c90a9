import os
from pathlib import Path

import yaml

CONFIG_PATH = Path(__file__).parent / "settings.yaml"


def load_config(path: Path | None = None) -> dict:
    """
    Load the YAML settings. `BLANKET_CONFIG` overrides the bundled file.
    """
    if path is None:
        path = Path(os.environ.get("BLANKET_CONFIG", CONFIG_PATH))

    if not path.exists():
        raise FileNotFoundError(f"Settings file not found: {path}")

    with open(path, "r") as f:
        return yaml.safe_load(f)


CONFIG = load_config()
